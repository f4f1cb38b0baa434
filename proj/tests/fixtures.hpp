// Copyright 2026 The voxflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <random>
#include <string>

#include "support.hpp"
#include "voxflow/catalog.hpp"
#include "voxflow/graph.hpp"
#include "voxflow/sampling.hpp"

namespace voxflow::testing {

/// Cases "subject_<i>" with one record "record_0" holding "flair" (values in
/// [-1, 1), about half positive) and "gt" (labels 0/1), both on one affine.
inline std::shared_ptr<const Mirc> synthetic_catalog(int cases, const Size3& size, std::uint64_t seed = 0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto mirc = std::make_shared<Mirc>();
  Dataset d("train_dataset");
  const std::size_t count = static_cast<std::size_t>(size[0] * size[1] * size[2]);
  const std::vector<std::size_t> shape{1, static_cast<std::size_t>(size[0]), static_cast<std::size_t>(size[1]),
                                       static_cast<std::size_t>(size[2]), 1};
  for (int c = 0; c < cases; ++c) {
    std::vector<double> flair(count);
    std::vector<double> gt(count);
    for (std::size_t i = 0; i < count; ++i) {
      flair[i] = u(gen);
      gt[i] = flair[i] > 0.5 ? 1.0 : 0.0;
    }
    const Affine a = spacing_affine(1.0, 1.0, 1.0 + 0.1 * c, {-0.5 * size[0], 2.0 * c, 0});
    d.add(Case("subject_" + std::to_string(c))
              .add(Record("record_0")
                       .add(Modality::array("flair", NdArray(shape, std::move(flair)), a))
                       .add(Modality::array("gt", NdArray(shape, std::move(gt)), a))));
  }
  mirc->add(std::move(d));
  return mirc;
}

inline Identifier catalog_record(const std::shared_ptr<const Mirc>& mirc, int c) {
  return Identifier(CatalogIdentifier{mirc, {"train_dataset", "subject_" + std::to_string(c), "record_0"}});
}

/// input -> split -> affine deformation -> flip (n=2) -> threshold mask ->
/// random crop (n=4) over (x, y).
struct TrainingGraph {
  Graph graph;
  Connection x_y, x, y;
  std::vector<Connection> deformed, flipped, crops;
  Connection mask;
};

inline TrainingGraph training_graph(const Size3& crop = {17, 17, 17}, const Size3& y_crop = {9, 9, 9}) {
  TrainingGraph t;
  t.x_y = t.graph.catalog_input({"flair", "gt"}, 1, {DeclaredShape{1, std::nullopt, std::nullopt, std::nullopt, 1}});
  t.x = t.graph.split(t.x_y, {0});
  t.y = t.graph.split(t.x_y, {1});
  AffineDeformationParams deform;
  deform.rotation_window_width = {1, 0, 0};
  deform.translation_window_width = {10, 10, 0};
  deform.interpolation = {Interpolation::Linear, Interpolation::Nearest};
  t.deformed = t.graph.affine_deformation(t.x, {t.x, t.y}, deform);
  t.flipped = t.graph.flip(t.deformed, {{0.5, 0, 0}}, 2);
  t.mask = t.graph.threshold(t.flipped[0], {0.0, std::nullopt});
  t.crops = t.graph.random_crop(t.mask, t.flipped, {{crop, y_crop}, true, 0.0}, 4);
  return t;
}

}  // namespace voxflow::testing
