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

#include "voxflow/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "voxflow/errors.hpp"

namespace voxflow {

Identifier::Identifier(CatalogIdentifier id) : value_(std::move(id)) {
  const auto& c = std::get<CatalogIdentifier>(value_);
  if (!c.mirc) throw ArgumentError("catalog identifier without a catalog");
  c.mirc->record(c.key);
}

std::string Identifier::describe() const {
  if (const auto* c = catalog()) return c->key.dataset_id + "/" + c->key.case_id + "/" + c->key.record_id;
  return "direct[" + std::to_string(direct()->samples.size()) + "]";
}

Sampler::Sampler(std::vector<Identifier> items, SamplerOptions options)
    : Sampler(
          [&] {
            std::vector<std::vector<Identifier>> groups;
            groups.reserve(items.size());
            for (auto& it : items) groups.push_back({std::move(it)});
            return groups;
          }(),
          std::move(options), 0) {}

Sampler Sampler::grouped(std::vector<std::vector<Identifier>> groups, SamplerOptions options) {
  return Sampler(std::move(groups), std::move(options), 0);
}

Sampler::Sampler(std::vector<std::vector<Identifier>> groups, SamplerOptions options, int)
    : groups_(std::move(groups)), shuffle_(options.shuffle), rng_(options.seed) {
  for (const auto& g : groups_) {
    if (g.empty()) throw ArgumentError("sampler group without alternatives");
  }
  if (!options.weights.empty()) {
    if (options.weights.size() != groups_.size()) {
      throw ArgumentError("sampler needs one weight per item");
    }
    double total = 0.0;
    for (double w : options.weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("sampler weights must be non-negative");
      total += w;
      cumulative_.push_back(total);
    }
    if (total <= 0.0) throw ArgumentError("sampler weights must not all be zero");
  }
  order_.reserve(groups_.size());
  for (std::size_t i = 0; i < groups_.size(); ++i) order_.emplace_back(i, 0);
}

void Sampler::randomize() {
  if (!shuffle_ || groups_.empty()) return;
  const std::size_t n = groups_.size();
  std::vector<std::size_t> picks(n);
  if (cumulative_.empty()) {
    for (std::size_t i = 0; i < n; ++i) picks[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(picks[i], picks[rng_.index(i + 1)]);
  } else {
    const double total = cumulative_.back();
    for (auto& p : picks) {
      const double u = rng_.uniform01() * total;
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      p = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), n - 1));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = picks[i];
    order_[i] = {g, groups_[g].size() == 1 ? 0 : rng_.index(groups_[g].size())};
  }
}

const Identifier& Sampler::operator[](std::size_t i) const {
  if (i >= order_.size()) {
    throw IndexError("sampler index " + std::to_string(i) + " out of range (size " +
                     std::to_string(order_.size()) + ")");
  }
  const auto [g, a] = order_[i];
  return groups_[g][a];
}

Sampler catalog_sampler(std::shared_ptr<const Mirc> mirc, SamplingMode mode, bool shuffle,
                        std::uint64_t seed) {
  if (!mirc || mirc->record_keys().empty()) throw ArgumentError("cannot sample an empty catalog");
  std::vector<std::vector<Identifier>> groups;
  for (const auto& d : mirc->datasets()) {
    for (const auto& c : d.cases()) {
      std::vector<Identifier> records;
      for (const auto& r : c.records()) {
        records.emplace_back(CatalogIdentifier{mirc, {d.id(), c.id(), r.id()}});
      }
      if (records.empty()) continue;
      if (mode == SamplingMode::PerCase) {
        groups.push_back(std::move(records));
      } else {
        for (auto& r : records) groups.push_back({std::move(r)});
      }
    }
  }
  return Sampler::grouped(std::move(groups), {.shuffle = shuffle, .weights = {}, .seed = seed});
}

}  // namespace voxflow
