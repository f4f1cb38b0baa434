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

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "voxflow/errors.hpp"
#include "voxflow/model.hpp"

namespace voxflow {
namespace {

using testing::TempDir;

// Direct window sum, independent of the summed-volume table.
double box_mean_at(const Sample& s, const Size3& w, std::size_t i, std::size_t j, std::size_t k) {
  double sum = 0.0;
  for (std::int64_t a = 0; a < w[0]; ++a) {
    for (std::int64_t b = 0; b < w[1]; ++b) {
      for (std::int64_t c = 0; c < w[2]; ++c) sum += s(0, i + a, j + b, k + c);
    }
  }
  return sum / static_cast<double>(w[0] * w[1] * w[2]);
}

TEST(ModelTest, BoxMeanGeometryMatchesPatchChain) {
  // valid 33^3 window on an 85^3 patch: 85 - 33 + 1 = 53, offset (85 - 53) / 2 = 16
  const BoxMeanModel model({33, 33, 33});
  const Affine a = testing::spacing_affine(1.5, 1.5, 2.0, {3, 4, 5});
  const Sample in = testing::ramp({85, 85, 85}, 1, 0.0, a);
  const std::vector<Sample> inputs{in};
  const auto out = apply_model(model, model.contract(), inputs);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].spatial(), (Size3{53, 53, 53}));
  EXPECT_TRUE(affine_close(out[0].affine(0), compose_offset(a, {16, 16, 16}), 1e-12));
}

TEST(ModelTest, BoxMeanValuesMatchDirectSum) {
  std::mt19937_64 gen(31);
  const Sample in = testing::random_volume(gen, {9, 8, 7}, Affine::Identity());
  const Size3 w{3, 2, 4};
  const BoxMeanModel model(w);
  const std::vector<Sample> inputs{in};
  const Sample out = apply_model(model, model.contract(), inputs)[0];
  ASSERT_EQ(out.spatial(), (Size3{7, 7, 4}));
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) {
      for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(out(0, i, j, k), box_mean_at(in, w, i, j, k), 1e-9);
    }
  }
}

TEST(ModelTest, IdentityModelPassesThrough) {
  std::mt19937_64 gen(1);
  const Sample in = testing::random_volume(gen, {4, 5, 6}, testing::random_affine(gen), 2);
  const IdentityModel model;
  const std::vector<Sample> inputs{in};
  EXPECT_EQ(apply_model(model, model.contract(), inputs)[0], in);
}

TEST(ModelTest, ValidConvMatchesHandComputation) {
  // 1x1x2 kernel [1, -1]: forward difference along axis 2
  const ValidConvModel model({1, 1, 2}, {1.0, -1.0}, 0.5);
  const Sample in = testing::ramp({2, 2, 3});
  const std::vector<Sample> inputs{in};
  const Sample out = apply_model(model, model.contract(), inputs)[0];
  ASSERT_EQ(out.spatial(), (Size3{2, 2, 2}));
  for (double v : out.values()) EXPECT_DOUBLE_EQ(v, -1.0 + 0.5);
  EXPECT_THROW(ValidConvModel({3, 3, 3}, {1.0}), ArgumentError);
}

TEST(ModelTest, WrongShapeIsContractError) {
  ModelContract promised{{OutputContract{{32, 32, 32}, std::nullopt, std::nullopt}}};
  const FunctionModel model("shrinks_by_31", promised, [](std::span<const NdArray> in) {
    const auto& sh = in[0].shape;
    return std::vector<NdArray>{NdArray({sh[0], sh[1] - 31, sh[2] - 31, sh[3] - 31, sh[4]}, 0.0)};
  });
  const std::vector<Sample> inputs{testing::constant({85, 85, 85}, 1.0)};
  EXPECT_THROW(apply_model(model, promised, inputs), ContractError);
}

TEST(ModelTest, ExplicitOutputToInput) {
  Affine half = testing::spacing_affine(2, 2, 2, {0.5, 0.5, 0.5});
  ModelContract contract{{OutputContract{{4, 4, 4}, 3, half}}};
  const FunctionModel model("downsample", contract, [](std::span<const NdArray>) {
    return std::vector<NdArray>{NdArray({1, 4, 4, 4, 3}, 1.0)};
  });
  const Affine a = testing::spacing_affine(1, 1, 1, {10, 0, 0});
  const std::vector<Sample> inputs{testing::constant({8, 8, 8}, 0.0, 1, a)};
  const Sample out = apply_model(model, contract, inputs)[0];
  EXPECT_EQ(out.features(), 3u);
  EXPECT_EQ(out.affine(0), a * half);
}

TEST(ModelTest, JsonRoundTripAndHash) {
  const BoxMeanModel box({5, 5, 3});
  const auto back = model_from_json(model_to_json(box));
  EXPECT_EQ(back->type(), "box_mean");
  EXPECT_EQ(model_hash(*back), model_hash(box));
  EXPECT_EQ(model_hash(box).size(), 16u);
  EXPECT_NE(model_hash(box), model_hash(BoxMeanModel({5, 5, 5})));
  const ValidConvModel conv({1, 1, 2}, {0.25, 0.75}, 1.0);
  EXPECT_EQ(model_hash(*model_from_json(model_to_json(conv))), model_hash(conv));
  EXPECT_THROW(model_from_json({{"type", "transformer"}, {"parameters", {}}}), FormatError);
}

TEST(ModelTest, ContractJsonRoundTrip) {
  ModelContract c{{OutputContract{{2, 2, 2}, 4, testing::spacing_affine(1, 2, 3, {1, 1, 1})}, OutputContract{}}};
  EXPECT_EQ(contract_from_json(contract_to_json(c)), c);
  EXPECT_THROW(contract_from_json(nlohmann::json::array()), FormatError);
}

TEST(ModelTest, ModelFile) {
  TempDir dir;
  const BoxMeanModel box({3, 3, 3});
  save_model_file(dir / "m.json", box);
  EXPECT_EQ(model_hash(*load_model_file(dir / "m.json")), model_hash(box));
  testing::write_text(dir / "bad.json", R"({"format": "voxflow-model", "version": 2, "model": {}})");
  EXPECT_THROW(load_model_file(dir / "bad.json"), FormatError);
  EXPECT_THROW(load_model_file(dir / "absent.json"), IoError);
}

}  // namespace
}  // namespace voxflow
