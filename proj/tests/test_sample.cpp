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
#include "voxflow/sample.hpp"

namespace voxflow {
namespace {

using testing::spacing_affine;

TEST(SampleTest, AbsentAffineBecomesIdentityStack) {
  const Sample s(NdArray({2, 100, 100, 1, 3}, 1.0));
  EXPECT_EQ(s.batch(), 2u);
  EXPECT_EQ(s.features(), 3u);
  ASSERT_EQ(s.affines().size(), 2u);
  EXPECT_EQ(s.affine(0), Affine::Identity());
  EXPECT_EQ(s.affine(1), Affine::Identity());
}

TEST(SampleTest, AbsentAffineEqualsExplicitIdentity) {
  const NdArray data({2, 3, 4, 5, 2}, 7.0);
  EXPECT_EQ(Sample(data), Sample(data, {Affine::Identity(), Affine::Identity()}));
}

TEST(SampleTest, EchoesGivenAffine) {
  const Affine a = spacing_affine(0.9, 0.9, 1.1, {1, -2, 3});
  const Sample s(NdArray({1, 24, 24, 15, 1}, 0.0), {a});
  EXPECT_EQ(s.affine(0), a);
  EXPECT_EQ(s.spatial(), (Size3{24, 24, 15}));
}

TEST(SampleTest, RejectsWrongRank) { EXPECT_THROW(Sample(NdArray({2, 100, 100, 3}, 1.0)), ShapeError); }

TEST(SampleTest, RejectsAffineCountMismatch) {
  EXPECT_THROW(Sample(NdArray({2, 2, 2, 2, 1}, 0.0), {Affine::Identity()}), ShapeError);
}

TEST(SampleTest, RejectsBadLastRow) {
  Affine a = Affine::Identity();
  a(3, 0) = 1e-9;
  EXPECT_THROW(Sample(NdArray({1, 2, 2, 2, 1}, 0.0), {a}), ValidityError);
}

TEST(SampleTest, CopiesShareStorage) {
  const Sample a = testing::ramp({3, 3, 3});
  const Sample b = a;
  EXPECT_EQ(a.values().data(), b.values().data());
}

TEST(SampleTest, BatchElementSlicesDataAndAffine) {
  const Affine a1 = spacing_affine(2, 2, 2);
  const Sample s(NdArray({2, 1, 1, 2, 1}, std::vector<double>{1, 2, 3, 4}), {Affine::Identity(), a1});
  const Sample e = s.batch_element(1);
  EXPECT_EQ(e.batch(), 1u);
  EXPECT_EQ(e.values()[0], 3);
  EXPECT_EQ(e.values()[1], 4);
  EXPECT_EQ(e.affine(0), a1);
  EXPECT_THROW(s.batch_element(2), IndexError);
}

TEST(PromoteTest, ScalarBecomesSingleton) {
  const NdArray out = promote(NdArray::scalar(45), {});
  EXPECT_EQ(out.shape, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(out.values[0], 45);
}

TEST(PromoteTest, PlaneGetsSingletons) {
  const NdArray in({100, 100}, 2.0);
  const std::vector<AxisRole> roles{AxisRole::Spatial0, AxisRole::Spatial1};
  EXPECT_EQ(promote(in, roles).shape, (std::vector<std::size_t>{1, 100, 100, 1, 1}));
}

TEST(PromoteTest, BatchedImageGetsSingletonThirdAxis) {
  const NdArray in({2, 100, 100, 3}, 1.0);
  const std::vector<AxisRole> roles{AxisRole::Batch, AxisRole::Spatial0, AxisRole::Spatial1, AxisRole::Feature};
  EXPECT_EQ(promote(in, roles).shape, (std::vector<std::size_t>{2, 100, 100, 1, 3}));
}

TEST(PromoteTest, ReordersAxes) {
  // input (feature=2, s0=3): value = 10 * f + i
  NdArray in({2, 3}, 0.0);
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t i = 0; i < 3; ++i) in.values[f * 3 + i] = 10.0 * f + i;
  }
  const std::vector<AxisRole> roles{AxisRole::Feature, AxisRole::Spatial0};
  const Sample s(promote(in, roles));
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s(0, i, 0, 0, f), 10.0 * f + i);
  }
}

TEST(PromoteTest, RejectsDuplicateRole) {
  const std::vector<AxisRole> roles{AxisRole::Spatial0, AxisRole::Spatial0};
  EXPECT_THROW(promote(NdArray({2, 2}, 0.0), roles), ArgumentError);
}

TEST(VoxelToWorldTest, Identity) {
  const Sample s(NdArray({1, 6, 6, 6, 1}, 0.0));
  EXPECT_EQ(voxel_to_world(s, 0, {3, 4, 5}), Eigen::Vector3d(3, 4, 5));
}

TEST(VoxelToWorldTest, Translation) {
  const Sample s(NdArray({1, 2, 2, 2, 1}, 0.0), {spacing_affine(1, 1, 1, {10, 0, 0})});
  EXPECT_EQ(voxel_to_world(s, 0, {0, 0, 0}), Eigen::Vector3d(10, 0, 0));
}

TEST(VoxelToWorldTest, IsotropicSpacing) {
  const Sample s(NdArray({1, 2, 2, 2, 1}, 0.0), {spacing_affine(2, 2, 2)});
  EXPECT_EQ(voxel_to_world(s, 0, {1, 1, 1}), Eigen::Vector3d(2, 2, 2));
}

TEST(VoxelToWorldTest, OutOfBounds) {
  const Sample s(NdArray({1, 2, 2, 2, 1}, 0.0));
  EXPECT_THROW(voxel_to_world(s, 0, {2, 0, 0}), IndexError);
  EXPECT_THROW(voxel_to_world(s, 0, {0, -1, 0}), IndexError);
  EXPECT_THROW(voxel_to_world(s, 1, {0, 0, 0}), IndexError);
}

TEST(ComposeOffsetTest, IdentityOffsetColumn) {
  const Affine c = compose_offset(Affine::Identity(), {5, 0, 0});
  EXPECT_EQ(c.col(3), Eigen::Vector4d(5, 0, 0, 1));
}

TEST(ComposeOffsetTest, SpacingScalesOffset) {
  const Affine a = spacing_affine(2, 2, 2, {1, 1, 1});
  const Affine c = compose_offset(a, {1, 1, 1});
  EXPECT_EQ(c.col(3), Eigen::Vector4d(3, 3, 3, 1));
  EXPECT_EQ((c.topLeftCorner<3, 3>()), (a.topLeftCorner<3, 3>()));
}

TEST(ComposeOffsetTest, ZeroOffsetIsNeutral) {
  std::mt19937_64 gen(3);
  const Affine a = testing::random_affine(gen);
  EXPECT_EQ(compose_offset(a, {0, 0, 0}), a);
}

// Dyadic entries keep every product and sum exact, so equality is bitwise.
TEST(ComposeOffsetTest, AdditiveOverOffsets) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> entry(-64, 64);
  std::uniform_int_distribution<std::int64_t> off(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    Affine a = Affine::Identity();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) a(r, c) = entry(gen) / 8.0;
    }
    const Index3 u{off(gen), off(gen), off(gen)};
    const Index3 v{off(gen), off(gen), off(gen)};
    const Index3 uv{u[0] + v[0], u[1] + v[1], u[2] + v[2]};
    EXPECT_EQ(compose_offset(a, uv), compose_offset(compose_offset(a, u), v));
  }
}

TEST(ComposeOffsetTest, CropOriginMatchesSourceVoxel) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Affine a = testing::random_affine(gen);
    const Sample src(NdArray({1, 8, 8, 8, 1}, 0.0), {a});
    const Index3 off{static_cast<std::int64_t>(trial % 8), 3, 7};
    const Sample crop(NdArray({1, 1, 1, 1, 1}, 0.0), {compose_offset(a, off)});
    EXPECT_LT((voxel_to_world(crop, 0, {0, 0, 0}) - voxel_to_world(src, 0, off)).norm(), 1e-9);
  }
}

TEST(AffineCloseTest, Tolerance) {
  Affine b = Affine::Identity();
  b(0, 3) = 0.9e-5;
  EXPECT_TRUE(affine_close(Affine::Identity(), b));
  b(0, 3) = 2e-5;
  EXPECT_FALSE(affine_close(Affine::Identity(), b));
}

}  // namespace
}  // namespace voxflow
