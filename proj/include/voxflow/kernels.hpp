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

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "voxflow/sample.hpp"

/// Pure Sample-to-Sample operations used by the transformer nodes.
namespace voxflow::kernels {

/// Floor division that rounds toward negative infinity.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Start of a centered block of size `out` inside an extent `in`: floor((in - out) / 2).
Index3 center_offset(const Size3& in, const Size3& out);

/// Reverses voxel order along the selected axes. The affine is composed
/// with i -> (S - 1 - i) so each voxel keeps its world position.
Sample flip(const Sample& s, const std::array<bool, 3>& axes);

/// 1 where lower < v (and v <= upper when given), else 0.
Sample threshold(const Sample& s, double lower, std::optional<double> upper = std::nullopt);

/// Axis-aligned block [start, start + size) of every batch element. Voxels
/// outside the source read `fill`. Affines are composed with `start`.
Sample crop(const Sample& s, const Index3& start, const Size3& size, double fill = 0.0);

/// Centered crop with floor offsets; ShapeError when size exceeds the input.
Sample center_crop(const Sample& s, const Size3& size);

/// Tile starts along one axis: stride size - overlap, the last tile clamped
/// inward so tiles end exactly at the extent. A tile larger than the
/// extent is centered (negative start).
std::vector<std::int64_t> grid_starts(std::int64_t extent, std::int64_t size, std::int64_t overlap);

/// Raster-ordered tile starts (axis 2 fastest). ArgumentError when overlap >= size.
std::vector<Index3> grid_tiles(const Size3& extent, const Size3& size, const Size3& overlap);

/// Concatenation along the batch axis; spatial shape and features must match.
Sample concat_batch(std::span<const Sample> parts);

enum class Aggregation { Average, Overwrite };

/// Pastes every batch element of `patches` into the voxel grid of
/// `reference` (batch element 0). Each patch affine must equal the
/// reference affine composed with an integer offset (tolerance 1e-3 voxel),
/// otherwise AlignmentError. Out-of-bounds parts are clipped; voxels without
/// contributions keep `fill`. The result has batch 1, the reference affine
/// and the patches' feature count.
Sample put(const Sample& reference, std::span<const Sample> patches,
           Aggregation aggregation = Aggregation::Average, double fill = 0.0);

enum class Interpolation { Linear, Nearest };

struct DeformationParams {
  std::array<double, 3> rotation{};     // radians, about world axes 0, 1, 2
  std::array<double, 3> translation{};  // mm
  std::array<double, 3> scaling{1.0, 1.0, 1.0};
};

/// World-space map T(center) T(translation) Rz Ry Rx S T(-center).
Affine deformation_matrix(const DeformationParams& p, const Eigen::Vector3d& center);

/// World coordinate of the geometric center of batch element `b`.
Eigen::Vector3d world_center(const Sample& s, std::size_t b = 0);

/// Moves content by the world map `world_map`, resampling onto the input's
/// own grid: out(v) = in(A^-1 M^-1 A v). Reads outside the volume yield
/// `fill`. Shape and affines are unchanged.
Sample resample(const Sample& s, const Affine& world_map, Interpolation interpolation,
                double fill = 0.0);

}  // namespace voxflow::kernels
