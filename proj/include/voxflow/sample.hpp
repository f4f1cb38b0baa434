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
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace voxflow {

/// Homogeneous voxel-to-world map (millimeters).
using Affine = Eigen::Matrix4d;
using Index3 = std::array<std::int64_t, 3>;
using Size3 = std::array<std::int64_t, 3>;
/// Batch, three spatial axes, feature.
using Shape5 = std::array<std::size_t, 5>;

inline constexpr double kAffineTolerance = 1e-5;

/// Dense row-major array of arbitrary rank. The last axis varies fastest.
struct NdArray {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  NdArray() = default;
  NdArray(std::vector<std::size_t> shape_, std::vector<double> values_);
  NdArray(std::vector<std::size_t> shape_, double fill);

  static NdArray scalar(double value) { return NdArray({}, {value}); }

  std::size_t rank() const { return shape.size(); }
  std::size_t element_count() const;

  friend bool operator==(const NdArray&, const NdArray&) = default;
};

enum class AxisRole { Batch, Spatial0, Spatial1, Spatial2, Feature };

/// Reorders and pads `data` into a rank-5 (batch, s0, s1, s2, feature)
/// array. `roles[i]` names the role of input axis i; every role not listed
/// becomes a singleton axis.
NdArray promote(const NdArray& data, std::span<const AxisRole> roles);

/// Immutable 5D tensor plus one voxel-to-world affine per batch element.
/// Copies share storage.
class Sample {
 public:
  /// Identity affines for every batch element.
  explicit Sample(NdArray data);
  Sample(NdArray data, std::vector<Affine> affines);

  const Shape5& shape() const { return shape_; }
  std::size_t batch() const { return shape_[0]; }
  Size3 spatial() const {
    return {static_cast<std::int64_t>(shape_[1]), static_cast<std::int64_t>(shape_[2]),
            static_cast<std::int64_t>(shape_[3])};
  }
  std::size_t features() const { return shape_[4]; }
  std::size_t element_count() const { return data_->size(); }

  std::span<const double> values() const { return *data_; }
  std::size_t offset(std::size_t b, std::size_t i, std::size_t j, std::size_t k,
                     std::size_t f) const {
    return (((b * shape_[1] + i) * shape_[2] + j) * shape_[3] + k) * shape_[4] + f;
  }
  double operator()(std::size_t b, std::size_t i, std::size_t j, std::size_t k,
                    std::size_t f = 0) const {
    return (*data_)[offset(b, i, j, k, f)];
  }

  const Affine& affine(std::size_t b) const { return (*affines_)[b]; }
  const std::vector<Affine>& affines() const { return *affines_; }

  /// Single-batch Sample holding element `b`.
  Sample batch_element(std::size_t b) const;
  NdArray to_array() const;

  /// Bitwise equality of shape, values and affines.
  friend bool operator==(const Sample& a, const Sample& b);

 private:
  Shape5 shape_{};
  std::shared_ptr<const std::vector<double>> data_;
  std::shared_ptr<const std::vector<Affine>> affines_;
};

/// World position (mm) of voxel `idx` of batch element `b`.
Eigen::Vector3d voxel_to_world(const Sample& s, std::size_t b, const Index3& idx);

/// a * T(offset): the returned map sends index (0,0,0) to where `a` sends `offset`.
Affine compose_offset(const Affine& a, const Index3& offset);

/// Elementwise absolute comparison.
bool affine_close(const Affine& a, const Affine& b, double tol = kAffineTolerance);

/// Throws ValidityError unless the last row is exactly (0,0,0,1).
void check_affine(const Affine& a);

std::string shape_string(const Shape5& shape);
std::string shape_string(std::span<const std::size_t> shape);

}  // namespace voxflow
