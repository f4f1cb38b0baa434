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

#include "voxflow/sample.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "voxflow/errors.hpp"

namespace voxflow {

namespace {

std::size_t product(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

NdArray::NdArray(std::vector<std::size_t> shape_, std::vector<double> values_)
    : shape(std::move(shape_)), values(std::move(values_)) {
  if (values.size() != product(shape)) {
    throw ShapeError("array of shape " + shape_string(shape) + " needs " +
                     std::to_string(product(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
}

NdArray::NdArray(std::vector<std::size_t> shape_, double fill)
    : shape(std::move(shape_)), values(product(shape), fill) {}

std::size_t NdArray::element_count() const { return product(shape); }

NdArray promote(const NdArray& data, std::span<const AxisRole> roles) {
  if (roles.size() != data.rank()) {
    throw ArgumentError("promote: " + std::to_string(roles.size()) + " roles for a rank-" +
                        std::to_string(data.rank()) + " array");
  }
  // position of each role among the input axes, or -1
  std::array<int, 5> source_axis;
  source_axis.fill(-1);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    auto r = static_cast<std::size_t>(roles[i]);
    if (source_axis[r] != -1) throw ArgumentError("promote: duplicate axis role");
    source_axis[r] = static_cast<int>(i);
  }

  std::vector<std::size_t> out_shape(5, 1);
  for (std::size_t r = 0; r < 5; ++r) {
    if (source_axis[r] >= 0) out_shape[r] = data.shape[source_axis[r]];
  }

  std::vector<std::size_t> in_strides(data.rank(), 1);
  for (std::size_t i = data.rank(); i-- > 1;) in_strides[i - 1] = in_strides[i] * data.shape[i];

  NdArray out(out_shape, 0.0);
  std::array<std::size_t, 5> idx{};
  for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t r = 5; r-- > 0;) {
      idx[r] = rem % out_shape[r];
      rem /= out_shape[r];
    }
    std::size_t src = 0;
    for (std::size_t r = 0; r < 5; ++r) {
      if (source_axis[r] >= 0) src += idx[r] * in_strides[source_axis[r]];
    }
    out.values[flat] = data.values[src];
  }
  return out;
}

void check_affine(const Affine& a) {
  if (a(3, 0) != 0.0 || a(3, 1) != 0.0 || a(3, 2) != 0.0 || a(3, 3) != 1.0) {
    throw ValidityError("affine last row must be (0, 0, 0, 1)");
  }
}

Sample::Sample(NdArray data) : Sample(data, {}) {}

Sample::Sample(NdArray data, std::vector<Affine> affines) {
  if (data.rank() != 5) {
    throw ShapeError("Sample data must have rank 5, got shape " + shape_string(data.shape));
  }
  if (data.values.size() != data.element_count()) {
    throw ShapeError("Sample data size does not match its shape");
  }
  std::copy(data.shape.begin(), data.shape.end(), shape_.begin());
  if (affines.empty()) {
    affines.assign(shape_[0], Affine::Identity());
  } else if (affines.size() != shape_[0]) {
    throw ShapeError("Sample has batch size " + std::to_string(shape_[0]) + " but " +
                     std::to_string(affines.size()) + " affines");
  }
  for (const auto& a : affines) check_affine(a);
  data_ = std::make_shared<const std::vector<double>>(std::move(data.values));
  affines_ = std::make_shared<const std::vector<Affine>>(std::move(affines));
}

Sample Sample::batch_element(std::size_t b) const {
  if (b >= batch()) throw IndexError("batch index out of range");
  const std::size_t stride = data_->size() / batch();
  std::vector<double> v(data_->begin() + static_cast<std::ptrdiff_t>(b * stride),
                        data_->begin() + static_cast<std::ptrdiff_t>((b + 1) * stride));
  return Sample(NdArray({1, shape_[1], shape_[2], shape_[3], shape_[4]}, std::move(v)),
                {affine(b)});
}

NdArray Sample::to_array() const {
  return NdArray(std::vector<std::size_t>(shape_.begin(), shape_.end()), *data_);
}

bool operator==(const Sample& a, const Sample& b) {
  if (a.shape_ != b.shape_) return false;
  if (a.data_ != b.data_ && *a.data_ != *b.data_) return false;
  for (std::size_t i = 0; i < a.batch(); ++i) {
    if (a.affine(i) != b.affine(i)) return false;
  }
  return true;
}

Eigen::Vector3d voxel_to_world(const Sample& s, std::size_t b, const Index3& idx) {
  if (b >= s.batch()) throw IndexError("batch index out of range");
  const auto size = s.spatial();
  for (int a = 0; a < 3; ++a) {
    if (idx[a] < 0 || idx[a] >= size[a]) throw IndexError("voxel index out of range");
  }
  Eigen::Vector4d v(static_cast<double>(idx[0]), static_cast<double>(idx[1]),
                    static_cast<double>(idx[2]), 1.0);
  return (s.affine(b) * v).head<3>();
}

Affine compose_offset(const Affine& a, const Index3& offset) {
  Affine t = Affine::Identity();
  for (int i = 0; i < 3; ++i) t(i, 3) = static_cast<double>(offset[i]);
  return a * t;
}

bool affine_close(const Affine& a, const Affine& b, double tol) {
  return ((a - b).cwiseAbs().array() <= tol).all();
}

std::string shape_string(std::span<const std::size_t> shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ')';
  return os.str();
}

std::string shape_string(const Shape5& shape) { return shape_string(std::span(shape)); }

}  // namespace voxflow
