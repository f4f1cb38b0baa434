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

#include <Eigen/Geometry>
#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "voxflow/nifti.hpp"
#include "voxflow/random.hpp"
#include "voxflow/sample.hpp"

namespace voxflow::testing {

inline NdArray volume_array(const Size3& size, std::size_t features, const std::vector<double>& values) {
  return NdArray({1, static_cast<std::size_t>(size[0]), static_cast<std::size_t>(size[1]),
                  static_cast<std::size_t>(size[2]), features},
                 values);
}

/// Value at flat index i is i + offset.
inline Sample ramp(const Size3& size, std::size_t features = 1, double offset = 0.0,
                   const Affine& affine = Affine::Identity()) {
  std::vector<double> v(static_cast<std::size_t>(size[0] * size[1] * size[2]) * features);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i) + offset;
  return Sample(volume_array(size, features, v), {affine});
}

inline Sample constant(const Size3& size, double value, std::size_t features = 1,
                       const Affine& affine = Affine::Identity()) {
  return Sample(NdArray({1, static_cast<std::size_t>(size[0]), static_cast<std::size_t>(size[1]),
                         static_cast<std::size_t>(size[2]), features},
                        value),
                {affine});
}

inline Sample random_volume(std::mt19937_64& gen, const Size3& size, const Affine& affine,
                            std::size_t features = 1) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<double> v(static_cast<std::size_t>(size[0] * size[1] * size[2]) * features);
  for (auto& x : v) x = u(gen);
  return Sample(volume_array(size, features, v), {affine});
}

/// Rotation, anisotropic spacing and translation; last row exact.
inline Affine random_affine(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::uniform_real_distribution<double> spacing(0.3, 3.0);
  std::uniform_real_distribution<double> shift(-200.0, 200.0);
  Eigen::Matrix3d r = (Eigen::AngleAxisd(angle(gen), Eigen::Vector3d::UnitZ()) *
                       Eigen::AngleAxisd(angle(gen), Eigen::Vector3d::UnitY()) *
                       Eigen::AngleAxisd(angle(gen), Eigen::Vector3d::UnitX()))
                          .toRotationMatrix();
  Affine a = Affine::Identity();
  a.topLeftCorner<3, 3>() = r * Eigen::Vector3d(spacing(gen), spacing(gen), spacing(gen)).asDiagonal();
  a.topRightCorner<3, 1>() = Eigen::Vector3d(shift(gen), shift(gen), shift(gen));
  return a;
}

/// `a` with every entry rounded to float, the precision of NIfTI-1 srow fields.
inline Affine float_affine(const Affine& a) { return a.cast<float>().cast<double>(); }

inline Affine spacing_affine(double sx, double sy, double sz, const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
  Affine a = Affine::Identity();
  a(0, 0) = sx;
  a(1, 1) = sy;
  a(2, 2) = sz;
  a.topRightCorner<3, 1>() = t;
  return a;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    const std::string name = "voxflow_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes batch element 0 of `s` as a NIfTI file.
inline void write_volume(const std::filesystem::path& path, const Sample& s) { write_nifti(path, sample_to_nifti(s)); }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline double max_abs_diff(const Sample& a, const Sample& b) {
  double m = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  return m;
}

}  // namespace voxflow::testing
