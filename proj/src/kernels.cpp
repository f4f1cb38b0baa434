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

#include "voxflow/kernels.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "voxflow/errors.hpp"

namespace voxflow::kernels {

namespace {

std::size_t voxels(const Size3& s) {
  return static_cast<std::size_t>(s[0] * s[1] * s[2]);
}

Shape5 with_spatial(const Shape5& shape, const Size3& spatial) {
  return {shape[0], static_cast<std::size_t>(spatial[0]), static_cast<std::size_t>(spatial[1]),
          static_cast<std::size_t>(spatial[2]), shape[4]};
}

NdArray make_array(const Shape5& shape, std::vector<double> values) {
  return NdArray({shape.begin(), shape.end()}, std::move(values));
}

}  // namespace

Index3 center_offset(const Size3& in, const Size3& out) {
  return {floor_div(in[0] - out[0], 2), floor_div(in[1] - out[1], 2), floor_div(in[2] - out[2], 2)};
}

Sample flip(const Sample& s, const std::array<bool, 3>& axes) {
  if (!axes[0] && !axes[1] && !axes[2]) return s;
  const auto& sh = s.shape();
  const auto src = s.values();
  std::vector<double> out(src.size());
  for (std::size_t b = 0; b < sh[0]; ++b) {
    for (std::size_t i = 0; i < sh[1]; ++i) {
      const std::size_t si = axes[0] ? sh[1] - 1 - i : i;
      for (std::size_t j = 0; j < sh[2]; ++j) {
        const std::size_t sj = axes[1] ? sh[2] - 1 - j : j;
        for (std::size_t k = 0; k < sh[3]; ++k) {
          const std::size_t sk = axes[2] ? sh[3] - 1 - k : k;
          const std::size_t o = s.offset(b, i, j, k, 0);
          const std::size_t p = s.offset(b, si, sj, sk, 0);
          std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(p), sh[4],
                      out.begin() + static_cast<std::ptrdiff_t>(o));
        }
      }
    }
  }
  Affine reflect = Affine::Identity();
  for (int a = 0; a < 3; ++a) {
    if (axes[a]) {
      reflect(a, a) = -1.0;
      reflect(a, 3) = static_cast<double>(sh[a + 1]) - 1.0;
    }
  }
  std::vector<Affine> affines;
  for (const auto& a : s.affines()) affines.push_back(a * reflect);
  return Sample(make_array(sh, std::move(out)), std::move(affines));
}

Sample threshold(const Sample& s, double lower, std::optional<double> upper) {
  const auto src = s.values();
  std::vector<double> out(src.size());
  std::transform(src.begin(), src.end(), out.begin(), [&](double v) {
    return (lower < v && (!upper || v <= *upper)) ? 1.0 : 0.0;
  });
  return Sample(make_array(s.shape(), std::move(out)), s.affines());
}

Sample crop(const Sample& s, const Index3& start, const Size3& size, double fill) {
  for (auto n : size) {
    if (n <= 0) throw ShapeError("crop size must be positive");
  }
  const auto& sh = s.shape();
  const Shape5 out_shape = with_spatial(sh, size);
  const std::size_t F = sh[4];
  std::vector<double> out(sh[0] * voxels(size) * F, fill);
  const auto src = s.values();
  const Size3 in = s.spatial();
  for (std::size_t b = 0; b < sh[0]; ++b) {
    for (std::int64_t i = 0; i < size[0]; ++i) {
      const std::int64_t si = start[0] + i;
      if (si < 0 || si >= in[0]) continue;
      for (std::int64_t j = 0; j < size[1]; ++j) {
        const std::int64_t sj = start[1] + j;
        if (sj < 0 || sj >= in[1]) continue;
        // contiguous run along axis 2
        const std::int64_t k0 = std::max<std::int64_t>(0, -start[2]);
        const std::int64_t k1 = std::min<std::int64_t>(size[2], in[2] - start[2]);
        if (k0 >= k1) continue;
        const std::size_t p = s.offset(b, static_cast<std::size_t>(si), static_cast<std::size_t>(sj),
                                       static_cast<std::size_t>(start[2] + k0), 0);
        const std::size_t o =
            ((((b * out_shape[1]) + static_cast<std::size_t>(i)) * out_shape[2] + static_cast<std::size_t>(j)) *
                 out_shape[3] +
             static_cast<std::size_t>(k0)) *
            F;
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(p), static_cast<std::size_t>(k1 - k0) * F,
                    out.begin() + static_cast<std::ptrdiff_t>(o));
      }
    }
  }
  std::vector<Affine> affines;
  for (const auto& a : s.affines()) affines.push_back(compose_offset(a, start));
  return Sample(make_array(out_shape, std::move(out)), std::move(affines));
}

Sample center_crop(const Sample& s, const Size3& size) {
  const Size3 in = s.spatial();
  for (int a = 0; a < 3; ++a) {
    if (size[a] > in[a]) {
      throw ShapeError("crop target " + std::to_string(size[a]) + " exceeds input extent " +
                       std::to_string(in[a]) + " along axis " + std::to_string(a));
    }
  }
  if (size == in) return s;
  return crop(s, center_offset(in, size), size);
}

std::vector<std::int64_t> grid_starts(std::int64_t extent, std::int64_t size, std::int64_t overlap) {
  if (size <= 0) throw ArgumentError("grid crop size must be positive");
  if (overlap < 0 || overlap >= size) {
    throw ArgumentError("grid crop overlap must be in [0, size)");
  }
  if (size >= extent) return {floor_div(extent - size, 2)};
  const std::int64_t stride = size - overlap;
  std::vector<std::int64_t> starts;
  for (std::int64_t s = 0; s + size < extent; s += stride) starts.push_back(s);
  starts.push_back(extent - size);
  return starts;
}

std::vector<Index3> grid_tiles(const Size3& extent, const Size3& size, const Size3& overlap) {
  const auto s0 = grid_starts(extent[0], size[0], overlap[0]);
  const auto s1 = grid_starts(extent[1], size[1], overlap[1]);
  const auto s2 = grid_starts(extent[2], size[2], overlap[2]);
  std::vector<Index3> tiles;
  tiles.reserve(s0.size() * s1.size() * s2.size());
  for (auto a : s0) {
    for (auto b : s1) {
      for (auto c : s2) tiles.push_back({a, b, c});
    }
  }
  return tiles;
}

Sample concat_batch(std::span<const Sample> parts) {
  if (parts.empty()) throw ArgumentError("cannot concatenate zero Samples");
  if (parts.size() == 1) return parts[0];
  const Shape5& first = parts[0].shape();
  std::size_t batch = 0;
  for (const auto& p : parts) {
    const Shape5& sh = p.shape();
    if (!std::equal(sh.begin() + 1, sh.end(), first.begin() + 1)) {
      throw ShapeError("cannot concatenate shapes " + shape_string(first) + " and " + shape_string(sh));
    }
    batch += sh[0];
  }
  std::vector<double> values;
  std::vector<Affine> affines;
  for (const auto& p : parts) {
    values.insert(values.end(), p.values().begin(), p.values().end());
    affines.insert(affines.end(), p.affines().begin(), p.affines().end());
  }
  Shape5 shape = first;
  shape[0] = batch;
  return Sample(make_array(shape, std::move(values)), std::move(affines));
}

Sample put(const Sample& reference, std::span<const Sample> patches, Aggregation aggregation,
           double fill) {
  constexpr double kTolerance = 1e-3;
  const Size3 extent = reference.spatial();
  std::size_t F = patches.empty() ? reference.features() : patches.front().features();
  for (const auto& p : patches) {
    if (p.features() != F) {
      throw ShapeError("put: patches disagree on the feature count (" + std::to_string(F) + " vs " +
                       std::to_string(p.features()) + ")");
    }
  }
  const Shape5 shape{1, reference.shape()[1], reference.shape()[2], reference.shape()[3], F};
  std::vector<double> sums(voxels(extent) * F, 0.0);
  std::vector<double> out(sums.size(), fill);
  std::vector<std::uint32_t> counts(voxels(extent), 0);
  const Affine ref_inverse = reference.affine(0).inverse();

  for (const auto& p : patches) {
    const Size3 ps = p.spatial();
    const auto src = p.values();
    for (std::size_t b = 0; b < p.batch(); ++b) {
      const Affine rel = ref_inverse * p.affine(b);
      Index3 t{};
      bool aligned = ((rel.topLeftCorner<3, 3>() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= kTolerance);
      for (int a = 0; a < 3 && aligned; ++a) {
        const double v = rel(a, 3);
        t[a] = static_cast<std::int64_t>(std::llround(v));
        aligned = std::abs(v - static_cast<double>(t[a])) <= kTolerance;
      }
      if (!aligned) {
        throw AlignmentError("put: patch is not an integer voxel offset of the reference grid");
      }
      for (std::int64_t i = 0; i < ps[0]; ++i) {
        const std::int64_t oi = t[0] + i;
        if (oi < 0 || oi >= extent[0]) continue;
        for (std::int64_t j = 0; j < ps[1]; ++j) {
          const std::int64_t oj = t[1] + j;
          if (oj < 0 || oj >= extent[1]) continue;
          for (std::int64_t k = 0; k < ps[2]; ++k) {
            const std::int64_t ok = t[2] + k;
            if (ok < 0 || ok >= extent[2]) continue;
            const std::size_t voxel = static_cast<std::size_t>((oi * extent[1] + oj) * extent[2] + ok);
            const std::size_t from = p.offset(b, static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                              static_cast<std::size_t>(k), 0);
            ++counts[voxel];
            for (std::size_t f = 0; f < F; ++f) {
              if (aggregation == Aggregation::Average) {
                sums[voxel * F + f] += src[from + f];
              } else {
                out[voxel * F + f] = src[from + f];
              }
            }
          }
        }
      }
    }
  }
  if (aggregation == Aggregation::Average) {
    for (std::size_t v = 0; v < counts.size(); ++v) {
      if (counts[v] == 0) continue;
      for (std::size_t f = 0; f < F; ++f) out[v * F + f] = sums[v * F + f] / counts[v];
    }
  }
  return Sample(make_array(shape, std::move(out)), {reference.affine(0)});
}

Affine deformation_matrix(const DeformationParams& p, const Eigen::Vector3d& center) {
  Eigen::Affine3d m = Eigen::Affine3d::Identity();
  m.translate(center);
  m.translate(Eigen::Vector3d(p.translation[0], p.translation[1], p.translation[2]));
  m.rotate(Eigen::AngleAxisd(p.rotation[2], Eigen::Vector3d::UnitZ()));
  m.rotate(Eigen::AngleAxisd(p.rotation[1], Eigen::Vector3d::UnitY()));
  m.rotate(Eigen::AngleAxisd(p.rotation[0], Eigen::Vector3d::UnitX()));
  m.scale(Eigen::Vector3d(p.scaling[0], p.scaling[1], p.scaling[2]));
  m.translate(-center);
  Affine out = m.matrix();
  out.row(3) << 0.0, 0.0, 0.0, 1.0;
  return out;
}

Eigen::Vector3d world_center(const Sample& s, std::size_t b) {
  const Size3 sp = s.spatial();
  const Eigen::Vector4d c((static_cast<double>(sp[0]) - 1.0) / 2.0, (static_cast<double>(sp[1]) - 1.0) / 2.0,
                          (static_cast<double>(sp[2]) - 1.0) / 2.0, 1.0);
  return (s.affine(b) * c).head<3>();
}

Sample resample(const Sample& s, const Affine& world_map, Interpolation interpolation, double fill) {
  if (world_map == Affine::Identity()) return s;
  constexpr double kSnap = 1e-9;
  const auto& sh = s.shape();
  const std::size_t F = sh[4];
  const std::int64_t n0 = static_cast<std::int64_t>(sh[1]);
  const std::int64_t n1 = static_cast<std::int64_t>(sh[2]);
  const std::int64_t n2 = static_cast<std::int64_t>(sh[3]);
  const auto src = s.values();
  std::vector<double> out(src.size(), fill);
  const Affine world_inverse = world_map.inverse();

  auto snap = [](double x) {
    const double r = std::round(x);
    return std::abs(x - r) <= kSnap ? r : x;
  };
  auto inside = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
    return i >= 0 && j >= 0 && k >= 0 && i < n0 && j < n1 && k < n2;
  };

  for (std::size_t b = 0; b < sh[0]; ++b) {
    const Affine A = s.affine(b);
    const Affine voxel_map = A.inverse() * world_inverse * A;
    for (std::int64_t i = 0; i < n0; ++i) {
      for (std::int64_t j = 0; j < n1; ++j) {
        for (std::int64_t k = 0; k < n2; ++k) {
          const Eigen::Vector4d v(static_cast<double>(i), static_cast<double>(j), static_cast<double>(k), 1.0);
          const Eigen::Vector4d q = voxel_map * v;
          const double x = snap(q[0]);
          const double y = snap(q[1]);
          const double z = snap(q[2]);
          const std::size_t o = s.offset(b, static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                         static_cast<std::size_t>(k), 0);
          if (interpolation == Interpolation::Nearest) {
            const auto xi = static_cast<std::int64_t>(std::llround(x));
            const auto yi = static_cast<std::int64_t>(std::llround(y));
            const auto zi = static_cast<std::int64_t>(std::llround(z));
            if (!inside(xi, yi, zi)) continue;
            const std::size_t p = s.offset(b, static_cast<std::size_t>(xi), static_cast<std::size_t>(yi),
                                           static_cast<std::size_t>(zi), 0);
            for (std::size_t f = 0; f < F; ++f) out[o + f] = src[p + f];
            continue;
          }
          const double fx = std::floor(x);
          const double fy = std::floor(y);
          const double fz = std::floor(z);
          const std::int64_t x0 = static_cast<std::int64_t>(fx);
          const std::int64_t y0 = static_cast<std::int64_t>(fy);
          const std::int64_t z0 = static_cast<std::int64_t>(fz);
          if (x0 < -1 || y0 < -1 || z0 < -1 || x0 >= n0 || y0 >= n1 || z0 >= n2) continue;
          const double w[3] = {x - fx, y - fy, z - fz};
          for (std::size_t f = 0; f < F; ++f) {
            double acc = 0.0;
            for (int c = 0; c < 8; ++c) {
              const int dx = c >> 2 & 1;
              const int dy = c >> 1 & 1;
              const int dz = c & 1;
              const double weight =
                  (dx ? w[0] : 1.0 - w[0]) * (dy ? w[1] : 1.0 - w[1]) * (dz ? w[2] : 1.0 - w[2]);
              if (weight == 0.0) continue;
              const std::int64_t xi = x0 + dx;
              const std::int64_t yi = y0 + dy;
              const std::int64_t zi = z0 + dz;
              const double v = inside(xi, yi, zi)
                                   ? src[s.offset(b, static_cast<std::size_t>(xi), static_cast<std::size_t>(yi),
                                                  static_cast<std::size_t>(zi), f)]
                                   : fill;
              acc += weight * v;
            }
            out[o + f] = acc;
          }
        }
      }
    }
  }
  return Sample(make_array(sh, std::move(out)), s.affines());
}

}  // namespace voxflow::kernels
