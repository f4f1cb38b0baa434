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

#include "voxflow/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>

#include "voxflow/errors.hpp"

namespace voxflow {

namespace {

constexpr int kHeaderSize = 348;
constexpr int kVoxOffset = 352;

// NIfTI-1 datatype codes
enum : std::int16_t {
  kUInt8 = 2,
  kInt16 = 4,
  kInt32 = 8,
  kFloat32 = 16,
  kFloat64 = 64,
  kInt8 = 256,
  kUInt16 = 512,
  kUInt32 = 768,
  kInt64 = 1024,
  kUInt64 = 1280,
};

struct GzCloser {
  void operator()(gzFile f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<std::remove_pointer_t<gzFile>, GzCloser>;

template <typename T>
T byteswap(T v) {
  auto* p = reinterpret_cast<unsigned char*>(&v);
  std::reverse(p, p + sizeof(T));
  return v;
}

class HeaderView {
 public:
  HeaderView(const unsigned char* bytes, bool swap) : bytes_(bytes), swap_(swap) {}

  template <typename T>
  T get(std::size_t offset) const {
    T v;
    std::memcpy(&v, bytes_ + offset, sizeof(T));
    return swap_ ? byteswap(v) : v;
  }

 private:
  const unsigned char* bytes_;
  bool swap_;
};

template <typename T>
void put(std::vector<unsigned char>& buf, std::size_t offset, T v) {
  std::memcpy(buf.data() + offset, &v, sizeof(T));
}

std::size_t bytes_per_voxel(std::int16_t datatype) {
  switch (datatype) {
    case kUInt8:
    case kInt8:
      return 1;
    case kInt16:
    case kUInt16:
      return 2;
    case kInt32:
    case kUInt32:
    case kFloat32:
      return 4;
    case kFloat64:
    case kInt64:
    case kUInt64:
      return 8;
    default:
      throw IoError("unsupported NIfTI datatype " + std::to_string(datatype));
  }
}

template <typename T>
double decode_as(const unsigned char* p, bool swap) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if (swap) v = byteswap(v);
  return static_cast<double>(v);
}

double decode(const unsigned char* p, std::int16_t datatype, bool swap) {
  switch (datatype) {
    case kUInt8: return decode_as<std::uint8_t>(p, swap);
    case kInt8: return decode_as<std::int8_t>(p, swap);
    case kInt16: return decode_as<std::int16_t>(p, swap);
    case kUInt16: return decode_as<std::uint16_t>(p, swap);
    case kInt32: return decode_as<std::int32_t>(p, swap);
    case kUInt32: return decode_as<std::uint32_t>(p, swap);
    case kFloat32: return decode_as<float>(p, swap);
    case kFloat64: return decode_as<double>(p, swap);
    case kInt64: return decode_as<std::int64_t>(p, swap);
    case kUInt64: return decode_as<std::uint64_t>(p, swap);
    default: throw IoError("unsupported NIfTI datatype");
  }
}

Affine qform_affine(const HeaderView& h) {
  const double b = h.get<float>(256);
  const double c = h.get<float>(260);
  const double d = h.get<float>(264);
  double a = 1.0 - (b * b + c * c + d * d);
  a = a < 1e-7 ? 0.0 : std::sqrt(a);

  const double dx = h.get<float>(80);
  const double dy = h.get<float>(84);
  double dz = h.get<float>(88);
  const double qfac = h.get<float>(76) < 0 ? -1.0 : 1.0;
  dz *= qfac;

  Affine m = Affine::Identity();
  m(0, 0) = (a * a + b * b - c * c - d * d) * dx;
  m(0, 1) = 2 * (b * c - a * d) * dy;
  m(0, 2) = 2 * (b * d + a * c) * dz;
  m(1, 0) = 2 * (b * c + a * d) * dx;
  m(1, 1) = (a * a + c * c - b * b - d * d) * dy;
  m(1, 2) = 2 * (c * d - a * b) * dz;
  m(2, 0) = 2 * (b * d - a * c) * dx;
  m(2, 1) = 2 * (c * d + a * b) * dy;
  m(2, 2) = (a * a + d * d - c * c - b * b) * dz;
  m(0, 3) = h.get<float>(268);
  m(1, 3) = h.get<float>(272);
  m(2, 3) = h.get<float>(276);
  return m;
}

Affine sform_affine(const HeaderView& h) {
  Affine m = Affine::Identity();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = h.get<float>(280 + 16 * r + 4 * c);
  }
  return m;
}

bool ends_with_gz(const std::filesystem::path& p) { return p.extension() == ".gz"; }

}  // namespace

NiftiImage read_nifti(const std::filesystem::path& path) {
  GzHandle file(gzopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());

  std::vector<unsigned char> header(kHeaderSize);
  if (gzread(file.get(), header.data(), kHeaderSize) != kHeaderSize) {
    throw IoError("truncated NIfTI header in " + path.string());
  }
  std::int32_t sizeof_hdr;
  std::memcpy(&sizeof_hdr, header.data(), 4);
  bool swap = false;
  if (sizeof_hdr != kHeaderSize) {
    if (byteswap(sizeof_hdr) != kHeaderSize) throw IoError(path.string() + " is not NIfTI-1");
    swap = true;
  }
  HeaderView h(header.data(), swap);
  if (std::memcmp(header.data() + 344, "n+1", 4) != 0 &&
      std::memcmp(header.data() + 344, "ni1", 4) != 0) {
    throw IoError(path.string() + " has a bad NIfTI magic string");
  }
  if (std::memcmp(header.data() + 344, "ni1", 4) == 0) {
    throw IoError("two-file NIfTI pairs are not supported: " + path.string());
  }

  const auto rank = h.get<std::int16_t>(40);
  if (rank < 1 || rank > 7) throw IoError("bad NIfTI rank in " + path.string());
  NiftiImage image;
  std::size_t count = 1;
  for (int i = 1; i <= rank; ++i) {
    const auto d = h.get<std::int16_t>(40 + 2 * i);
    if (d < 1) throw IoError("bad NIfTI dimension in " + path.string());
    image.dims.push_back(static_cast<std::size_t>(d));
    count *= static_cast<std::size_t>(d);
  }

  const auto qform_code = h.get<std::int16_t>(252);
  const auto sform_code = h.get<std::int16_t>(254);
  if (sform_code > 0) {
    image.affine = sform_affine(h);
  } else if (qform_code > 0) {
    image.affine = qform_affine(h);
  } else {
    throw ValidityError(path.string() + " carries no sform or qform transform");
  }

  const auto datatype = h.get<std::int16_t>(70);
  const std::size_t bpv = bytes_per_voxel(datatype);
  const auto vox_offset = static_cast<long>(h.get<float>(108));
  if (vox_offset < kHeaderSize) throw IoError("bad vox_offset in " + path.string());
  if (gzseek(file.get(), vox_offset, SEEK_SET) != vox_offset) {
    throw IoError("cannot seek to voxel data in " + path.string());
  }

  std::vector<unsigned char> raw(count * bpv);
  std::size_t done = 0;
  while (done < raw.size()) {
    const auto chunk = static_cast<unsigned>(std::min<std::size_t>(raw.size() - done, 1u << 30));
    const int got = gzread(file.get(), raw.data() + done, chunk);
    if (got <= 0) throw IoError("truncated voxel data in " + path.string());
    done += static_cast<std::size_t>(got);
  }

  double slope = h.get<float>(112);
  double inter = h.get<float>(116);
  const bool scaled = std::isfinite(slope) && slope != 0.0 && !(slope == 1.0 && inter == 0.0);
  if (!std::isfinite(inter)) inter = 0.0;

  image.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    double v = decode(raw.data() + i * bpv, datatype, swap);
    image.values[i] = scaled ? v * slope + inter : v;
  }
  return image;
}

void write_nifti(const std::filesystem::path& path, const NiftiImage& image) {
  if (image.dims.empty() || image.dims.size() > 7) throw ShapeError("NIfTI rank must be 1..7");
  check_affine(image.affine);

  std::vector<unsigned char> buf(kVoxOffset, 0);
  put<std::int32_t>(buf, 0, kHeaderSize);
  put<std::int16_t>(buf, 40, static_cast<std::int16_t>(image.dims.size()));
  for (int i = 0; i < 7; ++i) {
    const std::int16_t d =
        i < static_cast<int>(image.dims.size()) ? static_cast<std::int16_t>(image.dims[i]) : 1;
    put<std::int16_t>(buf, 42 + 2 * i, d);
  }
  put<std::int16_t>(buf, 70, kFloat64);
  put<std::int16_t>(buf, 72, 64);
  put<float>(buf, 76, 1.0f);
  for (int i = 0; i < 3; ++i) {
    put<float>(buf, 80 + 4 * i, static_cast<float>(image.affine.block<3, 1>(0, i).norm()));
  }
  for (int i = 3; i < 7; ++i) put<float>(buf, 80 + 4 * i, 1.0f);
  put<float>(buf, 108, static_cast<float>(kVoxOffset));
  put<float>(buf, 112, 1.0f);
  put<float>(buf, 116, 0.0f);
  buf[123] = 2 | 8;  // mm, s
  put<std::int16_t>(buf, 252, 0);
  put<std::int16_t>(buf, 254, 1);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      put<float>(buf, 280 + 16 * r + 4 * c, static_cast<float>(image.affine(r, c)));
    }
  }
  std::memcpy(buf.data() + 344, "n+1", 4);

  static_assert(std::endian::native == std::endian::little, "writer assumes little-endian");
  const auto* data = reinterpret_cast<const unsigned char*>(image.values.data());
  const std::size_t nbytes = image.values.size() * sizeof(double);

  if (ends_with_gz(path)) {
    GzHandle file(gzopen(path.c_str(), "wb6"));
    if (!file) throw IoError("cannot write " + path.string());
    if (gzwrite(file.get(), buf.data(), static_cast<unsigned>(buf.size())) !=
        static_cast<int>(buf.size())) {
      throw IoError("write failed for " + path.string());
    }
    std::size_t done = 0;
    while (done < nbytes) {
      const auto chunk = static_cast<unsigned>(std::min<std::size_t>(nbytes - done, 1u << 30));
      if (gzwrite(file.get(), data + done, chunk) != static_cast<int>(chunk)) {
        throw IoError("write failed for " + path.string());
      }
      done += chunk;
    }
    if (gzclose(file.release()) != Z_OK) throw IoError("write failed for " + path.string());
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(nbytes));
    if (!out) throw IoError("write failed for " + path.string());
  }
}

Sample nifti_to_sample(const NiftiImage& image) {
  std::array<std::size_t, 4> d{1, 1, 1, 1};
  const auto rank = image.dims.size();
  if (rank <= 4) {
    for (std::size_t i = 0; i < rank; ++i) d[i] = image.dims[i];
  } else if (rank == 5 && image.dims[3] == 1) {
    // NIfTI vector convention: time axis singleton, components in dim 5
    d = {image.dims[0], image.dims[1], image.dims[2], image.dims[4]};
  } else {
    throw ShapeError("cannot map NIfTI volume of rank " + std::to_string(rank) + " to a Sample");
  }

  const std::size_t nx = d[0], ny = d[1], nz = d[2], nf = d[3];
  std::vector<double> v(nx * ny * nz * nf);
  // file order: x fastest, then y, z, feature
  std::size_t src = 0;
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t k = 0; k < nz; ++k) {
      for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
          v[((i * ny + j) * nz + k) * nf + f] = image.values[src++];
        }
      }
    }
  }
  return Sample(NdArray({1, nx, ny, nz, nf}, std::move(v)), {image.affine});
}

NiftiImage sample_to_nifti(const Sample& s, std::size_t b) {
  if (b >= s.batch()) throw IndexError("batch index out of range");
  const auto& sh = s.shape();
  NiftiImage image;
  image.dims = {sh[1], sh[2], sh[3]};
  if (sh[4] > 1) image.dims.push_back(sh[4]);
  image.affine = s.affine(b);
  image.values.reserve(sh[1] * sh[2] * sh[3] * sh[4]);
  for (std::size_t f = 0; f < sh[4]; ++f) {
    for (std::size_t k = 0; k < sh[3]; ++k) {
      for (std::size_t j = 0; j < sh[2]; ++j) {
        for (std::size_t i = 0; i < sh[1]; ++i) image.values.push_back(s(b, i, j, k, f));
      }
    }
  }
  return image;
}

}  // namespace voxflow
