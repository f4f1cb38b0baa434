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

#include "voxflow/image_io.hpp"

#include <png.h>
// jpeglib.h needs FILE and size_t declared first
#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <memory>
#include <string>
#include <vector>

#include "voxflow/errors.hpp"

namespace voxflow {

namespace {

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<unsigned char> pixels;  // row-major, interleaved channels
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

Raster read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format &= (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA);
  Raster r;
  r.width = image.width;
  r.height = image.height;
  r.channels = PNG_IMAGE_SAMPLE_CHANNELS(image.format);
  r.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, r.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return r;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr info) {
  auto* err = reinterpret_cast<JpegErrorManager*>(info->err);
  (*info->err->format_message)(info, err->message);
  std::longjmp(err->jump, 1);
}

Raster read_jpeg(const std::filesystem::path& path) {
  FileHandle file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());

  jpeg_decompress_struct info{};
  JpegErrorManager err{};
  info.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  Raster r;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&info);
    throw IoError("cannot decode JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&info);
  jpeg_stdio_src(&info, file.get());
  jpeg_read_header(&info, TRUE);
  jpeg_start_decompress(&info);
  r.width = info.output_width;
  r.height = info.output_height;
  r.channels = static_cast<std::size_t>(info.output_components);
  r.pixels.resize(r.width * r.height * r.channels);
  while (info.output_scanline < info.output_height) {
    JSAMPROW row = r.pixels.data() + info.output_scanline * r.width * r.channels;
    jpeg_read_scanlines(&info, &row, 1);
  }
  jpeg_finish_decompress(&info);
  jpeg_destroy_decompress(&info);
  return r;
}

Sample raster_to_sample(const Raster& r) {
  const std::size_t w = r.width, h = r.height, c = r.channels;
  std::vector<double> v(w * h * c);
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t col = 0; col < w; ++col) {
      for (std::size_t f = 0; f < c; ++f) {
        v[(col * h + row) * c + f] = r.pixels[(row * w + col) * c + f];
      }
    }
  }
  return Sample(NdArray({1, w, h, 1, c}, std::move(v)));
}

Raster sample_to_raster(const Sample& s) {
  const auto& sh = s.shape();
  if (sh[3] != 1 || (sh[4] != 1 && sh[4] != 3)) {
    throw ShapeError("image export needs shape (b, w, h, 1, 1|3), got " + shape_string(sh));
  }
  Raster r;
  r.width = sh[1];
  r.height = sh[2];
  r.channels = sh[4];
  r.pixels.resize(r.width * r.height * r.channels);
  for (std::size_t row = 0; row < r.height; ++row) {
    for (std::size_t col = 0; col < r.width; ++col) {
      for (std::size_t f = 0; f < r.channels; ++f) {
        const double v = std::clamp(std::round(s(0, col, row, 0, f)), 0.0, 255.0);
        r.pixels[(row * r.width + col) * r.channels + f] = static_cast<unsigned char>(v);
      }
    }
  }
  return r;
}

std::string lower_extension(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

}  // namespace

Sample read_image(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return raster_to_sample(read_png(path));
  if (ext == ".jpg" || ext == ".jpeg") return raster_to_sample(read_jpeg(path));
  throw IoError("unsupported image format: " + path.string());
}

Sample read_images(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw ArgumentError("read_images needs at least one path");
  std::vector<Sample> parts;
  for (const auto& p : paths) parts.push_back(read_image(p));
  const auto& first = parts.front().shape();
  std::size_t features = 0;
  for (const auto& s : parts) {
    if (s.shape()[1] != first[1] || s.shape()[2] != first[2]) {
      throw ShapeError("images stacked as features must share their size");
    }
    features += s.features();
  }
  std::vector<double> v(first[1] * first[2] * features);
  for (std::size_t i = 0; i < first[1]; ++i) {
    for (std::size_t j = 0; j < first[2]; ++j) {
      std::size_t f = 0;
      for (const auto& s : parts) {
        for (std::size_t c = 0; c < s.features(); ++c) v[(i * first[2] + j) * features + f++] = s(0, i, j, 0, c);
      }
    }
  }
  return Sample(NdArray({1, first[1], first[2], 1, features}, std::move(v)));
}

void write_png(const std::filesystem::path& path, const Sample& s) {
  const Raster r = sample_to_raster(s);
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(r.width);
  image.height = static_cast<png_uint_32>(r.height);
  image.format = r.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, r.pixels.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_jpeg(const std::filesystem::path& path, const Sample& s, int quality) {
  const Raster r = sample_to_raster(s);
  FileHandle file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());

  jpeg_compress_struct info{};
  JpegErrorManager err{};
  info.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&info);
    throw IoError("cannot encode JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_compress(&info);
  jpeg_stdio_dest(&info, file.get());
  info.image_width = static_cast<JDIMENSION>(r.width);
  info.image_height = static_cast<JDIMENSION>(r.height);
  info.input_components = static_cast<int>(r.channels);
  info.in_color_space = r.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&info);
  jpeg_set_quality(&info, quality, TRUE);
  jpeg_start_compress(&info, TRUE);
  while (info.next_scanline < info.image_height) {
    auto* row = const_cast<JSAMPROW>(r.pixels.data() + info.next_scanline * r.width * r.channels);
    jpeg_write_scanlines(&info, &row, 1);
  }
  jpeg_finish_compress(&info);
  jpeg_destroy_compress(&info);
}

}  // namespace voxflow
