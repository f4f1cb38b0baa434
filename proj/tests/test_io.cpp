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

#include <cstring>
#include <fstream>
#include <random>

#include "support.hpp"
#include "voxflow/catalog.hpp"
#include "voxflow/errors.hpp"
#include "voxflow/image_io.hpp"
#include "voxflow/nifti.hpp"

namespace voxflow {
namespace {

using testing::TempDir;

template <class T>
void patch(const std::filesystem::path& path, std::streamoff offset, T value) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(offset);
  f.write(reinterpret_cast<const char*>(&value), sizeof value);
}

TEST(NiftiTest, RoundTripUncompressedAndCompressed) {
  TempDir dir;
  std::mt19937_64 gen(1);
  const Sample s = testing::random_volume(gen, {5, 4, 3}, testing::float_affine(testing::random_affine(gen)));
  for (const char* name : {"v.nii", "v.nii.gz"}) {
    testing::write_volume(dir / name, s);
    const Sample back = nifti_to_sample(read_nifti(dir / name));
    EXPECT_EQ(back.shape(), s.shape());
    EXPECT_EQ(testing::max_abs_diff(back, s), 0.0);
    EXPECT_EQ(back.affine(0), s.affine(0));
  }
}

TEST(NiftiTest, AffineKeepsFloatPrecision) {
  TempDir dir;
  std::mt19937_64 gen(2);
  const Affine a = testing::random_affine(gen);
  testing::write_volume(dir / "v.nii", testing::constant({2, 2, 2}, 1.0, 1, a));
  const Affine back = nifti_to_sample(read_nifti(dir / "v.nii")).affine(0);
  EXPECT_EQ(back, testing::float_affine(a));
  EXPECT_TRUE(affine_close(back, a, 1e-4));
}

TEST(NiftiTest, FeatureAxisRoundTrip) {
  TempDir dir;
  const Sample s = testing::ramp({3, 2, 2}, 4);
  testing::write_volume(dir / "f.nii.gz", s);
  const NiftiImage img = read_nifti(dir / "f.nii.gz");
  EXPECT_EQ(img.dims, (std::vector<std::size_t>{3, 2, 2, 4}));
  EXPECT_EQ(nifti_to_sample(img), s);
}

TEST(NiftiTest, ColumnMajorOnDisk) {
  const Sample s = testing::ramp({2, 3, 1});
  const NiftiImage img = sample_to_nifti(s);
  // first axis fastest: voxel (1,0,0) is stored second
  EXPECT_EQ(img.values[1], s(0, 1, 0, 0));
  EXPECT_EQ(img.values[2], s(0, 0, 1, 0));
}

TEST(NiftiTest, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_THROW(read_nifti(dir / "absent.nii.gz"), IoError);
}

TEST(NiftiTest, GarbageIsIoError) {
  TempDir dir;
  testing::write_text(dir / "bad.nii", std::string(400, 'x'));
  EXPECT_THROW(read_nifti(dir / "bad.nii"), IoError);
}

TEST(NiftiTest, HeaderWithoutTransformIsValidityError) {
  TempDir dir;
  testing::write_volume(dir / "v.nii", testing::ramp({2, 2, 2}));
  patch<std::int16_t>(dir / "v.nii", 252, 0);
  patch<std::int16_t>(dir / "v.nii", 254, 0);
  EXPECT_THROW(read_nifti(dir / "v.nii"), ValidityError);
}

TEST(NiftiTest, QformFallback) {
  TempDir dir;
  const auto path = dir / "q.nii";
  testing::write_volume(path, testing::ramp({2, 2, 2}));
  patch<std::int16_t>(path, 254, 0);
  patch<std::int16_t>(path, 252, 1);
  patch<float>(path, 76, 1.0f);  // qfac
  patch<float>(path, 80, 2.0f);
  patch<float>(path, 84, 3.0f);
  patch<float>(path, 88, 4.0f);
  for (std::streamoff off : {256, 260, 264}) patch<float>(path, off, 0.0f);
  patch<float>(path, 268, 5.0f);
  patch<float>(path, 272, -6.0f);
  patch<float>(path, 276, 7.0f);
  Affine expected = testing::spacing_affine(2, 3, 4, {5, -6, 7});
  EXPECT_TRUE(affine_close(read_nifti(path).affine, expected, 1e-6));
}

TEST(ImageIoTest, PngRoundTrip) {
  TempDir dir;
  std::vector<double> v(4 * 3 * 3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 37) % 256);
  const Sample s(NdArray({1, 4, 3, 1, 3}, v));
  write_png(dir / "rgb.png", s);
  const Sample back = read_image(dir / "rgb.png");
  EXPECT_EQ(back.shape(), s.shape());
  EXPECT_EQ(testing::max_abs_diff(back, s), 0.0);
  EXPECT_EQ(back.affine(0), Affine::Identity());
}

TEST(ImageIoTest, StackedImagesConcatenateFeatures) {
  TempDir dir;
  const Sample a(NdArray({1, 2, 2, 1, 1}, std::vector<double>{0, 10, 20, 30}));
  const Sample b(NdArray({1, 2, 2, 1, 1}, std::vector<double>{1, 11, 21, 31}));
  write_png(dir / "a.png", a);
  write_png(dir / "b.png", b);
  const std::vector<std::filesystem::path> paths{dir / "a.png", dir / "b.png"};
  const Sample s = read_images(paths);
  EXPECT_EQ(s.shape(), (Shape5{1, 2, 2, 1, 2}));
  EXPECT_EQ(s(0, 1, 1, 0, 0), 30);
  EXPECT_EQ(s(0, 1, 1, 0, 1), 31);
}

TEST(ImageIoTest, JpegKeepsShape) {
  TempDir dir;
  const Sample s(NdArray({1, 8, 6, 1, 1}, 128.0));
  write_jpeg(dir / "g.jpg", s);
  const Sample back = read_image(dir / "g.jpg");
  EXPECT_EQ(back.shape(), s.shape());
  EXPECT_LE(testing::max_abs_diff(back, s), 2.0);
}

TEST(ModalityTest, EquivalentSourcesLoadEqual) {
  TempDir dir;
  std::mt19937_64 gen(9);
  const Affine a = testing::float_affine(testing::random_affine(gen));
  const Sample s = testing::random_volume(gen, {6, 5, 4}, a);
  testing::write_volume(dir / "v.nii.gz", s);
  NdArray raw({6, 5, 4}, std::vector<double>(s.values().begin(), s.values().end()));
  const Sample from_file = Modality::volume_file("m", dir / "v.nii.gz").load();
  const Sample from_image = Modality::volume("m", read_nifti(dir / "v.nii.gz")).load();
  const Sample from_array = Modality::array("m", raw, a).load();
  EXPECT_EQ(from_file, s);
  EXPECT_EQ(from_image, s);
  EXPECT_EQ(from_array, s);
}

TEST(ModalityTest, ScalarLoadsToSingleton) {
  const Sample s = Modality::scalar("age", 45).load();
  EXPECT_EQ(s.shape(), (Shape5{1, 1, 1, 1, 1}));
  EXPECT_EQ(s.values()[0], 45);
  EXPECT_EQ(s.affine(0), Affine::Identity());
}

TEST(ModalityTest, PlanarImageHasSingletonThirdAxis) {
  TempDir dir;
  write_png(dir / "p.png", Sample(NdArray({1, 5, 7, 1, 1}, 3.0)));
  const Sample s = Modality::image_files("p", {dir / "p.png"}).load();
  EXPECT_EQ(s.shape(), (Shape5{1, 5, 7, 1, 1}));
}

TEST(ModalityTest, RepeatedLoadsAreEqual) {
  TempDir dir;
  testing::write_volume(dir / "v.nii", testing::ramp({3, 3, 3}));
  const Modality m = Modality::volume_file("v", dir / "v.nii");
  EXPECT_EQ(m.load(), m.load());
}

TEST(ModalityTest, UnreadableFileIsIoError) {
  EXPECT_THROW(Modality::volume_file("v", "/nonexistent/v.nii").load(), IoError);
}

}  // namespace
}  // namespace voxflow
