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

#include <cstddef>
#include <filesystem>
#include <vector>

#include "voxflow/sample.hpp"

namespace voxflow {

/// Decoded NIfTI-1 volume. `values` keep the file's column-major order
/// (first axis fastest) and are already scaled by scl_slope/scl_inter.
struct NiftiImage {
  std::vector<std::size_t> dims;
  std::vector<double> values;
  Affine affine = Affine::Identity();
};

/// Reads a .nii or .nii.gz file. The affine comes from the sform when its
/// code is set, otherwise from the qform. A header with neither is
/// rejected with ValidityError.
NiftiImage read_nifti(const std::filesystem::path& path);

/// Writes float64 data with the affine stored as sform. Paths ending in
/// ".gz" are gzip-compressed.
void write_nifti(const std::filesystem::path& path, const NiftiImage& image);

/// Rank-3 volumes get one feature; for rank-4 volumes the trailing axis is
/// the feature axis. Batch is always 1.
Sample nifti_to_sample(const NiftiImage& image);

/// Batch element `b` of `s` as a rank-3 (one feature) or rank-4 volume.
NiftiImage sample_to_nifti(const Sample& s, std::size_t b = 0);

}  // namespace voxflow
