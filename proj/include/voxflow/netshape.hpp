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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voxflow/sample.hpp"

/// Shape and receptive-field arithmetic for multi-pathway encoder-decoder
/// networks. Pathway 0 works at full resolution; pathway p works at
/// subsample_factors[p] (cumulative, relative to the input). Each pathway
/// runs its down convolutions on the way in and its up convolutions on the
/// way out; the deepest pathway runs both back to back. Skip connections
/// are center-cropped to the upsampled size.
namespace voxflow::netshape {

enum class Padding { Valid, Same };

struct Pathway {
  Size3 subsample_factors{1, 1, 1};
  std::vector<Size3> down_kernels;
  std::vector<Size3> up_kernels;
  std::vector<int> down_features;
  std::vector<int> up_features;

  friend bool operator==(const Pathway&, const Pathway&) = default;
};

struct ArchConfig {
  int number_input_features = 1;
  std::vector<Pathway> pathways;
  Padding padding = Padding::Valid;
  std::optional<Size3> output_size;
  bool instance_normalization = false;
  bool batch_normalization = false;

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

/// ArgumentError unless there is at least one pathway, factors are
/// positive and each divides the next, and kernel sizes are odd and positive.
void validate(const ArchConfig& cfg);

/// Output extent along one axis. AdmissibilityError names the failing
/// stage when a downsampling does not divide exactly, an intermediate size
/// drops below 1, or a skip connection is smaller than the upsampled path.
std::int64_t output_size(const ArchConfig& cfg, int axis, std::int64_t input);
Size3 output_size(const ArchConfig& cfg, const Size3& input);

/// rf += (k - 1) * jump per convolution; jump is multiplied by the factor
/// ratio on the way down and divided on the way up.
std::int64_t receptive_field(const ArchConfig& cfg, int axis);
Size3 receptive_field(const ArchConfig& cfg);

/// (input, output) pairs along `axis` for every admissible input in [lo, hi].
std::vector<std::pair<std::int64_t, std::int64_t>> admissible_input_sizes(const ArchConfig& cfg, int axis,
                                                                          std::int64_t lo, std::int64_t hi);

/// Smallest admissible input in [1, limit] producing `output` along each axis.
std::optional<Size3> input_size_for_output(const ArchConfig& cfg, const Size3& output, std::int64_t limit = 1024);

/// The committed No-New-Net preset (5 pathways, same padding).
ArchConfig no_new_net_preset();

/// Parses an architecture document whose keys follow the model constructor
/// arguments (subsample_factors_per_pathway, kernel_sizes_per_pathway,
/// number_features_per_pathway, padding, output_size, ...). FormatError on
/// malformed input.
ArchConfig parse_arch_config(const std::string& text);
ArchConfig load_arch_config(const std::filesystem::path& path);

/// Multi-line report: padding, receptive field, output size for `input`
/// (if given) and the admissible sizes in [lo, hi].
std::string describe(const ArchConfig& cfg, const std::optional<Size3>& input, std::int64_t lo = 1,
                     std::int64_t hi = 256);

}  // namespace voxflow::netshape
