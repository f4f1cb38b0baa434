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

#include <filesystem>
#include <span>

#include "voxflow/sample.hpp"

namespace voxflow {

/// Reads an 8-bit PNG or JPEG into a Sample of shape (1, width, height, 1, channels)
/// with an identity affine. Column index maps to spatial axis 0, row index to
/// axis 1; the third spatial axis is singleton.
Sample read_image(const std::filesystem::path& path);

/// Reads several equally sized images and stacks their channels along the
/// feature axis, in the given order.
Sample read_images(std::span<const std::filesystem::path> paths);

/// Writes batch element 0 of a (1, w, h, 1, c) Sample with c in {1, 3}.
/// Values are rounded and clamped to [0, 255].
void write_png(const std::filesystem::path& path, const Sample& s);
void write_jpeg(const std::filesystem::path& path, const Sample& s, int quality = 95);

}  // namespace voxflow
