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
#include <string>

#include "voxflow/catalog.hpp"

namespace voxflow {

inline constexpr int kCatalogFileVersion = 1;

/// Parses a catalog document (YAML; JSON is accepted as well). Relative
/// modality paths are resolved against `base_dir`. Malformed documents and
/// unsupported versions raise FormatError. The schema is described in
/// docs/file_formats.md.
Mirc parse_catalog(const std::string& text, const std::filesystem::path& base_dir);

/// Reads and parses a catalog file; paths are relative to its directory.
Mirc load_catalog_file(const std::filesystem::path& path);

}  // namespace voxflow
