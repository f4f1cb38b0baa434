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
#include <map>
#include <string>

#include "voxflow/bundle.hpp"

namespace voxflow {

inline constexpr int kPipelineFileVersion = 1;

struct PipelineSpec {
  PipelineBundle bundle;
  /// Node names as written in the document.
  std::map<std::string, NodeId> nodes;
};

/// Parses a pipeline document (YAML or JSON): `version`, optional `seed`,
/// a `nodes` list (each with `name`, `kind` and kind-specific keys) and
/// `sets` mapping set names to connection strings "node" or "node:slot".
/// Model nodes take an inline `model` or a `model_file` relative to
/// `base_dir`; a missing model file leaves the node unattached, which then
/// requires an explicit `contract`. FormatError on malformed documents.
PipelineSpec parse_pipeline(const std::string& text, const std::filesystem::path& base_dir);
PipelineSpec load_pipeline_file(const std::filesystem::path& path);

}  // namespace voxflow
