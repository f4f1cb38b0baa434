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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "voxflow/creator.hpp"
#include "voxflow/graph.hpp"

namespace voxflow {

inline constexpr int kBundleFormatVersion = 1;

/// Named sets of requested connections over one shared graph.
class PipelineBundle {
 public:
  explicit PipelineBundle(Graph graph, std::uint64_t seed = 0) : graph_(std::move(graph)), seed_(seed) {}

  /// Replaces the set `key`. ArgumentError for an empty list or unknown nodes.
  void set(const std::string& key, std::vector<Connection> outputs);
  /// Creator over the set `key`; LookupError for unknown keys.
  Creator creator(const std::string& key) const;
  std::vector<std::string> keys() const;
  const std::vector<Connection>& outputs(const std::string& key) const;

  const Graph& graph() const { return graph_; }
  Graph& graph() { return graph_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  /// Names of the nodes in the whole graph, "<Kind>_<ordinal>" in topological order.
  std::vector<std::string> node_names() const;

  /// One container holding the node table once, every named set and the
  /// parameters of every attached model.
  nlohmann::json to_json() const;
  /// FormatError on a wrong format name or version.
  static PipelineBundle from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static PipelineBundle load(const std::filesystem::path& path);

 private:
  Graph graph_;
  std::uint64_t seed_;
  std::map<std::string, std::vector<Connection>> sets_;
};

}  // namespace voxflow
