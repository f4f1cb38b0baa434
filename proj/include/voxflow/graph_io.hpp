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

#include <map>
#include <string>
#include <vector>

#include "voxflow/graph.hpp"

namespace voxflow {

/// Node table entry: {"name", "kind", "n", "inputs", "references",
/// "output_shapes", "params"}; connections are [name, slot] pairs.
/// Model nodes store their contract and a model reference, never weights.
nlohmann::json node_to_json(const NodeDef& def, const std::vector<std::string>& names);

struct ParsedGraph {
  Graph graph;
  std::vector<std::string> names;
  std::map<std::string, NodeId> ids;

  Connection resolve(const nlohmann::json& connection) const;
};

/// Rebuilds a graph from a node table. Nodes may only refer to nodes listed
/// earlier. FormatError on malformed entries.
ParsedGraph graph_from_json(const nlohmann::json& nodes);

nlohmann::json connection_to_json(const Connection& c, const std::vector<std::string>& names);

/// Unique names in the given node order: "<Kind>_<ordinal within kind>".
std::vector<std::string> kind_ordinal_names(const Graph& graph, const std::vector<NodeId>& order);

}  // namespace voxflow
