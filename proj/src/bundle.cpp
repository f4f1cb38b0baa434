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

#include "voxflow/bundle.hpp"

#include <fstream>

#include "voxflow/errors.hpp"
#include "voxflow/graph_io.hpp"

namespace voxflow {

using nlohmann::json;

void PipelineBundle::set(const std::string& key, std::vector<Connection> outputs) {
  if (outputs.empty()) throw ArgumentError("output set '" + key + "' is empty");
  for (const auto& c : outputs) {
    if (c.node >= graph_.size()) throw ArgumentError("output set '" + key + "' refers to an unknown node");
  }
  sets_[key] = std::move(outputs);
}

const std::vector<Connection>& PipelineBundle::outputs(const std::string& key) const {
  const auto it = sets_.find(key);
  if (it == sets_.end()) throw LookupError("bundle has no output set '" + key + "'");
  return it->second;
}

Creator PipelineBundle::creator(const std::string& key) const { return Creator(graph_, outputs(key), seed_); }

std::vector<std::string> PipelineBundle::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sets_) out.push_back(k);
  return out;
}

std::vector<std::string> PipelineBundle::node_names() const {
  // A creator over every node gives the whole-graph topological order.
  std::vector<Connection> all;
  for (NodeId id = 0; id < graph_.size(); ++id) {
    if (graph_.node(id).output_arity() > 0) all.push_back({id, 0});
  }
  if (all.empty()) return {};
  const Creator whole(graph_, all, seed_);
  std::vector<std::string> names(graph_.size());
  for (std::size_t i = 0; i < all.size(); ++i) names[all[i].node] = whole.names()[whole.requested()[i].node];
  return names;
}

json PipelineBundle::to_json() const {
  const std::vector<std::string> names = node_names();
  // order[i]: original id of the i-th node in whole-graph topological order
  std::vector<NodeId> order(graph_.size());
  std::vector<Connection> all;
  for (NodeId id = 0; id < graph_.size(); ++id) all.push_back({id, 0});
  const Creator whole(graph_, all, seed_);
  for (std::size_t i = 0; i < all.size(); ++i) order[whole.requested()[i].node] = i;

  json nodes = json::array();
  json models = json::object();
  for (NodeId id : order) {
    json node = node_to_json(graph_.node(id), names);
    node["name"] = names[id];
    nodes.push_back(std::move(node));
    if (const auto* p = std::get_if<ModelParams>(&graph_.node(id).params); p && p->model) {
      models[names[id]] = model_to_json(*p->model);
    }
  }
  json sets = json::object();
  for (const auto& [key, conns] : sets_) {
    json list = json::array();
    for (const auto& c : conns) list.push_back(connection_to_json(c, names));
    sets[key] = std::move(list);
  }
  return {{"format", "voxflow-bundle"}, {"version", kBundleFormatVersion}, {"seed", seed_},
          {"nodes", std::move(nodes)},  {"sets", std::move(sets)},          {"models", std::move(models)}};
}

PipelineBundle PipelineBundle::from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "voxflow-bundle") throw FormatError("not a bundle container");
  if (j.value("version", -1) != kBundleFormatVersion) {
    throw FormatError("unsupported bundle version " + j.value("version", json(nullptr)).dump() + " (expected " +
                      std::to_string(kBundleFormatVersion) + ")");
  }
  try {
    ParsedGraph parsed = graph_from_json(j.at("nodes"));
    const json models = j.value("models", json::object());
    for (const auto& [name, model_json] : models.items()) {
      const auto it = parsed.ids.find(name);
      if (it == parsed.ids.end()) throw FormatError("model for unknown node '" + name + "'");
      auto* p = std::get_if<ModelParams>(&parsed.graph.node(it->second).params);
      if (!p) throw FormatError("node '" + name + "' is not a model node");
      auto model = model_from_json(model_json);
      if (model_hash(*model) != p->ref.hash) throw FormatError("model of '" + name + "' does not match its hash");
      p->model = std::move(model);
    }
    PipelineBundle bundle(std::move(parsed.graph), j.at("seed").get<std::uint64_t>());
    for (const auto& [key, list] : j.at("sets").items()) {
      std::vector<Connection> conns;
      for (const auto& c : list) conns.push_back(parsed.resolve(c));
      bundle.set(key, std::move(conns));
    }
    return bundle;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed bundle container: ") + e.what());
  }
}

void PipelineBundle::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write bundle file " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing bundle file " + path.string());
}

PipelineBundle PipelineBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open bundle file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("bundle file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace voxflow
