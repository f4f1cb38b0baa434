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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "voxflow/graph.hpp"
#include "voxflow/random.hpp"
#include "voxflow/sampling.hpp"

namespace voxflow {

inline constexpr int kCreatorFormatVersion = 1;

/// Pull-based evaluator over the ancestors of a set of requested connections.
///
/// Construction copies the traced subgraph, orders it topologically (ties
/// by original node id) and names every node "<Kind>_<ordinal>". Each step
/// pulls one new value for every requested connection; a node advances at
/// most once per step and consumers share its value. Generation ends when
/// any input node is asked for more than its n emissions.
class Creator {
 public:
  /// One list of Samples per requested connection.
  using Outputs = std::vector<std::vector<Sample>>;

  /// ArgumentError for an empty request list, cycles, dangling slots and
  /// malformed node definitions.
  Creator(const Graph& graph, std::vector<Connection> requested, std::uint64_t seed = 0);

  /// Resets every node and loads `id` into the input nodes. LookupError
  /// when a record lacks a required modality; ContractError when an input
  /// node cannot interpret the Identifier kind; StateError when a model
  /// node has no model attached.
  void load(const Identifier& id);
  /// Next step, or nullopt after depletion. StateError before load().
  std::optional<Outputs> evaluate_step();
  /// load() followed by evaluate_step() until depletion; returns the step count.
  std::size_t eval(const Identifier& id, const std::function<void(Outputs&&)>& sink);
  std::vector<Outputs> eval(const Identifier& id);

  /// Restarts every node's random stream from `seed`.
  void reseed(std::uint64_t seed);
  std::uint64_t seed() const { return seed_; }

  /// Traced graph; node ids follow the topological order.
  const Graph& graph() const { return graph_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Connection>& requested() const { return requested_; }
  /// LookupError for unknown names.
  NodeId id_of(const std::string& name) const;
  /// Emissions of a node since the last load().
  std::size_t execution_count(const std::string& name) const;
  /// True when some input node is a CatalogInput (resp. DirectInput).
  bool has_input_kind(NodeKind kind) const;

  /// One line per node in topological order: name, kind, n, declared
  /// output shapes ("?" when undeclared), inputs and references.
  std::string summary() const;

  std::vector<std::string> missing_models() const;
  void attach_model(const std::string& name, std::shared_ptr<const Model> model);
  void attach_models(const std::map<std::string, std::shared_ptr<const Model>>& models);

  nlohmann::json to_json() const;
  /// Model weight files are resolved against `base_dir`; a model is attached
  /// only when its file exists and the content hash matches.
  static Creator from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  void save(const std::filesystem::path& path) const;
  static Creator load_file(const std::filesystem::path& path);

 private:
  struct NodeState {
    std::vector<std::vector<Sample>> inputs;
    std::vector<std::vector<Sample>> references;
    std::vector<std::vector<Sample>> outputs;
    std::vector<Sample> loaded;
    std::vector<Index3> tiles;
    std::vector<Index3> candidates;
    bool has_input = false;
    std::size_t produced = 0;
    std::size_t capacity = 0;
    std::uint64_t last_step = 0;
    std::size_t executions = 0;
    Rng rng;
  };

  void validate() const;
  void reset();
  bool advance(NodeId id, std::uint64_t step);
  bool advance_buffer(NodeId id, std::uint64_t step);
  bool pull(NodeId id, std::uint64_t step);
  void prepare(NodeId id);
  void emit(NodeId id);
  std::uint64_t next_step() { return ++step_; }

  Graph graph_;
  std::vector<Connection> requested_;
  std::vector<std::string> names_;
  std::map<std::string, NodeId> ids_;
  std::uint64_t seed_;
  std::vector<NodeState> state_;
  std::uint64_t step_ = 0;
  bool loaded_ = false;
  bool depleted_ = false;
};

}  // namespace voxflow
