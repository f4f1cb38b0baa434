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

#include "voxflow/creator.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "voxflow/errors.hpp"
#include "voxflow/graph_io.hpp"
#include "voxflow/kernels.hpp"

namespace voxflow {

using nlohmann::json;

namespace {

// Every node reachable backwards from `requested`, with cycle detection.
std::vector<bool> trace_ancestors(const Graph& graph, const std::vector<Connection>& requested) {
  enum class Mark { None, Active, Done };
  std::vector<Mark> mark(graph.size(), Mark::None);
  std::vector<bool> keep(graph.size(), false);
  // iterative DFS: (node, next edge index)
  std::vector<std::pair<NodeId, std::size_t>> stack;
  auto edges = [&](NodeId id) {
    const NodeDef& d = graph.node(id);
    std::vector<NodeId> out;
    for (const auto& c : d.inputs) out.push_back(c.node);
    for (const auto& c : d.references) out.push_back(c.node);
    return out;
  };
  for (const auto& r : requested) {
    if (r.node >= graph.size()) throw ArgumentError("requested connection refers to unknown node");
    if (mark[r.node] != Mark::None) continue;
    stack.push_back({r.node, 0});
    mark[r.node] = Mark::Active;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto e = edges(id);
      if (next == e.size()) {
        mark[id] = Mark::Done;
        keep[id] = true;
        stack.pop_back();
        continue;
      }
      const NodeId up = e[next++];
      if (mark[up] == Mark::Active) {
        throw ArgumentError("graph contains a cycle through a " + std::string(kind_name(graph.node(up).kind())) +
                            " node");
      }
      if (mark[up] == Mark::None) {
        mark[up] = Mark::Active;
        stack.push_back({up, 0});
      }
    }
  }
  return keep;
}

std::string connection_string(const Connection& c, const std::vector<std::string>& names) {
  return names[c.node] + ":" + std::to_string(c.slot);
}

std::string connection_list(const std::vector<Connection>& cs, const std::vector<std::string>& names) {
  std::string out = "[";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += connection_string(cs[i], names);
  }
  return out + "]";
}

}  // namespace

Creator::Creator(const Graph& graph, std::vector<Connection> requested, std::uint64_t seed) : seed_(seed) {
  if (requested.empty()) throw ArgumentError("a creator needs at least one requested connection");
  const std::vector<bool> keep = trace_ancestors(graph, requested);

  // Kahn's algorithm over the traced nodes, smallest original id first.
  std::vector<std::size_t> pending(graph.size(), 0);
  std::vector<std::vector<NodeId>> consumers(graph.size());
  for (NodeId id = 0; id < graph.size(); ++id) {
    if (!keep[id]) continue;
    const NodeDef& d = graph.node(id);
    for (const auto* list : {&d.inputs, &d.references}) {
      for (const auto& c : *list) {
        ++pending[id];
        consumers[c.node].push_back(id);
      }
    }
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId id = 0; id < graph.size(); ++id) {
    if (keep[id] && pending[id] == 0) ready.push(id);
  }
  std::vector<NodeId> order;
  while (!ready.empty()) {
    const NodeId id = ready.top();
    ready.pop();
    order.push_back(id);
    for (NodeId c : consumers[id]) {
      if (--pending[c] == 0) ready.push(c);
    }
  }

  std::vector<NodeId> remap(graph.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = i;
  auto moved = [&](Connection c) { return Connection{remap[c.node], c.slot}; };
  for (NodeId old : order) {
    NodeDef d = graph.node(old);
    for (auto& c : d.inputs) c = moved(c);
    for (auto& c : d.references) c = moved(c);
    graph_.add(std::move(d));
  }
  for (auto& r : requested) requested_.push_back(moved(r));

  std::vector<NodeId> identity(graph_.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  names_ = kind_ordinal_names(graph_, identity);
  for (NodeId id = 0; id < names_.size(); ++id) ids_.emplace(names_[id], id);
  validate();
  state_.resize(graph_.size());
  reseed(seed_);
}

void Creator::validate() const {
  auto check_slot = [&](const Connection& c, const std::string& where) {
    if (c.slot >= graph_.node(c.node).output_arity()) {
      throw ArgumentError(where + ": slot " + std::to_string(c.slot) + " of " + names_[c.node] +
                          " does not exist");
    }
  };
  for (const auto& r : requested_) check_slot(r, "requested connection");
  for (NodeId id = 0; id < graph_.size(); ++id) {
    const NodeDef& d = graph_.node(id);
    const std::string& name = names_[id];
    for (const auto& c : d.inputs) check_slot(c, name);
    for (const auto& c : d.references) check_slot(c, name);
    const NodeKind k = d.kind();
    if (!is_input_kind(k) && d.inputs.empty()) throw ArgumentError(name + " has no input connection");
    std::size_t refs = 0;
    if (k == NodeKind::AffineDeformation || k == NodeKind::RandomCrop || k == NodeKind::Put) refs = 1;
    if (k == NodeKind::Crop) refs = std::get<CropParams>(d.params).size ? 0 : 1;
    if (d.references.size() != refs) {
      throw ArgumentError(name + " needs exactly " + std::to_string(refs) + " reference connection(s)");
    }
    auto check_sizes = [&](const std::vector<Size3>& sizes) {
      if (sizes.size() != 1 && sizes.size() != d.inputs.size()) {
        throw ArgumentError(name + ": give one crop size, or one per input connection");
      }
      for (const auto& s : sizes) {
        if (s[0] <= 0 || s[1] <= 0 || s[2] <= 0) throw ArgumentError(name + ": crop sizes must be positive");
      }
    };
    if (const auto* p = std::get_if<RandomCropParams>(&d.params)) check_sizes(p->sizes);
    if (const auto* p = std::get_if<GridCropParams>(&d.params)) check_sizes(p->sizes);
    if (const auto* p = std::get_if<AffineDeformationParams>(&d.params)) {
      if (p->interpolation.size() > 1 && p->interpolation.size() != d.inputs.size()) {
        throw ArgumentError(name + ": give one interpolation mode, or one per input connection");
      }
    }
    if (const auto* p = std::get_if<ModelParams>(&d.params)) {
      if (p->contract.outputs.empty()) throw ArgumentError(name + ": model contract declares no outputs");
    }
  }
}

void Creator::reseed(std::uint64_t seed) {
  seed_ = seed;
  for (NodeId id = 0; id < state_.size(); ++id) state_[id].rng.seed(derive_seed(seed, names_[id]));
}

NodeId Creator::id_of(const std::string& name) const {
  const auto it = ids_.find(name);
  if (it == ids_.end()) throw LookupError("creator has no node named '" + name + "'");
  return it->second;
}

std::size_t Creator::execution_count(const std::string& name) const { return state_[id_of(name)].executions; }

bool Creator::has_input_kind(NodeKind kind) const {
  for (NodeId id = 0; id < graph_.size(); ++id) {
    if (graph_.node(id).kind() == kind) return true;
  }
  return false;
}

void Creator::reset() {
  for (auto& st : state_) {
    Rng rng = st.rng;
    st = NodeState{};
    st.rng = rng;
  }
  loaded_ = false;
  depleted_ = false;
}

void Creator::load(const Identifier& id) {
  reset();
  for (const auto& name : missing_models()) {
    throw StateError("model node " + name + " has no model attached; attach it before evaluation");
  }
  for (NodeId n = 0; n < graph_.size(); ++n) {
    const NodeDef& d = graph_.node(n);
    if (const auto* p = std::get_if<CatalogInputParams>(&d.params)) {
      const auto* c = id.catalog();
      if (!c) throw ContractError(names_[n] + " needs a catalog identifier, got " + id.describe());
      const Record& record = c->mirc->record(c->key);
      for (const auto& m : p->modalities) {
        if (!record.has(m)) {
          throw LookupError("record " + id.describe() + " has no modality '" + m + "' (needed by " + names_[n] + ")");
        }
        state_[n].loaded.push_back(record[m].load());
      }
    } else if (std::holds_alternative<DirectInputParams>(d.params)) {
      const auto* direct = id.direct();
      if (!direct) throw ContractError(names_[n] + " needs a direct identifier, got " + id.describe());
      state_[n].loaded = direct->samples;
    }
  }
  loaded_ = true;
}

std::optional<Creator::Outputs> Creator::evaluate_step() {
  if (!loaded_) throw StateError("no identifier loaded; call load() or eval() first");
  if (depleted_) return std::nullopt;
  const std::uint64_t step = next_step();
  for (const auto& r : requested_) {
    if (!advance(r.node, step)) {
      depleted_ = true;
      return std::nullopt;
    }
  }
  Outputs out;
  out.reserve(requested_.size());
  for (const auto& r : requested_) out.push_back(state_[r.node].outputs[r.slot]);
  return out;
}

std::size_t Creator::eval(const Identifier& id, const std::function<void(Outputs&&)>& sink) {
  load(id);
  std::size_t steps = 0;
  while (auto out = evaluate_step()) {
    ++steps;
    if (sink) sink(std::move(*out));
  }
  return steps;
}

std::vector<Creator::Outputs> Creator::eval(const Identifier& id) {
  std::vector<Outputs> all;
  eval(id, [&](Outputs&& o) { all.push_back(std::move(o)); });
  return all;
}

bool Creator::advance(NodeId id, std::uint64_t step) {
  NodeState& st = state_[id];
  if (st.last_step == step) return true;
  const NodeDef& d = graph_.node(id);
  if (is_input_kind(d.kind())) {
    if (st.produced >= d.n.value_or(1)) return false;
    st.outputs = {st.loaded};
  } else if (d.kind() == NodeKind::Buffer) {
    return advance_buffer(id, step);
  } else {
    if (!st.has_input || st.produced >= st.capacity) {
      if (!pull(id, step)) return false;
    }
    emit(id);
  }
  ++st.produced;
  ++st.executions;
  st.last_step = step;
  return true;
}

bool Creator::pull(NodeId id, std::uint64_t step) {
  const NodeDef& d = graph_.node(id);
  std::vector<std::vector<Sample>> inputs;
  std::vector<std::vector<Sample>> references;
  for (const auto& c : d.inputs) {
    if (!advance(c.node, step)) return false;
    inputs.push_back(state_[c.node].outputs[c.slot]);
  }
  for (const auto& c : d.references) {
    if (!advance(c.node, step)) return false;
    references.push_back(state_[c.node].outputs[c.slot]);
  }
  NodeState& st = state_[id];
  st.inputs = std::move(inputs);
  st.references = std::move(references);
  st.has_input = true;
  st.produced = 0;
  prepare(id);
  return true;
}

bool Creator::advance_buffer(NodeId id, std::uint64_t step) {
  const NodeDef& d = graph_.node(id);
  const auto limit = std::get<BufferParams>(d.params).buffer_size;
  // items[i][k]: list from input connection k in drain round i
  std::vector<std::vector<std::vector<Sample>>> items;
  std::uint64_t sub = step;
  while (!limit || items.size() < *limit) {
    std::vector<std::vector<Sample>> round;
    bool ok = true;
    for (const auto& c : d.inputs) {
      if (!advance(c.node, sub)) {
        ok = false;
        break;
      }
      round.push_back(state_[c.node].outputs[c.slot]);
    }
    if (!ok) break;
    items.push_back(std::move(round));
    sub = next_step();
  }
  if (items.empty()) return false;

  NodeState& st = state_[id];
  st.outputs.assign(d.inputs.size(), {});
  for (std::size_t k = 0; k < d.inputs.size(); ++k) {
    const std::size_t length = items.front()[k].size();
    for (const auto& round : items) {
      if (round[k].size() != length) throw ShapeError(names_[id] + ": buffered lists differ in length");
    }
    for (std::size_t i = 0; i < length; ++i) {
      std::vector<Sample> parts;
      for (const auto& round : items) parts.push_back(round[k][i]);
      st.outputs[k].push_back(kernels::concat_batch(parts));
    }
  }
  ++st.executions;
  st.last_step = step;
  return true;
}

void Creator::prepare(NodeId id) {
  const NodeDef& d = graph_.node(id);
  NodeState& st = state_[id];
  st.capacity = d.n.value_or(1);
  if (const auto* p = std::get_if<GridCropParams>(&d.params)) {
    if (st.inputs[0].empty()) throw ShapeError(names_[id] + ": grid crop received an empty list");
    st.tiles = kernels::grid_tiles(st.inputs[0][0].spatial(), p->sizes[0], p->overlap);
    st.capacity = d.n ? std::min(*d.n, st.tiles.size()) : st.tiles.size();
  } else if (const auto* p = std::get_if<RandomCropParams>(&d.params)) {
    if (st.references[0].size() != 1) {
      throw ContractError(names_[id] + ": the mask reference must yield exactly one Sample");
    }
    const Sample& mask = st.references[0][0];
    if (mask.batch() != 1) throw ShapeError(names_[id] + ": the mask reference must have batch size 1");
    for (const auto& list : st.inputs) {
      for (const auto& s : list) {
        for (const auto& a : s.affines()) {
          if (!affine_close(a, mask.affine(0))) {
            throw AlignmentError(names_[id] + ": input is not aligned with the mask reference");
          }
        }
      }
    }
    st.candidates.clear();
    if (p->nonzero) {
      const Size3 sp = mask.spatial();
      for (std::int64_t i = 0; i < sp[0]; ++i) {
        for (std::int64_t j = 0; j < sp[1]; ++j) {
          for (std::int64_t k = 0; k < sp[2]; ++k) {
            for (std::size_t f = 0; f < mask.features(); ++f) {
              if (mask(0, static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k), f) >
                  0.0) {
                st.candidates.push_back({i, j, k});
                break;
              }
            }
          }
        }
      }
      if (st.candidates.empty()) throw ArgumentError(names_[id] + ": nonzero crop on an all-zero mask");
    }
  }
}

void Creator::emit(NodeId id) {
  const NodeDef& d = graph_.node(id);
  NodeState& st = state_[id];
  const std::string& name = names_[id];
  const NodeKind kind = d.kind();
  if (!is_stochastic_kind(kind) && kind != NodeKind::GridCrop && st.produced > 0) return;

  std::vector<std::vector<Sample>> out(d.output_arity());
  switch (kind) {
    case NodeKind::Split: {
      const auto& indices = std::get<SplitParams>(d.params).indices;
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        for (std::size_t i : indices) {
          if (i >= st.inputs[k].size()) {
            throw IndexError(name + ": index " + std::to_string(i) + " out of range for a list of " +
                             std::to_string(st.inputs[k].size()));
          }
          out[k].push_back(st.inputs[k][i]);
        }
      }
      break;
    }
    case NodeKind::Group:
      for (const auto& list : st.inputs) out[0].insert(out[0].end(), list.begin(), list.end());
      break;
    case NodeKind::AffineDeformation: {
      const auto& p = std::get<AffineDeformationParams>(d.params);
      if (st.references[0].size() != 1) {
        throw ContractError(name + ": the reference must yield exactly one Sample, got " +
                            std::to_string(st.references[0].size()));
      }
      kernels::DeformationParams draw;
      for (int a = 0; a < 3; ++a) draw.rotation[a] = st.rng.uniform(-0.5, 0.5) * p.rotation_window_width[a];
      for (int a = 0; a < 3; ++a) draw.translation[a] = st.rng.uniform(-0.5, 0.5) * p.translation_window_width[a];
      for (int a = 0; a < 3; ++a) draw.scaling[a] = 1.0 + st.rng.uniform(-0.5, 0.5) * p.scaling_window_width[a];
      const Affine m = deformation_matrix(draw, kernels::world_center(st.references[0][0]));
      if (std::abs(m.topLeftCorner<3, 3>().determinant()) < 1e-12) {
        throw NumericError(name + ": drawn deformation is not invertible");
      }
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        const Interpolation mode = p.interpolation.empty()      ? Interpolation::Linear
                                   : p.interpolation.size() == 1 ? p.interpolation[0]
                                                                 : p.interpolation[k];
        for (const auto& s : st.inputs[k]) out[k].push_back(kernels::resample(s, m, mode, p.fill));
      }
      break;
    }
    case NodeKind::Flip: {
      const auto& probs = std::get<FlipParams>(d.params).flip_probabilities;
      std::array<bool, 3> axes{};
      for (int a = 0; a < 3; ++a) axes[a] = st.rng.bernoulli(probs[a]);
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        for (const auto& s : st.inputs[k]) out[k].push_back(kernels::flip(s, axes));
      }
      break;
    }
    case NodeKind::Threshold: {
      const auto& p = std::get<ThresholdParams>(d.params);
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        for (const auto& s : st.inputs[k]) {
          out[k].push_back(kernels::threshold(s, p.lower_threshold, p.upper_threshold));
        }
      }
      break;
    }
    case NodeKind::RandomCrop: {
      const auto& p = std::get<RandomCropParams>(d.params);
      const Sample& mask = st.references[0][0];
      Index3 center{};
      if (p.nonzero) {
        center = st.candidates[st.rng.index(st.candidates.size())];
      } else {
        const Size3 sp = mask.spatial();
        for (int a = 0; a < 3; ++a) {
          const std::int64_t size = p.sizes[0][a];
          if (size <= sp[a]) {
            // centers whose crop stays inside the volume
            center[a] = size / 2 + static_cast<std::int64_t>(st.rng.index(static_cast<std::uint64_t>(sp[a] - size + 1)));
          } else {
            center[a] = static_cast<std::int64_t>(st.rng.index(static_cast<std::uint64_t>(sp[a])));
          }
        }
      }
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        const Size3& size = p.sizes.size() == 1 ? p.sizes[0] : p.sizes[k];
        const Index3 start{center[0] - size[0] / 2, center[1] - size[1] / 2, center[2] - size[2] / 2};
        for (const auto& s : st.inputs[k]) out[k].push_back(kernels::crop(s, start, size, p.fill));
      }
      break;
    }
    case NodeKind::GridCrop: {
      const auto& p = std::get<GridCropParams>(d.params);
      const Index3& tile = st.tiles[st.produced];
      const Index3 center{tile[0] + p.sizes[0][0] / 2, tile[1] + p.sizes[0][1] / 2, tile[2] + p.sizes[0][2] / 2};
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        const Size3& size = p.sizes.size() == 1 ? p.sizes[0] : p.sizes[k];
        const Index3 start{center[0] - size[0] / 2, center[1] - size[1] / 2, center[2] - size[2] / 2};
        for (const auto& s : st.inputs[k]) out[k].push_back(kernels::crop(s, start, size, p.fill));
      }
      break;
    }
    case NodeKind::Crop: {
      const auto& p = std::get<CropParams>(d.params);
      Size3 size{};
      if (p.size) {
        size = *p.size;
      } else {
        if (st.references[0].empty()) throw ContractError(name + ": the size reference yielded no Sample");
        size = st.references[0][0].spatial();
      }
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        for (const auto& s : st.inputs[k]) out[k].push_back(kernels::center_crop(s, size));
      }
      break;
    }
    case NodeKind::Put: {
      const auto& p = std::get<PutParams>(d.params);
      if (st.references[0].size() != 1) {
        throw ContractError(name + ": the reference must yield exactly one Sample");
      }
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        out[k].push_back(kernels::put(st.references[0][0], st.inputs[k], p.aggregation, p.fill));
      }
      break;
    }
    case NodeKind::Model: {
      const auto& p = std::get<ModelParams>(d.params);
      if (!p.model) throw StateError("model node " + name + " has no model attached");
      for (std::size_t k = 0; k < st.inputs.size(); ++k) {
        out[k] = apply_model(*p.model, p.contract, st.inputs[k]);
      }
      break;
    }
    case NodeKind::CatalogInput:
    case NodeKind::DirectInput:
    case NodeKind::Buffer:
      break;
  }
  st.outputs = std::move(out);
}

std::string Creator::summary() const {
  std::vector<std::vector<std::string>> rows;
  for (NodeId id = 0; id < graph_.size(); ++id) {
    const NodeDef& d = graph_.node(id);
    std::string shapes = "[";
    for (std::size_t s = 0; s < d.output_arity(); ++s) {
      if (s) shapes += ", ";
      shapes += s < d.output_shapes.size() ? declared_shape_string(d.output_shapes[s]) : "?";
    }
    shapes += "]";
    std::string n = d.n ? std::to_string(*d.n) : (d.kind() == NodeKind::GridCrop ? "tiles" : "1");
    std::vector<std::string> row{names_[id], std::string(kind_name(d.kind())), "n=" + n, "out=" + shapes,
                                 "in=" + connection_list(d.inputs, names_)};
    if (!d.references.empty()) row.push_back("ref=" + connection_list(d.references, names_));
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
  return out.str();
}

std::vector<std::string> Creator::missing_models() const {
  std::vector<std::string> missing;
  for (NodeId id = 0; id < graph_.size(); ++id) {
    const auto* p = std::get_if<ModelParams>(&graph_.node(id).params);
    if (p && !p->model) missing.push_back(names_[id]);
  }
  return missing;
}

void Creator::attach_model(const std::string& name, std::shared_ptr<const Model> model) {
  auto* p = std::get_if<ModelParams>(&graph_.node(id_of(name)).params);
  if (!p) throw ArgumentError(name + " is not a model node");
  if (!model) throw ArgumentError("cannot attach an empty model to " + name);
  p->ref.type = model->type();
  p->ref.hash = model_hash(*model);
  p->model = std::move(model);
}

void Creator::attach_models(const std::map<std::string, std::shared_ptr<const Model>>& models) {
  for (const auto& [name, model] : models) attach_model(name, model);
}

json Creator::to_json() const {
  json nodes = json::array();
  for (NodeId id = 0; id < graph_.size(); ++id) {
    json node = node_to_json(graph_.node(id), names_);
    node["name"] = names_[id];
    nodes.push_back(std::move(node));
  }
  json requested = json::array();
  for (const auto& r : requested_) requested.push_back(connection_to_json(r, names_));
  return {{"format", "voxflow-creator"},
          {"version", kCreatorFormatVersion},
          {"seed", seed_},
          {"nodes", std::move(nodes)},
          {"requested", std::move(requested)}};
}

Creator Creator::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || j.value("format", "") != "voxflow-creator") {
    throw FormatError("not a creator container");
  }
  if (j.value("version", -1) != kCreatorFormatVersion) {
    throw FormatError("unsupported creator version " + j.value("version", json(nullptr)).dump() + " (expected " +
                      std::to_string(kCreatorFormatVersion) + ")");
  }
  ParsedGraph parsed = graph_from_json(j.at("nodes"));
  for (NodeId id = 0; id < parsed.graph.size(); ++id) {
    auto* p = std::get_if<ModelParams>(&parsed.graph.node(id).params);
    if (!p || p->ref.weight_file.empty()) continue;
    std::filesystem::path file(p->ref.weight_file);
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file)) continue;
    auto model = load_model_file(file);
    if (model_hash(*model) == p->ref.hash) p->model = std::move(model);
  }
  std::vector<Connection> requested;
  try {
    for (const auto& r : j.at("requested")) requested.push_back(parsed.resolve(r));
    return Creator(parsed.graph, std::move(requested), j.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed creator container: ") + e.what());
  }
}

void Creator::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write creator file " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing creator file " + path.string());
}

Creator Creator::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open creator file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("creator file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

}  // namespace voxflow
