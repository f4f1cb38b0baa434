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

#include "voxflow/graph.hpp"

#include <array>

#include "voxflow/errors.hpp"

namespace voxflow {

namespace {

constexpr std::array<std::string_view, 13> kKindNames = {
    "CatalogInput", "DirectInput", "Split", "Group",  "AffineDeformation", "Flip",  "Threshold",
    "RandomCrop",   "GridCrop",    "Crop",  "Buffer", "Put",               "Model",
};

}  // namespace

std::string_view kind_name(NodeKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

NodeKind kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  }
  throw LookupError("unknown node kind '" + std::string(name) + "'");
}

bool is_input_kind(NodeKind kind) { return kind == NodeKind::CatalogInput || kind == NodeKind::DirectInput; }

bool is_stochastic_kind(NodeKind kind) {
  return kind == NodeKind::AffineDeformation || kind == NodeKind::Flip || kind == NodeKind::RandomCrop;
}

std::string declared_shape_string(const DeclaredShape& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += shape[i] ? std::to_string(*shape[i]) : "None";
  }
  return out + ")";
}

std::size_t NodeDef::output_arity() const {
  const NodeKind k = kind();
  if (is_input_kind(k) || k == NodeKind::Group) return 1;
  return inputs.size();
}

void Graph::check(const Connection& c) const {
  if (c.node >= nodes_.size()) {
    throw ArgumentError("connection refers to unknown node " + std::to_string(c.node));
  }
}

NodeId Graph::add(NodeDef def) {
  for (const auto& c : def.inputs) check(c);
  for (const auto& c : def.references) check(c);
  if (def.n && *def.n == 0) throw ArgumentError("n must be positive");
  if (is_input_kind(def.kind()) && !def.inputs.empty()) throw ArgumentError("input nodes take no input connections");
  nodes_.push_back(std::move(def));
  return nodes_.size() - 1;
}

Connection Graph::connect(NodeId id, Connection input) {
  check(input);
  NodeDef& def = node(id);
  if (is_input_kind(def.kind())) throw ArgumentError("input nodes take no input connections");
  def.inputs.push_back(input);
  return {id, def.kind() == NodeKind::Group ? 0 : def.inputs.size() - 1};
}

const NodeDef& Graph::node(NodeId id) const {
  if (id >= nodes_.size()) throw LookupError("no node with id " + std::to_string(id));
  return nodes_[id];
}

NodeDef& Graph::node(NodeId id) {
  if (id >= nodes_.size()) throw LookupError("no node with id " + std::to_string(id));
  return nodes_[id];
}

std::vector<Connection> Graph::slots(NodeId id) const {
  std::vector<Connection> out;
  for (std::size_t s = 0; s < nodes_[id].output_arity(); ++s) out.push_back({id, s});
  return out;
}

Connection Graph::catalog_input(std::vector<std::string> modalities, std::size_t n,
                                std::vector<DeclaredShape> output_shapes) {
  if (modalities.empty()) throw ArgumentError("catalog input needs at least one modality");
  return {add({CatalogInputParams{std::move(modalities)}, n, {}, {}, std::move(output_shapes)}), 0};
}

Connection Graph::direct_input(std::size_t n) { return {add({DirectInputParams{}, n, {}, {}, {}}), 0}; }

Connection Graph::split(Connection input, std::vector<std::size_t> indices, std::size_t n) {
  return {add({SplitParams{std::move(indices)}, n, {input}, {}, {}}), 0};
}

Connection Graph::group(std::vector<Connection> inputs) {
  if (inputs.empty()) throw ArgumentError("group needs at least one input connection");
  return {add({GroupParams{}, 1, std::move(inputs), {}, {}}), 0};
}

std::vector<Connection> Graph::affine_deformation(Connection reference, std::vector<Connection> inputs,
                                                  AffineDeformationParams params, std::size_t n) {
  if (!params.interpolation.empty() && params.interpolation.size() != 1 &&
      params.interpolation.size() != inputs.size()) {
    throw ArgumentError("affine deformation needs one interpolation mode, or one per input");
  }
  return slots(add({std::move(params), n, std::move(inputs), {reference}, {}}));
}

std::vector<Connection> Graph::flip(std::vector<Connection> inputs, FlipParams params, std::size_t n) {
  for (double p : params.flip_probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("flip probabilities must lie in [0, 1]");
  }
  return slots(add({params, n, std::move(inputs), {}, {}}));
}

Connection Graph::threshold(Connection input, ThresholdParams params) {
  return {add({params, 1, {input}, {}, {}}), 0};
}

std::vector<Connection> Graph::random_crop(Connection mask, std::vector<Connection> inputs,
                                           RandomCropParams params, std::size_t n) {
  if (params.sizes.empty()) throw ArgumentError("random crop needs a size");
  return slots(add({std::move(params), n, std::move(inputs), {mask}, {}}));
}

std::vector<Connection> Graph::grid_crop(std::vector<Connection> inputs, GridCropParams params,
                                         std::optional<std::size_t> n) {
  if (params.sizes.empty()) throw ArgumentError("grid crop needs a size");
  for (std::size_t a = 0; a < 3; ++a) {
    if (params.overlap[a] < 0 || params.overlap[a] >= params.sizes[0][a]) {
      throw ArgumentError("grid crop overlap must be in [0, size)");
    }
  }
  return slots(add({std::move(params), n, std::move(inputs), {}, {}}));
}

Connection Graph::crop(Connection input, Size3 size) { return {add({CropParams{size}, 1, {input}, {}, {}}), 0}; }

Connection Graph::crop(Connection input, Connection size_reference) {
  return {add({CropParams{}, 1, {input}, {size_reference}, {}}), 0};
}

Connection Graph::buffer(Connection input, std::optional<std::size_t> buffer_size) {
  if (buffer_size && *buffer_size == 0) throw ArgumentError("buffer size must be positive");
  return {add({BufferParams{buffer_size}, 1, {input}, {}, {}}), 0};
}

Connection Graph::put(Connection reference, Connection input, PutParams params) {
  return {add({params, 1, {input}, {reference}, {}}), 0};
}

std::vector<Connection> Graph::model(std::vector<Connection> inputs, std::shared_ptr<const Model> model,
                                     std::optional<ModelContract> contract, std::string weight_file) {
  if (!model && !contract) throw ArgumentError("a model node without a model needs an explicit contract");
  ModelParams params;
  params.contract = contract ? std::move(*contract) : model->contract();
  if (model) params.ref = {model->type(), model_hash(*model), std::move(weight_file)};
  else params.ref.weight_file = std::move(weight_file);
  params.model = std::move(model);
  return slots(add({std::move(params), 1, std::move(inputs), {}, {}}));
}

}  // namespace voxflow
