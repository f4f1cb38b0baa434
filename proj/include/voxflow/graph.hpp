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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "voxflow/kernels.hpp"
#include "voxflow/model.hpp"
#include "voxflow/sample.hpp"

namespace voxflow {

using NodeId = std::size_t;

/// One output slot of one node.
struct Connection {
  NodeId node = 0;
  std::size_t slot = 0;

  friend bool operator==(const Connection&, const Connection&) = default;
};

using kernels::Aggregation;
using kernels::Interpolation;

struct CatalogInputParams {
  std::vector<std::string> modalities;
};
struct DirectInputParams {};
struct SplitParams {
  std::vector<std::size_t> indices;
};
struct GroupParams {};
struct AffineDeformationParams {
  std::array<double, 3> rotation_window_width{};
  std::array<double, 3> translation_window_width{};
  std::array<double, 3> scaling_window_width{};
  /// One entry per input connection, or a single entry for all. Empty means linear.
  std::vector<Interpolation> interpolation;
  double fill = 0.0;
};
struct FlipParams {
  std::array<double, 3> flip_probabilities{};
};
struct ThresholdParams {
  double lower_threshold = 0.0;
  std::optional<double> upper_threshold;
};
struct RandomCropParams {
  /// One size for every input connection, or one per connection.
  std::vector<Size3> sizes;
  bool nonzero = false;
  double fill = 0.0;
};
struct GridCropParams {
  std::vector<Size3> sizes;
  Size3 overlap{};
  double fill = 0.0;
};
struct CropParams {
  /// Absent: the spatial shape of the reference connection's Sample.
  std::optional<Size3> size;
};
struct BufferParams {
  /// Absent: drain until upstream depletion.
  std::optional<std::size_t> buffer_size;
};
struct PutParams {
  Aggregation aggregation = Aggregation::Average;
  double fill = 0.0;
};
/// Identifies the model a node expects when the model itself is not attached.
struct ModelRef {
  std::string type;
  std::string hash;
  std::string weight_file;
};
struct ModelParams {
  ModelContract contract;
  std::shared_ptr<const Model> model;
  ModelRef ref;
};

using NodeParams =
    std::variant<CatalogInputParams, DirectInputParams, SplitParams, GroupParams, AffineDeformationParams,
                 FlipParams, ThresholdParams, RandomCropParams, GridCropParams, CropParams, BufferParams,
                 PutParams, ModelParams>;

/// Same order as the NodeParams alternatives.
enum class NodeKind {
  CatalogInput,
  DirectInput,
  Split,
  Group,
  AffineDeformation,
  Flip,
  Threshold,
  RandomCrop,
  GridCrop,
  Crop,
  Buffer,
  Put,
  Model,
};

std::string_view kind_name(NodeKind kind);
/// LookupError for unknown names.
NodeKind kind_from_name(std::string_view name);
bool is_input_kind(NodeKind kind);
bool is_stochastic_kind(NodeKind kind);

/// Declared shape of one output slot; absent axes are unknown.
using DeclaredShape = std::array<std::optional<std::int64_t>, 5>;

std::string declared_shape_string(const DeclaredShape& shape);

struct NodeDef {
  NodeParams params;
  /// Outputs per input. Absent means 1, or the tile count for grid crops.
  std::optional<std::size_t> n;
  std::vector<Connection> inputs;
  std::vector<Connection> references;
  std::vector<DeclaredShape> output_shapes;

  NodeKind kind() const { return static_cast<NodeKind>(params.index()); }
  /// 1 for input nodes and Group, otherwise one slot per input connection.
  std::size_t output_arity() const;
};

/// Append-only store of node definitions. Connections may refer to any
/// existing node; inputs can be added to a node after creation, so cycles
/// are possible here and are rejected when a Creator is built.
class Graph {
 public:
  /// ArgumentError when a connection names a node that does not exist.
  NodeId add(NodeDef def);
  /// Adds an input connection to an existing node and returns the output
  /// slot it feeds (for kinds with one slot per input).
  Connection connect(NodeId node, Connection input);

  const NodeDef& node(NodeId id) const;
  NodeDef& node(NodeId id);
  std::size_t size() const { return nodes_.size(); }

  Connection catalog_input(std::vector<std::string> modalities, std::size_t n = 1,
                           std::vector<DeclaredShape> output_shapes = {});
  Connection direct_input(std::size_t n = 1);
  Connection split(Connection input, std::vector<std::size_t> indices, std::size_t n = 1);
  Connection group(std::vector<Connection> inputs);
  std::vector<Connection> affine_deformation(Connection reference, std::vector<Connection> inputs,
                                             AffineDeformationParams params, std::size_t n = 1);
  std::vector<Connection> flip(std::vector<Connection> inputs, FlipParams params, std::size_t n = 1);
  Connection threshold(Connection input, ThresholdParams params);
  std::vector<Connection> random_crop(Connection mask, std::vector<Connection> inputs, RandomCropParams params,
                                      std::size_t n = 1);
  std::vector<Connection> grid_crop(std::vector<Connection> inputs, GridCropParams params,
                                    std::optional<std::size_t> n = std::nullopt);
  Connection crop(Connection input, Size3 size);
  Connection crop(Connection input, Connection size_reference);
  Connection buffer(Connection input, std::optional<std::size_t> buffer_size = std::nullopt);
  Connection put(Connection reference, Connection input, PutParams params = {});
  /// Uses the model's own contract unless one is given.
  std::vector<Connection> model(std::vector<Connection> inputs, std::shared_ptr<const Model> model,
                                std::optional<ModelContract> contract = std::nullopt,
                                std::string weight_file = {});

 private:
  std::vector<Connection> slots(NodeId id) const;
  void check(const Connection& c) const;

  std::vector<NodeDef> nodes_;
};

}  // namespace voxflow
