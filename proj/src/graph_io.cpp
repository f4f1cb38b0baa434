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

#include "voxflow/graph_io.hpp"

#include "voxflow/errors.hpp"

namespace voxflow {

using nlohmann::json;

namespace {

std::string interpolation_name(Interpolation i) { return i == Interpolation::Nearest ? "nearest" : "linear"; }

Interpolation interpolation_from(const std::string& s) {
  if (s == "linear") return Interpolation::Linear;
  if (s == "nearest") return Interpolation::Nearest;
  throw FormatError("unknown interpolation '" + s + "'");
}

std::string aggregation_name(Aggregation a) { return a == Aggregation::Overwrite ? "overwrite" : "average"; }

Aggregation aggregation_from(const std::string& s) {
  if (s == "average") return Aggregation::Average;
  if (s == "overwrite") return Aggregation::Overwrite;
  throw FormatError("unknown aggregation '" + s + "'");
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

Size3 size3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a list of 3 integers");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>()};
}

std::array<double, 3> triple(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a list of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json params_to_json(const NodeParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, CatalogInputParams>) {
          return {{"modalities", p.modalities}};
        } else if constexpr (std::is_same_v<P, SplitParams>) {
          return {{"indices", p.indices}};
        } else if constexpr (std::is_same_v<P, AffineDeformationParams>) {
          json modes = json::array();
          for (auto m : p.interpolation) modes.push_back(interpolation_name(m));
          return {{"rotation_window_width", p.rotation_window_width},
                  {"translation_window_width", p.translation_window_width},
                  {"scaling_window_width", p.scaling_window_width},
                  {"interpolation", modes},
                  {"fill", p.fill}};
        } else if constexpr (std::is_same_v<P, FlipParams>) {
          return {{"flip_probabilities", p.flip_probabilities}};
        } else if constexpr (std::is_same_v<P, ThresholdParams>) {
          return {{"lower_threshold", p.lower_threshold}, {"upper_threshold", optional_json(p.upper_threshold)}};
        } else if constexpr (std::is_same_v<P, RandomCropParams>) {
          return {{"sizes", p.sizes}, {"nonzero", p.nonzero}, {"fill", p.fill}};
        } else if constexpr (std::is_same_v<P, GridCropParams>) {
          return {{"sizes", p.sizes}, {"overlap", p.overlap}, {"fill", p.fill}};
        } else if constexpr (std::is_same_v<P, CropParams>) {
          return {{"size", optional_json(p.size)}};
        } else if constexpr (std::is_same_v<P, BufferParams>) {
          return {{"buffer_size", optional_json(p.buffer_size)}};
        } else if constexpr (std::is_same_v<P, PutParams>) {
          return {{"aggregation", aggregation_name(p.aggregation)}, {"fill", p.fill}};
        } else if constexpr (std::is_same_v<P, ModelParams>) {
          const std::string type = p.model ? p.model->type() : p.ref.type;
          const std::string hash = p.model ? model_hash(*p.model) : p.ref.hash;
          return {{"contract", contract_to_json(p.contract)},
                  {"model", {{"type", type}, {"hash", hash}, {"weight_file", p.ref.weight_file}}}};
        } else {
          return json::object();
        }
      },
      params);
}

NodeParams params_from_json(NodeKind kind, const json& j) {
  switch (kind) {
    case NodeKind::CatalogInput:
      return CatalogInputParams{j.at("modalities").get<std::vector<std::string>>()};
    case NodeKind::DirectInput:
      return DirectInputParams{};
    case NodeKind::Split:
      return SplitParams{j.at("indices").get<std::vector<std::size_t>>()};
    case NodeKind::Group:
      return GroupParams{};
    case NodeKind::AffineDeformation: {
      AffineDeformationParams p;
      p.rotation_window_width = triple(j.at("rotation_window_width"));
      p.translation_window_width = triple(j.at("translation_window_width"));
      p.scaling_window_width = triple(j.at("scaling_window_width"));
      for (const auto& m : j.at("interpolation")) p.interpolation.push_back(interpolation_from(m.get<std::string>()));
      p.fill = j.value("fill", 0.0);
      return p;
    }
    case NodeKind::Flip:
      return FlipParams{triple(j.at("flip_probabilities"))};
    case NodeKind::Threshold:
      return ThresholdParams{j.at("lower_threshold").get<double>(), optional_from<double>(j, "upper_threshold")};
    case NodeKind::RandomCrop: {
      RandomCropParams p;
      for (const auto& s : j.at("sizes")) p.sizes.push_back(size3(s));
      p.nonzero = j.value("nonzero", false);
      p.fill = j.value("fill", 0.0);
      return p;
    }
    case NodeKind::GridCrop: {
      GridCropParams p;
      for (const auto& s : j.at("sizes")) p.sizes.push_back(size3(s));
      p.overlap = size3(j.at("overlap"));
      p.fill = j.value("fill", 0.0);
      return p;
    }
    case NodeKind::Crop: {
      CropParams p;
      if (j.contains("size") && !j["size"].is_null()) p.size = size3(j["size"]);
      return p;
    }
    case NodeKind::Buffer:
      return BufferParams{optional_from<std::size_t>(j, "buffer_size")};
    case NodeKind::Put:
      return PutParams{aggregation_from(j.value("aggregation", "average")), j.value("fill", 0.0)};
    case NodeKind::Model: {
      ModelParams p;
      p.contract = contract_from_json(j.at("contract"));
      const json& m = j.at("model");
      p.ref = {m.at("type").get<std::string>(), m.at("hash").get<std::string>(),
               m.value("weight_file", std::string())};
      return p;
    }
  }
  throw FormatError("unhandled node kind");
}

}  // namespace

json connection_to_json(const Connection& c, const std::vector<std::string>& names) {
  return json::array({names.at(c.node), c.slot});
}

json node_to_json(const NodeDef& def, const std::vector<std::string>& names) {
  json inputs = json::array();
  for (const auto& c : def.inputs) inputs.push_back(connection_to_json(c, names));
  json refs = json::array();
  for (const auto& c : def.references) refs.push_back(connection_to_json(c, names));
  json shapes = json::array();
  for (const auto& s : def.output_shapes) {
    json shape = json::array();
    for (const auto& axis : s) shape.push_back(optional_json(axis));
    shapes.push_back(std::move(shape));
  }
  return {{"kind", kind_name(def.kind())}, {"n", optional_json(def.n)},  {"inputs", inputs},
          {"references", refs},            {"output_shapes", shapes},     {"params", params_to_json(def.params)}};
}

Connection ParsedGraph::resolve(const json& connection) const {
  if (!connection.is_array() || connection.size() != 2) {
    throw FormatError("connection must be a [name, slot] pair");
  }
  const std::string name = connection[0].get<std::string>();
  const auto it = ids.find(name);
  if (it == ids.end()) throw FormatError("connection refers to unknown or later node '" + name + "'");
  return {it->second, connection[1].get<std::size_t>()};
}

ParsedGraph graph_from_json(const json& nodes) {
  if (!nodes.is_array()) throw FormatError("node table must be a list");
  ParsedGraph out;
  try {
    for (const auto& jn : nodes) {
      const std::string name = jn.at("name").get<std::string>();
      if (out.ids.count(name)) throw FormatError("duplicate node name '" + name + "'");
      NodeKind kind;
      try {
        kind = kind_from_name(jn.at("kind").get<std::string>());
      } catch (const LookupError& e) {
        throw FormatError(e.what());
      }
      NodeDef def{params_from_json(kind, jn.value("params", json::object())), optional_from<std::size_t>(jn, "n"),
                  {}, {}, {}};
      for (const auto& c : jn.value("inputs", json::array())) def.inputs.push_back(out.resolve(c));
      for (const auto& c : jn.value("references", json::array())) def.references.push_back(out.resolve(c));
      for (const auto& s : jn.value("output_shapes", json::array())) {
        if (!s.is_array() || s.size() != 5) throw FormatError("declared output shapes must have 5 axes");
        DeclaredShape shape;
        for (std::size_t a = 0; a < 5; ++a) {
          if (!s[a].is_null()) shape[a] = s[a].get<std::int64_t>();
        }
        def.output_shapes.push_back(shape);
      }
      NodeId id;
      try {
        id = out.graph.add(std::move(def));
      } catch (const ArgumentError& e) {
        throw FormatError("node '" + name + "': " + e.what());
      }
      out.ids.emplace(name, id);
      out.names.push_back(name);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed node table: ") + e.what());
  }
  return out;
}

std::vector<std::string> kind_ordinal_names(const Graph& graph, const std::vector<NodeId>& order) {
  std::vector<std::string> names(graph.size());
  std::map<NodeKind, std::size_t> ordinal;
  for (NodeId id : order) {
    const NodeKind k = graph.node(id).kind();
    names[id] = std::string(kind_name(k)) + "_" + std::to_string(ordinal[k]++);
  }
  return names;
}

}  // namespace voxflow
