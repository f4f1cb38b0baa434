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

#include "voxflow/model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "voxflow/errors.hpp"
#include "voxflow/kernels.hpp"
#include "voxflow/random.hpp"

namespace voxflow {

using nlohmann::json;

namespace {

void require_rank5(const NdArray& a, const char* who) {
  if (a.rank() != 5) throw ShapeError(std::string(who) + " expects rank-5 inputs");
}

void check_window(const Size3& w, const char* who) {
  for (auto n : w) {
    if (n <= 0) throw ArgumentError(std::string(who) + ": window sizes must be positive");
  }
}

Size3 size3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw FormatError(std::string(what) + " must be a list of 3 integers");
  Size3 out{};
  for (int a = 0; a < 3; ++a) out[a] = j.at(a).get<std::int64_t>();
  return out;
}

json affine_to_json(const Affine& a) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back({a(r, 0), a(r, 1), a(r, 2), a(r, 3)});
  return rows;
}

Affine affine_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("affine must be a 4x4 list");
  Affine a;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw FormatError("affine must be a 4x4 list");
    for (int c = 0; c < 4; ++c) a(r, c) = j[r][c].get<double>();
  }
  check_affine(a);
  return a;
}

}  // namespace

std::vector<NdArray> IdentityModel::apply(std::span<const NdArray> inputs) const {
  if (inputs.empty()) throw ArgumentError("identity model needs an input");
  return {inputs.front()};
}

ValidConvModel::ValidConvModel(Size3 kernel_size, std::vector<double> weights, double bias)
    : kernel_size_(kernel_size), weights_(std::move(weights)), bias_(bias) {
  check_window(kernel_size_, "valid_conv");
  if (weights_.size() != static_cast<std::size_t>(kernel_size_[0] * kernel_size_[1] * kernel_size_[2])) {
    throw ArgumentError("valid_conv: weight count does not match the kernel size");
  }
}

ModelContract ValidConvModel::contract() const {
  return {{OutputContract{{kernel_size_[0] - 1, kernel_size_[1] - 1, kernel_size_[2] - 1}, std::nullopt,
                          std::nullopt}}};
}

std::vector<NdArray> ValidConvModel::apply(std::span<const NdArray> inputs) const {
  if (inputs.empty()) throw ArgumentError("valid_conv needs an input");
  const NdArray& in = inputs.front();
  require_rank5(in, "valid_conv");
  const auto& s = in.shape;
  const std::int64_t o0 = static_cast<std::int64_t>(s[1]) - kernel_size_[0] + 1;
  const std::int64_t o1 = static_cast<std::int64_t>(s[2]) - kernel_size_[1] + 1;
  const std::int64_t o2 = static_cast<std::int64_t>(s[3]) - kernel_size_[2] + 1;
  if (o0 <= 0 || o1 <= 0 || o2 <= 0) throw ShapeError("valid_conv: input smaller than the kernel");
  const std::size_t F = s[4];
  NdArray out({s[0], static_cast<std::size_t>(o0), static_cast<std::size_t>(o1), static_cast<std::size_t>(o2), F},
              bias_);
  auto at = [&](std::size_t b, std::int64_t i, std::int64_t j, std::int64_t k) {
    return (((b * s[1] + static_cast<std::size_t>(i)) * s[2] + static_cast<std::size_t>(j)) * s[3] +
            static_cast<std::size_t>(k)) *
           F;
  };
  std::size_t o = 0;
  for (std::size_t b = 0; b < s[0]; ++b) {
    for (std::int64_t i = 0; i < o0; ++i) {
      for (std::int64_t j = 0; j < o1; ++j) {
        for (std::int64_t k = 0; k < o2; ++k, o += F) {
          std::size_t w = 0;
          for (std::int64_t a = 0; a < kernel_size_[0]; ++a) {
            for (std::int64_t c = 0; c < kernel_size_[1]; ++c) {
              for (std::int64_t d = 0; d < kernel_size_[2]; ++d, ++w) {
                const std::size_t p = at(b, i + a, j + c, k + d);
                for (std::size_t f = 0; f < F; ++f) out.values[o + f] += weights_[w] * in.values[p + f];
              }
            }
          }
        }
      }
    }
  }
  return {std::move(out)};
}

json ValidConvModel::parameters() const {
  return {{"kernel_size", kernel_size_}, {"weights", weights_}, {"bias", bias_}};
}

BoxMeanModel::BoxMeanModel(Size3 window) : window_(window) { check_window(window_, "box_mean"); }

ModelContract BoxMeanModel::contract() const {
  return {{OutputContract{{window_[0] - 1, window_[1] - 1, window_[2] - 1}, std::nullopt, std::nullopt}}};
}

std::vector<NdArray> BoxMeanModel::apply(std::span<const NdArray> inputs) const {
  if (inputs.empty()) throw ArgumentError("box_mean needs an input");
  const NdArray& in = inputs.front();
  require_rank5(in, "box_mean");
  const auto& s = in.shape;
  const std::size_t F = s[4];
  const std::int64_t n0 = static_cast<std::int64_t>(s[1]);
  const std::int64_t n1 = static_cast<std::int64_t>(s[2]);
  const std::int64_t n2 = static_cast<std::int64_t>(s[3]);
  const std::int64_t o0 = n0 - window_[0] + 1;
  const std::int64_t o1 = n1 - window_[1] + 1;
  const std::int64_t o2 = n2 - window_[2] + 1;
  if (o0 <= 0 || o1 <= 0 || o2 <= 0) throw ShapeError("box_mean: input smaller than the window");
  const double norm = 1.0 / static_cast<double>(window_[0] * window_[1] * window_[2]);
  NdArray out({s[0], static_cast<std::size_t>(o0), static_cast<std::size_t>(o1), static_cast<std::size_t>(o2), F},
              0.0);
  // table(i, j, k) = sum of in over [0, i) x [0, j) x [0, k)
  const std::int64_t t1 = n1 + 1;
  const std::int64_t t2 = n2 + 1;
  std::vector<double> table(static_cast<std::size_t>((n0 + 1) * t1 * t2));
  auto T = [&](std::int64_t i, std::int64_t j, std::int64_t k) -> double& {
    return table[static_cast<std::size_t>((i * t1 + j) * t2 + k)];
  };
  std::size_t o = 0;
  for (std::size_t b = 0; b < s[0]; ++b) {
    for (std::size_t f = 0; f < F; ++f) {
      std::fill(table.begin(), table.end(), 0.0);
      for (std::int64_t i = 1; i <= n0; ++i) {
        for (std::int64_t j = 1; j <= n1; ++j) {
          for (std::int64_t k = 1; k <= n2; ++k) {
            const std::size_t p =
                (((b * s[1] + static_cast<std::size_t>(i - 1)) * s[2] + static_cast<std::size_t>(j - 1)) * s[3] +
                 static_cast<std::size_t>(k - 1)) *
                    F +
                f;
            T(i, j, k) = in.values[p] + T(i - 1, j, k) + T(i, j - 1, k) + T(i, j, k - 1) - T(i - 1, j - 1, k) -
                         T(i - 1, j, k - 1) - T(i, j - 1, k - 1) + T(i - 1, j - 1, k - 1);
          }
        }
      }
      const auto [w0, w1, w2] = window_;
      o = b * static_cast<std::size_t>(o0 * o1 * o2) * F + f;
      for (std::int64_t i = 0; i < o0; ++i) {
        for (std::int64_t j = 0; j < o1; ++j) {
          for (std::int64_t k = 0; k < o2; ++k, o += F) {
            const double sum = T(i + w0, j + w1, k + w2) - T(i, j + w1, k + w2) - T(i + w0, j, k + w2) -
                               T(i + w0, j + w1, k) + T(i, j, k + w2) + T(i, j + w1, k) + T(i + w0, j, k) -
                               T(i, j, k);
            out.values[o] = sum * norm;
          }
        }
      }
    }
  }
  return {std::move(out)};
}

json BoxMeanModel::parameters() const { return {{"window", window_}}; }

json model_to_json(const Model& model) {
  return {{"type", model.type()}, {"parameters", model.parameters()}};
}

std::shared_ptr<const Model> model_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    const json& p = j.contains("parameters") ? j.at("parameters") : json::object();
    if (type == "identity") return std::make_shared<IdentityModel>();
    if (type == "valid_conv") {
      return std::make_shared<ValidConvModel>(size3_from_json(p.at("kernel_size"), "kernel_size"),
                                              p.at("weights").get<std::vector<double>>(),
                                              p.value("bias", 0.0));
    }
    if (type == "box_mean") {
      return std::make_shared<BoxMeanModel>(size3_from_json(p.at("window"), "window"));
    }
    throw FormatError("unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model description: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid model parameters: ") + e.what());
  }
}

std::string model_hash(const Model& model) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(model_to_json(model).dump())));
  return buf;
}

json contract_to_json(const ModelContract& contract) {
  json outputs = json::array();
  for (const auto& c : contract.outputs) {
    json o = {{"shrink", c.shrink}};
    o["features"] = c.features ? json(*c.features) : json(nullptr);
    o["output_to_input"] = c.output_to_input ? affine_to_json(*c.output_to_input) : json(nullptr);
    outputs.push_back(std::move(o));
  }
  return {{"outputs", std::move(outputs)}};
}

ModelContract contract_from_json(const json& j) {
  try {
    ModelContract contract;
    for (const auto& o : j.at("outputs")) {
      OutputContract c;
      c.shrink = size3_from_json(o.at("shrink"), "shrink");
      if (o.contains("features") && !o["features"].is_null()) c.features = o["features"].get<std::size_t>();
      if (o.contains("output_to_input") && !o["output_to_input"].is_null()) {
        c.output_to_input = affine_from_json(o["output_to_input"]);
      }
      contract.outputs.push_back(std::move(c));
    }
    if (contract.outputs.empty()) throw FormatError("model contract declares no outputs");
    return contract;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model contract: ") + e.what());
  } catch (const ValidityError& e) {
    throw FormatError(std::string("malformed model contract: ") + e.what());
  }
}

void save_model_file(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << json{{"format", "voxflow-model"}, {"version", 1}, {"model", model_to_json(model)}}.dump(2) << '\n';
  if (!out) throw IoError("failed writing model file " + path.string());
}

std::shared_ptr<const Model> load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("model file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != "voxflow-model" || j.value("version", 0) != 1) {
    throw FormatError("model file " + path.string() + " has an unsupported format or version");
  }
  return model_from_json(j.at("model"));
}

Size3 contract_output_size(const OutputContract& c, const Size3& in) {
  return {in[0] - c.shrink[0], in[1] - c.shrink[1], in[2] - c.shrink[2]};
}

std::vector<Sample> apply_model(const Model& model, const ModelContract& contract,
                                std::span<const Sample> inputs) {
  if (inputs.empty()) throw ArgumentError("model node received an empty input list");
  std::vector<NdArray> arrays;
  arrays.reserve(inputs.size());
  for (const auto& s : inputs) arrays.push_back(s.to_array());
  std::vector<NdArray> outputs = model.apply(arrays);
  if (outputs.size() != contract.outputs.size()) {
    throw ContractError("model '" + model.type() + "' returned " + std::to_string(outputs.size()) +
                        " outputs; its contract declares " + std::to_string(contract.outputs.size()));
  }
  const Sample& first = inputs.front();
  const Size3 in = first.spatial();
  std::vector<Sample> result;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const OutputContract& c = contract.outputs[k];
    const Size3 size = contract_output_size(c, in);
    const std::size_t features = c.features.value_or(first.features());
    const std::vector<std::size_t> expected{first.batch(), static_cast<std::size_t>(size[0]),
                                            static_cast<std::size_t>(size[1]), static_cast<std::size_t>(size[2]),
                                            features};
    if (size[0] <= 0 || size[1] <= 0 || size[2] <= 0 || outputs[k].shape != expected) {
      throw ContractError("model '" + model.type() + "' output " + std::to_string(k) + " has shape " +
                          shape_string(outputs[k].shape) + "; its contract promises " + shape_string(expected));
    }
    const Affine o2i = c.output_to_input.value_or(
        compose_offset(Affine::Identity(), kernels::center_offset(in, size)));
    std::vector<Affine> affines;
    for (const auto& a : first.affines()) affines.push_back(a * o2i);
    result.emplace_back(std::move(outputs[k]), std::move(affines));
  }
  return result;
}

}  // namespace voxflow
