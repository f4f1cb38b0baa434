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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxflow/sample.hpp"

namespace voxflow {

/// Shape and geometry promise for one model output.
struct OutputContract {
  /// Spatial shrink per axis: out = in - shrink.
  Size3 shrink{};
  /// Output feature count; absent means equal to the input's.
  std::optional<std::size_t> features;
  /// Voxel map from output indices to input indices. Absent means the
  /// centered offset floor((in - out) / 2).
  std::optional<Affine> output_to_input;

  friend bool operator==(const OutputContract&, const OutputContract&) = default;
};

/// Per-output contracts of a model. The first input's spatial shape and
/// affines are the basis for every output.
struct ModelContract {
  std::vector<OutputContract> outputs;

  friend bool operator==(const ModelContract&, const ModelContract&) = default;
};

/// A pure tensor function with declared shape behavior.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::string type() const = 0;
  virtual ModelContract contract() const = 0;
  /// One rank-5 array per input Sample in, one per contract output out.
  virtual std::vector<NdArray> apply(std::span<const NdArray> inputs) const = 0;
  /// Everything needed to rebuild the model, excluding its type.
  virtual nlohmann::json parameters() const = 0;
};

/// Passes the first input through unchanged.
class IdentityModel final : public Model {
 public:
  std::string type() const override { return "identity"; }
  ModelContract contract() const override { return {{OutputContract{}}}; }
  std::vector<NdArray> apply(std::span<const NdArray> inputs) const override;
  nlohmann::json parameters() const override { return nlohmann::json::object(); }
};

/// Depthwise valid convolution: every feature is convolved with the same
/// kernel (row-major, axis 2 fastest) and shifted by `bias`.
class ValidConvModel final : public Model {
 public:
  ValidConvModel(Size3 kernel_size, std::vector<double> weights, double bias = 0.0);
  std::string type() const override { return "valid_conv"; }
  ModelContract contract() const override;
  std::vector<NdArray> apply(std::span<const NdArray> inputs) const override;
  nlohmann::json parameters() const override;

 private:
  Size3 kernel_size_;
  std::vector<double> weights_;
  double bias_;
};

/// Mean over a valid window, computed with a summed-volume table.
class BoxMeanModel final : public Model {
 public:
  explicit BoxMeanModel(Size3 window);
  std::string type() const override { return "box_mean"; }
  ModelContract contract() const override;
  std::vector<NdArray> apply(std::span<const NdArray> inputs) const override;
  nlohmann::json parameters() const override;

 private:
  Size3 window_;
};

/// Wraps a callable. Not serializable by parameters alone; `type` names it.
class FunctionModel final : public Model {
 public:
  using Function = std::function<std::vector<NdArray>(std::span<const NdArray>)>;
  FunctionModel(std::string type, ModelContract contract, Function fn)
      : type_(std::move(type)), contract_(std::move(contract)), fn_(std::move(fn)) {}
  std::string type() const override { return type_; }
  ModelContract contract() const override { return contract_; }
  std::vector<NdArray> apply(std::span<const NdArray> inputs) const override { return fn_(inputs); }
  nlohmann::json parameters() const override { return nlohmann::json::object(); }

 private:
  std::string type_;
  ModelContract contract_;
  Function fn_;
};

/// {"type": ..., "parameters": ...}
nlohmann::json model_to_json(const Model& model);
/// Rebuilds a built-in model; FormatError for unknown types or bad parameters.
std::shared_ptr<const Model> model_from_json(const nlohmann::json& j);
/// 16 hex digits of FNV-1a over the canonical JSON of the model.
std::string model_hash(const Model& model);

nlohmann::json contract_to_json(const ModelContract& contract);
ModelContract contract_from_json(const nlohmann::json& j);

/// Weight file: {"format": "voxflow-model", "version": 1, "model": {...}}.
void save_model_file(const std::filesystem::path& path, const Model& model);
std::shared_ptr<const Model> load_model_file(const std::filesystem::path& path);

/// Output spatial shape for contract output `k` given the first input's shape.
Size3 contract_output_size(const OutputContract& c, const Size3& in);

/// Runs the model on a list of Samples and wraps each output with affines
/// A_first[b] * output_to_input. ContractError when the model's output
/// shapes disagree with `contract`.
std::vector<Sample> apply_model(const Model& model, const ModelContract& contract,
                                std::span<const Sample> inputs);

}  // namespace voxflow
