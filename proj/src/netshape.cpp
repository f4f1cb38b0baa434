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

#include "voxflow/netshape.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "voxflow/errors.hpp"

namespace voxflow::netshape {

namespace {

std::string axis_tag(int axis) { return "axis " + std::to_string(axis); }

std::int64_t ratio(const ArchConfig& cfg, std::size_t p, int axis) {
  return cfg.pathways[p].subsample_factors[axis] / cfg.pathways[p - 1].subsample_factors[axis];
}

void shrink(std::int64_t& size, const Size3& k, int axis, Padding padding, const std::string& where) {
  if (padding == Padding::Same) return;
  size -= k[axis] - 1;
  if (size < 1) throw AdmissibilityError(where + ": size drops to " + std::to_string(size));
}

}  // namespace

void validate(const ArchConfig& cfg) {
  if (cfg.pathways.empty()) throw ArgumentError("architecture needs at least one pathway");
  for (std::size_t p = 0; p < cfg.pathways.size(); ++p) {
    const Pathway& pw = cfg.pathways[p];
    for (int a = 0; a < 3; ++a) {
      if (pw.subsample_factors[a] < 1) throw ArgumentError("subsample factors must be >= 1");
      if (p > 0 && pw.subsample_factors[a] % cfg.pathways[p - 1].subsample_factors[a] != 0) {
        throw ArgumentError("subsample factor of pathway " + std::to_string(p) +
                            " is not a multiple of the previous pathway's");
      }
    }
    for (const auto* list : {&pw.down_kernels, &pw.up_kernels}) {
      for (const auto& k : *list) {
        for (auto v : k) {
          if (v < 1 || v % 2 == 0) throw ArgumentError("kernel sizes must be odd and positive");
        }
      }
    }
  }
}

std::int64_t output_size(const ArchConfig& cfg, int axis, std::int64_t input) {
  validate(cfg);
  if (input < 1) throw AdmissibilityError(axis_tag(axis) + ": input must be positive");
  const std::size_t P = cfg.pathways.size();
  std::vector<std::int64_t> skip(P, 0);
  std::int64_t size = input;
  for (std::size_t p = 0; p < P; ++p) {
    const std::string where = axis_tag(axis) + ", input " + std::to_string(input) + ", pathway " + std::to_string(p);
    if (p > 0) {
      const std::int64_t r = ratio(cfg, p, axis);
      if (size % r != 0) {
        throw AdmissibilityError(where + " entry: " + std::to_string(size) + " is not divisible by " +
                                 std::to_string(r));
      }
      size /= r;
    }
    for (std::size_t i = 0; i < cfg.pathways[p].down_kernels.size(); ++i) {
      shrink(size, cfg.pathways[p].down_kernels[i], axis, cfg.padding, where + " down conv " + std::to_string(i));
    }
    skip[p] = size;
  }
  for (std::size_t p = P; p-- > 0;) {
    const std::string where = axis_tag(axis) + ", input " + std::to_string(input) + ", pathway " + std::to_string(p);
    if (p + 1 < P) {
      size *= ratio(cfg, p + 1, axis);
      if (skip[p] < size) {
        throw AdmissibilityError(where + " skip: " + std::to_string(skip[p]) + " is smaller than the upsampled " +
                                 std::to_string(size));
      }
    }
    for (std::size_t i = 0; i < cfg.pathways[p].up_kernels.size(); ++i) {
      shrink(size, cfg.pathways[p].up_kernels[i], axis, cfg.padding, where + " up conv " + std::to_string(i));
    }
  }
  return size;
}

Size3 output_size(const ArchConfig& cfg, const Size3& input) {
  return {output_size(cfg, 0, input[0]), output_size(cfg, 1, input[1]), output_size(cfg, 2, input[2])};
}

std::int64_t receptive_field(const ArchConfig& cfg, int axis) {
  validate(cfg);
  const std::size_t P = cfg.pathways.size();
  std::int64_t rf = 1;
  std::int64_t jump = 1;
  for (std::size_t p = 0; p < P; ++p) {
    if (p > 0) jump *= ratio(cfg, p, axis);
    for (const auto& k : cfg.pathways[p].down_kernels) rf += (k[axis] - 1) * jump;
  }
  for (std::size_t p = P; p-- > 0;) {
    if (p + 1 < P) jump /= ratio(cfg, p + 1, axis);
    for (const auto& k : cfg.pathways[p].up_kernels) rf += (k[axis] - 1) * jump;
  }
  return rf;
}

Size3 receptive_field(const ArchConfig& cfg) {
  return {receptive_field(cfg, 0), receptive_field(cfg, 1), receptive_field(cfg, 2)};
}

std::vector<std::pair<std::int64_t, std::int64_t>> admissible_input_sizes(const ArchConfig& cfg, int axis,
                                                                          std::int64_t lo, std::int64_t hi) {
  validate(cfg);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t i = std::max<std::int64_t>(lo, 1); i <= hi; ++i) {
    try {
      out.emplace_back(i, output_size(cfg, axis, i));
    } catch (const AdmissibilityError&) {
    }
  }
  return out;
}

std::optional<Size3> input_size_for_output(const ArchConfig& cfg, const Size3& output, std::int64_t limit) {
  Size3 in{};
  for (int a = 0; a < 3; ++a) {
    bool found = false;
    for (const auto& [i, o] : admissible_input_sizes(cfg, a, 1, limit)) {
      if (o == output[a]) {
        in[a] = i;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return in;
}

ArchConfig no_new_net_preset() {
  ArchConfig cfg;
  cfg.padding = Padding::Same;
  cfg.instance_normalization = true;
  const std::int64_t factors[] = {1, 2, 4, 8, 16};
  const std::vector<std::vector<int>> down = {{30, 30}, {60, 60}, {120, 120}, {240, 240}, {480, 240}};
  const std::vector<std::vector<int>> up = {{30, 30}, {60, 30}, {120, 60}, {240, 120}, {}};
  for (std::size_t p = 0; p < 5; ++p) {
    Pathway pw;
    pw.subsample_factors = {factors[p], factors[p], factors[p]};
    pw.down_kernels = {{3, 3, 3}, {3, 3, 3}};
    if (p < 4) pw.up_kernels = {{3, 3, 3}, {3, 3, 3}};
    pw.down_features = down[p];
    pw.up_features = up[p];
    cfg.pathways.push_back(std::move(pw));
  }
  return cfg;
}

namespace {

Size3 triple(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 3) throw FormatError(what + " must be a list of 3 integers");
  return {n[0].as<std::int64_t>(), n[1].as<std::int64_t>(), n[2].as<std::int64_t>()};
}

}  // namespace

ArchConfig parse_arch_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw FormatError(std::string("architecture file is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw FormatError("architecture document must be a mapping");
  if (!root["version"] || root["version"].as<std::string>() != "1") {
    throw FormatError("unsupported architecture file version (expected version: 1)");
  }
  ArchConfig cfg;
  try {
    if (root["number_input_features"]) cfg.number_input_features = root["number_input_features"].as<int>();
    const YAML::Node factors = root["subsample_factors_per_pathway"];
    const YAML::Node kernels = root["kernel_sizes_per_pathway"];
    if (!factors || !factors.IsSequence() || !kernels || !kernels.IsSequence()) {
      throw FormatError("subsample_factors_per_pathway and kernel_sizes_per_pathway are required lists");
    }
    if (factors.size() != kernels.size()) {
      throw FormatError("subsample_factors_per_pathway and kernel_sizes_per_pathway differ in length");
    }
    const YAML::Node features = root["number_features_per_pathway"];
    if (features && (!features.IsSequence() || features.size() != factors.size())) {
      throw FormatError("number_features_per_pathway must have one entry per pathway");
    }
    for (std::size_t p = 0; p < factors.size(); ++p) {
      Pathway pw;
      pw.subsample_factors = triple(factors[p], "subsample factor");
      const YAML::Node k = kernels[p];
      if (!k.IsSequence() || k.size() != 2) {
        throw FormatError("kernel_sizes_per_pathway entries must be [down kernels, up kernels]");
      }
      for (const auto& t : k[0]) pw.down_kernels.push_back(triple(t, "kernel size"));
      for (const auto& t : k[1]) pw.up_kernels.push_back(triple(t, "kernel size"));
      if (features) {
        const YAML::Node f = features[p];
        if (!f.IsSequence() || f.size() != 2) {
          throw FormatError("number_features_per_pathway entries must be [down features, up features]");
        }
        for (const auto& v : f[0]) pw.down_features.push_back(v.as<int>());
        for (const auto& v : f[1]) pw.up_features.push_back(v.as<int>());
      }
      cfg.pathways.push_back(std::move(pw));
    }
    if (root["output_size"] && !root["output_size"].IsNull()) {
      cfg.output_size = triple(root["output_size"], "output_size");
    }
    const std::string padding = root["padding"] ? root["padding"].as<std::string>() : "valid";
    if (padding == "valid") {
      cfg.padding = Padding::Valid;
    } else if (padding == "same") {
      cfg.padding = Padding::Same;
    } else {
      throw FormatError("padding must be \"valid\" or \"same\"");
    }
    if (root["instance_normalization"]) cfg.instance_normalization = root["instance_normalization"].as<bool>();
    if (root["batch_normalization"]) cfg.batch_normalization = root["batch_normalization"].as<bool>();
  } catch (const YAML::Exception& e) {
    throw FormatError(std::string("malformed architecture file: ") + e.what());
  }
  try {
    validate(cfg);
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid architecture: ") + e.what());
  }
  return cfg;
}

ArchConfig load_arch_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open architecture file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_arch_config(text.str());
}

std::string describe(const ArchConfig& cfg, const std::optional<Size3>& input, std::int64_t lo, std::int64_t hi) {
  auto triple_string = [](const Size3& s) {
    return std::to_string(s[0]) + " x " + std::to_string(s[1]) + " x " + std::to_string(s[2]);
  };
  std::ostringstream out;
  out << "pathways: " << cfg.pathways.size() << '\n';
  out << "padding: " << (cfg.padding == Padding::Valid ? "valid" : "same") << '\n';
  out << "receptive field: " << triple_string(receptive_field(cfg)) << '\n';
  if (input) {
    out << "input size: " << triple_string(*input) << '\n';
    out << "output size: " << triple_string(output_size(cfg, *input)) << '\n';
  }
  if (cfg.output_size) {
    out << "requested output size: " << triple_string(*cfg.output_size) << '\n';
    if (auto in = input_size_for_output(cfg, *cfg.output_size, hi)) {
      out << "matching input size: " << triple_string(*in) << '\n';
    } else {
      out << "matching input size: none up to " << hi << '\n';
    }
  }
  for (int a = 0; a < 3; ++a) {
    out << "admissible sizes (axis " << a << ", input " << lo << ".." << hi << "):";
    const auto pairs = admissible_input_sizes(cfg, a, lo, hi);
    if (pairs.empty()) out << " none";
    for (const auto& [i, o] : pairs) out << ' ' << i << "->" << o;
    out << '\n';
  }
  return out.str();
}

}  // namespace voxflow::netshape
