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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "voxflow/errors.hpp"
#include "voxflow/netshape.hpp"

namespace voxflow::netshape {
namespace {

Pathway pathway(std::int64_t factor, std::vector<std::int64_t> down, std::vector<std::int64_t> up) {
  Pathway p;
  p.subsample_factors = {factor, factor, factor};
  for (auto k : down) p.down_kernels.push_back({k, k, k});
  for (auto k : up) p.up_kernels.push_back({k, k, k});
  return p;
}

ArchConfig two_pathway() {
  ArchConfig cfg;
  cfg.pathways = {pathway(1, {3, 3}, {3, 3}), pathway(3, {3, 3}, {3, 3})};
  return cfg;
}

std::string source_file(const std::string& rel) { return std::string(VOXFLOW_SOURCE_DIR) + "/" + rel; }

TEST(NetshapeTest, TwoPathwayChain) {
  // 85 -> 81 (two 3-convs) -> 27 (/3) -> 23 -> 19 -> 57 (x3) -> 53
  const ArchConfig cfg = two_pathway();
  EXPECT_EQ(output_size(cfg, 0, 85), 53);
  EXPECT_EQ(output_size(cfg, Size3{85, 85, 85}), (Size3{53, 53, 53}));
  EXPECT_EQ(receptive_field(cfg, 0), 1 + 4 * 2 + 4 * 2 * 3);
}

TEST(NetshapeTest, InadmissibleSizeNamesTheStage) {
  const ArchConfig cfg = two_pathway();
  try {
    output_size(cfg, 1, 86);
    FAIL() << "86 should not be admissible";
  } catch (const AdmissibilityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("axis 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("pathway 1 entry"), std::string::npos) << msg;
    EXPECT_NE(msg.find("82"), std::string::npos) << msg;
  }
  EXPECT_THROW(output_size(cfg, 0, 5), AdmissibilityError);
  EXPECT_THROW(output_size(cfg, 0, 0), AdmissibilityError);
}

TEST(NetshapeTest, NoNewNetPreset) {
  const ArchConfig cfg = no_new_net_preset();
  EXPECT_EQ(cfg.pathways.size(), 5u);
  EXPECT_EQ(cfg.padding, Padding::Same);
  EXPECT_EQ(receptive_field(cfg), (Size3{185, 185, 185}));
  EXPECT_EQ(output_size(cfg, Size3{128, 128, 128}), (Size3{128, 128, 128}));
  EXPECT_THROW(output_size(cfg, 0, 120), AdmissibilityError);
}

TEST(NetshapeTest, SingleConvolution) {
  ArchConfig cfg;
  cfg.pathways = {pathway(1, {3}, {})};
  EXPECT_EQ(receptive_field(cfg, 0), 3);
  EXPECT_EQ(output_size(cfg, 0, 13), 11);
  EXPECT_THROW(output_size(cfg, 0, 2), AdmissibilityError);
  cfg.padding = Padding::Same;
  EXPECT_EQ(output_size(cfg, 0, 2), 2);
}

TEST(NetshapeTest, TrivialConfigIsIdentity) {
  ArchConfig cfg;
  cfg.pathways = {pathway(1, {}, {})};
  EXPECT_EQ(receptive_field(cfg, 2), 1);
  for (std::int64_t n = 1; n < 20; ++n) EXPECT_EQ(output_size(cfg, 0, n), n);
}

TEST(NetshapeTest, Validation) {
  ArchConfig cfg;
  EXPECT_THROW(validate(cfg), ArgumentError);
  cfg.pathways = {pathway(1, {2}, {})};
  EXPECT_THROW(validate(cfg), ArgumentError);
  cfg.pathways = {pathway(2, {3}, {}), pathway(3, {3}, {})};
  EXPECT_THROW(validate(cfg), ArgumentError);
  cfg.pathways = {pathway(0, {3}, {})};
  EXPECT_THROW(validate(cfg), ArgumentError);
}

TEST(NetshapeTest, AdmissibleSizesAgreeWithOutputSize) {
  const ArchConfig cfg = two_pathway();
  const auto pairs = admissible_input_sizes(cfg, 0, 1, 200);
  std::set<std::int64_t> admissible;
  for (const auto& [in, out] : pairs) {
    admissible.insert(in);
    EXPECT_EQ(output_size(cfg, 0, in), out);
  }
  for (std::int64_t n = 1; n <= 200; ++n) {
    if (!admissible.count(n)) {
      EXPECT_THROW(output_size(cfg, 0, n), AdmissibilityError) << n;
    }
  }
  // valid convolutions: every admissible output is the previous one plus the factor
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i].first - pairs[i - 1].first, 3);
    EXPECT_EQ(pairs[i].second - pairs[i - 1].second, 3);
  }
  EXPECT_EQ(input_size_for_output(cfg, {53, 53, 53}), (Size3{85, 85, 85}));
  EXPECT_FALSE(input_size_for_output(cfg, {54, 53, 53}).has_value());
}

TEST(NetshapeTest, AxesAreIndependent) {
  ArchConfig cfg = two_pathway();
  cfg.pathways[1].subsample_factors = {3, 1, 3};
  cfg.pathways[0].down_kernels[0] = {3, 5, 1};
  const Size3 out = output_size(cfg, Size3{85, 85, 86});
  EXPECT_EQ(out[0], output_size(cfg, 0, 85));
  EXPECT_EQ(out[1], output_size(cfg, 1, 85));
  EXPECT_EQ(out[2], output_size(cfg, 2, 86));
  EXPECT_EQ(receptive_field(cfg)[0], receptive_field(cfg, 0));
  EXPECT_EQ(receptive_field(cfg)[1], receptive_field(cfg, 1));
  EXPECT_EQ(receptive_field(cfg)[2], receptive_field(cfg, 2));
  EXPECT_NE(receptive_field(cfg, 0), receptive_field(cfg, 1));
}

// Input positions (one axis, unbounded, same padding) that output position 0
// depends on. Subsampling keeps every r-th position; upsampling repeats.
std::set<std::int64_t> expand(const std::set<std::int64_t>& s, const std::vector<Size3>& kernels, int axis) {
  std::set<std::int64_t> out = s;
  for (auto it = kernels.rbegin(); it != kernels.rend(); ++it) {
    std::set<std::int64_t> next;
    const std::int64_t h = (*it)[axis] / 2;
    for (auto v : out) {
      for (std::int64_t d = -h; d <= h; ++d) next.insert(v + d);
    }
    out = std::move(next);
  }
  return out;
}

// Positions of pathway p's entry (after its subsampling) that feed
// positions `s` of its up output.
std::set<std::int64_t> up_deps(const ArchConfig& cfg, std::size_t p, const std::set<std::int64_t>& s, int axis) {
  const Pathway& pw = cfg.pathways[p];
  const std::set<std::int64_t> merged = expand(s, pw.up_kernels, axis);
  std::set<std::int64_t> at_down_output = merged;
  if (p + 1 < cfg.pathways.size()) {
    const std::int64_t r = cfg.pathways[p + 1].subsample_factors[axis] / pw.subsample_factors[axis];
    std::set<std::int64_t> deeper;
    for (auto v : merged) deeper.insert(v >= 0 ? v / r : -((-v + r - 1) / r));
    for (auto v : up_deps(cfg, p + 1, deeper, axis)) at_down_output.insert(v * r);
  }
  return expand(at_down_output, pw.down_kernels, axis);
}

std::set<std::int64_t> dependency_set(const ArchConfig& cfg, int axis) { return up_deps(cfg, 0, {0}, axis); }

TEST(NetshapeTest, ReceptiveFieldMatchesDependencyOracle) {
  std::mt19937_64 gen(99);
  const std::vector<std::vector<std::int64_t>> factor_chains = {{1}, {1, 2}, {1, 3}, {1, 2, 4}, {2, 4}, {1, 1, 2}};
  std::uniform_int_distribution<std::size_t> pick_chain(0, factor_chains.size() - 1);
  std::uniform_int_distribution<int> count(0, 2);
  std::uniform_int_distribution<int> half(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    ArchConfig cfg;
    cfg.padding = Padding::Same;
    for (auto f : factor_chains[pick_chain(gen)]) {
      std::vector<std::int64_t> down;
      std::vector<std::int64_t> up;
      for (int i = count(gen); i > 0; --i) down.push_back(2 * half(gen) + 1);
      for (int i = count(gen); i > 0; --i) up.push_back(2 * half(gen) + 1);
      cfg.pathways.push_back(pathway(f, down, up));
    }
    // upsampling by repetition makes the dependency extent phase dependent
    // once convolutions follow it, so only the deepest pathway keeps up convs
    for (std::size_t p = 0; p + 1 < cfg.pathways.size(); ++p) cfg.pathways[p].up_kernels.clear();
    const auto deps = dependency_set(cfg, 0);
    const std::int64_t extent = *deps.rbegin() - *deps.begin() + 1;
    EXPECT_EQ(receptive_field(cfg, 0), extent) << "trial " << trial;
  }
}

TEST(NetshapeTest, OutputSizeIsMonotone) {
  const ArchConfig cfg = two_pathway();
  const auto pairs = admissible_input_sizes(cfg, 0, 1, 400);
  for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_LT(pairs[i - 1].second, pairs[i].second);
}

TEST(NetshapeTest, PresetFileMatchesBuiltIn) {
  EXPECT_EQ(load_arch_config(source_file("presets/no_new_net.yaml")), no_new_net_preset());
}

TEST(NetshapeTest, TwoPathwayFile) {
  const ArchConfig cfg = load_arch_config(source_file("configs/two_pathway_unet.yaml"));
  EXPECT_EQ(cfg.padding, Padding::Valid);
  EXPECT_EQ(cfg.output_size, (Size3{53, 53, 53}));
  EXPECT_EQ(output_size(cfg, Size3{85, 85, 85}), (Size3{53, 53, 53}));
  EXPECT_TRUE(cfg.batch_normalization);
  const std::string report = describe(cfg, Size3{85, 85, 85}, 80, 90);
  EXPECT_NE(report.find("output size: 53 x 53 x 53"), std::string::npos) << report;
  EXPECT_NE(report.find("matching input size: 85 x 85 x 85"), std::string::npos) << report;
  EXPECT_NE(report.find("82->50 85->53 88->56"), std::string::npos) << report;
}

TEST(NetshapeTest, MalformedDocuments) {
  EXPECT_THROW(parse_arch_config("version: 2\n"), FormatError);
  EXPECT_THROW(parse_arch_config("[1, 2]"), FormatError);
  EXPECT_THROW(parse_arch_config("version: 1\nsubsample_factors_per_pathway: [[1, 1, 1]]\n"), FormatError);
  EXPECT_THROW(parse_arch_config(R"(version: 1
subsample_factors_per_pathway: [[1, 1, 1]]
kernel_sizes_per_pathway: [[[[3, 3, 3]], []]]
padding: reflect
)"),
               FormatError);
  EXPECT_THROW(parse_arch_config(R"(version: 1
subsample_factors_per_pathway: [[1, 1, 1]]
kernel_sizes_per_pathway: [[[[2, 2, 2]], []]]
)"),
               FormatError);
  EXPECT_THROW(parse_arch_config("version: 1\nfoo: [: bad"), FormatError);
  EXPECT_THROW(load_arch_config("/nonexistent/arch.yaml"), IoError);
}

}  // namespace
}  // namespace voxflow::netshape
