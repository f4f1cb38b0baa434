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

// Command-line front end: catalog inspection and statistics, pipeline
// summary and execution, and network shape analysis.
//
// Exit codes: 0 success, 1 domain finding (inconsistent catalog, failed
// evaluation), 2 usage or parse error, 3 model node without a model.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "voxflow/catalog_file.hpp"
#include "voxflow/creator.hpp"
#include "voxflow/errors.hpp"
#include "voxflow/netshape.hpp"
#include "voxflow/nifti.hpp"
#include "voxflow/pipeline_spec.hpp"
#include "voxflow/sampling.hpp"

namespace {

using namespace voxflow;

constexpr int kOk = 0;
constexpr int kFinding = 1;
constexpr int kUsage = 2;
constexpr int kMissingModel = 3;

// Runs `body`, mapping library errors onto exit codes.
template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFinding;
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Size3 parse_size(const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 1 && parts.size() != 3) throw CLI::ValidationError("size must be N or A,B,C");
  Size3 out{};
  for (int a = 0; a < 3; ++a) out[a] = std::stoll(parts[parts.size() == 1 ? 0 : a]);
  return out;
}

int cmd_inspect(const std::string& catalog_file, const std::string& modalities, const std::string& ns) {
  return guarded([&] {
    const Mirc mirc = load_catalog_file(catalog_file);
    std::vector<std::string> ids = modalities.empty() ? ids_at_level(mirc, CatalogLevel::Modality)
                                                       : split_list(modalities);
    std::vector<std::size_t> counts(ids.size(), std::numeric_limits<std::size_t>::max());
    if (!ns.empty()) {
      const auto parts = split_list(ns);
      if (parts.size() == 1) {
        counts.assign(ids.size(), std::stoul(parts[0]));
      } else if (parts.size() == ids.size()) {
        for (std::size_t i = 0; i < parts.size(); ++i) counts[i] = std::stoul(parts[i]);
      } else {
        std::cerr << "error: --ns needs one count, or one per modality\n";
        return kUsage;
      }
    }
    const InspectionReport report = inspect(mirc, ids, counts);
    std::cout << report.to_string();
    return report.consistent() ? kOk : kFinding;
  });
}

int cmd_stats(const std::string& catalog_file, const std::string& modality, long n) {
  return guarded([&] {
    const Mirc mirc = load_catalog_file(catalog_file);
    const auto count = n > 0 ? std::optional<std::size_t>(static_cast<std::size_t>(n)) : std::nullopt;
    const MeanStd m = mean_and_std(mirc, modality, count);
    char line[128];
    std::snprintf(line, sizeof line, "%.10g %.10g", m.mean, m.std);
    std::cout << line << '\n';
    return kOk;
  });
}

std::optional<RecordKey> parse_identifier(const std::string& text) {
  const auto first = text.find('/');
  const auto last = text.rfind('/');
  if (first == std::string::npos || first == last) return std::nullopt;
  RecordKey key{text.substr(0, first), text.substr(first + 1, last - first - 1), text.substr(last + 1)};
  if (key.dataset_id.empty() || key.case_id.empty() || key.record_id.empty()) return std::nullopt;
  return key;
}

int cmd_run(const std::string& pipeline_file, const std::string& catalog_file, const std::string& identifier,
            const std::string& set, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  return guarded([&]() -> int {
    PipelineSpec spec = load_pipeline_file(pipeline_file);
    if (seed) spec.bundle.set_seed(*seed);
    const auto keys = spec.bundle.keys();
    if (std::find(keys.begin(), keys.end(), set) == keys.end()) {
      std::cerr << "error: pipeline has no output set '" << set << "'\n";
      return kUsage;
    }
    Creator creator = spec.bundle.creator(set);
    if (const auto missing = creator.missing_models(); !missing.empty()) {
      std::cerr << "error: model node " << missing.front() << " has no model attached\n";
      return kMissingModel;
    }
    auto mirc = std::make_shared<const Mirc>(load_catalog_file(catalog_file));
    const auto key = parse_identifier(identifier);
    if (!key) {
      std::cerr << "error: identifier must be dataset/case/record\n";
      return kUsage;
    }
    std::optional<Identifier> id;
    try {
      id.emplace(CatalogIdentifier{mirc, *key});
    } catch (const LookupError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
    std::filesystem::create_directories(out_dir);
    std::size_t step = 0;
    creator.eval(*id, [&](Creator::Outputs&& outputs) {
      std::size_t slot = 0;
      for (const auto& list : outputs) {
        for (const auto& sample : list) {
          for (std::size_t b = 0; b < sample.batch(); ++b, ++slot) {
            char name[256];
            std::snprintf(name, sizeof name, "%s_%04zu_%04zu.nii.gz", set.c_str(), step, slot);
            write_nifti(std::filesystem::path(out_dir) / name, sample_to_nifti(sample, b));
          }
        }
      }
      ++step;
    });
    std::cout << "steps: " << step << '\n';
    return kOk;
  });
}

int cmd_summary(const std::string& pipeline_file, const std::string& set) {
  return guarded([&]() -> int {
    const PipelineSpec spec = load_pipeline_file(pipeline_file);
    if (!set.empty()) {
      const auto keys = spec.bundle.keys();
      if (std::find(keys.begin(), keys.end(), set) == keys.end()) {
        std::cerr << "error: pipeline has no output set '" << set << "'\n";
        return kUsage;
      }
      std::cout << spec.bundle.creator(set).summary();
      return kOk;
    }
    std::vector<Connection> all;
    for (NodeId id = 0; id < spec.bundle.graph().size(); ++id) all.push_back({id, 0});
    std::cout << Creator(spec.bundle.graph(), all, spec.bundle.seed()).summary();
    return kOk;
  });
}

int cmd_netshape(const std::string& arch_file, const std::string& preset, const std::string& input_size,
                 const std::string& range) {
  return guarded([&]() -> int {
    netshape::ArchConfig cfg;
    if (!preset.empty()) {
      if (preset != "no_new_net") {
        std::cerr << "error: unknown preset '" << preset << "'\n";
        return kUsage;
      }
      cfg = netshape::no_new_net_preset();
    } else if (!arch_file.empty()) {
      cfg = netshape::load_arch_config(arch_file);
    } else {
      std::cerr << "error: give an architecture file or --preset\n";
      return kUsage;
    }
    std::int64_t lo = 1;
    std::int64_t hi = 256;
    if (!range.empty()) {
      const auto parts = split_list(range);
      if (parts.size() != 2) {
        std::cerr << "error: --range must be LO,HI\n";
        return kUsage;
      }
      lo = std::stoll(parts[0]);
      hi = std::stoll(parts[1]);
    }
    std::optional<Size3> input;
    if (!input_size.empty()) input = parse_size(input_size);
    try {
      std::cout << netshape::describe(cfg, input, lo, hi);
    } catch (const AdmissibilityError& e) {
      std::cout << "input size not admissible: " << e.what() << '\n';
      return kFinding;
    }
    return kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxflow: volumetric sample pipelines"};
  app.require_subcommand(1);

  std::string catalog_file;
  std::string pipeline_file;
  std::string arch_file;
  std::string modalities;
  std::string ns;
  std::string modality;
  long n = 0;
  std::string identifier;
  std::string set;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string preset;
  std::string input_size;
  std::string range;

  auto* inspect_cmd = app.add_subcommand("inspect", "Check modalities for spatial consistency");
  inspect_cmd->add_option("catalog", catalog_file, "Catalog file")->required();
  inspect_cmd->add_option("--modalities", modalities, "Comma-separated modality ids (default: all)");
  inspect_cmd->add_option("--ns", ns, "Records to inspect: one count or one per modality (default: all)");

  auto* stats_cmd = app.add_subcommand("stats", "Print the mean and standard deviation of a modality");
  stats_cmd->add_option("catalog", catalog_file, "Catalog file")->required();
  stats_cmd->add_option("--modality", modality, "Modality id")->required();
  stats_cmd->add_option("--n", n, "Use only the first n records holding the modality");

  auto* run_cmd = app.add_subcommand("run", "Evaluate an output set for one record and write NIfTI volumes");
  run_cmd->add_option("pipeline", pipeline_file, "Pipeline file")->required();
  run_cmd->add_option("catalog", catalog_file, "Catalog file")->required();
  run_cmd->add_option("--identifier", identifier, "dataset/case/record")->required();
  run_cmd->add_option("--set", set, "Output set name")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Master seed (default: the pipeline's)");

  auto* summary_cmd = app.add_subcommand("summary", "Print the node listing of a pipeline");
  summary_cmd->add_option("pipeline", pipeline_file, "Pipeline file")->required();
  summary_cmd->add_option("--set", set, "Restrict to the ancestors of one output set");

  auto* netshape_cmd = app.add_subcommand("netshape", "Receptive field and admissible sizes of an architecture");
  netshape_cmd->add_option("arch", arch_file, "Architecture file");
  netshape_cmd->add_option("--preset", preset, "Built-in architecture (no_new_net)");
  netshape_cmd->add_option("--input-size", input_size, "N or A,B,C");
  netshape_cmd->add_option("--range", range, "LO,HI for admissible sizes (default 1,256)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*inspect_cmd) return cmd_inspect(catalog_file, modalities, ns);
    if (*stats_cmd) return cmd_stats(catalog_file, modality, n);
    if (*run_cmd) {
      return cmd_run(pipeline_file, catalog_file, identifier, set, out_dir,
                     seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    }
    if (*summary_cmd) return cmd_summary(pipeline_file, set);
    if (*netshape_cmd) return cmd_netshape(arch_file, preset, input_size, range);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: number out of range\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
