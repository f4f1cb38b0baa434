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

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "voxflow/catalog.hpp"
#include "voxflow/random.hpp"
#include "voxflow/sample.hpp"

namespace voxflow {

/// Points at one record of a shared catalog.
struct CatalogIdentifier {
  std::shared_ptr<const Mirc> mirc;
  RecordKey key;
};

/// Carries its Samples directly.
struct DirectIdentifier {
  std::vector<Sample> samples;
};

class Identifier {
 public:
  /// Throws LookupError when the record does not exist.
  Identifier(CatalogIdentifier id);
  Identifier(DirectIdentifier id) : value_(std::move(id)) {}

  const CatalogIdentifier* catalog() const { return std::get_if<CatalogIdentifier>(&value_); }
  const DirectIdentifier* direct() const { return std::get_if<DirectIdentifier>(&value_); }

  /// "dataset/case/record" or "direct[n]".
  std::string describe() const;

 private:
  std::variant<CatalogIdentifier, DirectIdentifier> value_;
};

struct SamplerOptions {
  bool shuffle = false;
  /// Empty, or one non-negative weight per item with a positive sum.
  std::vector<double> weights;
  std::uint64_t seed = 0;
};

/// Finite list of Identifiers that can be reshuffled between passes.
///
/// Each position holds a group of alternatives; plain samplers have one
/// alternative per group. randomize() reorders the groups and re-draws the
/// alternative of every group uniformly.
class Sampler {
 public:
  explicit Sampler(std::vector<Identifier> items, SamplerOptions options = {});
  static Sampler grouped(std::vector<std::vector<Identifier>> groups, SamplerOptions options = {});

  /// No-op unless shuffle is set. Without weights the new order is a
  /// uniform permutation; with weights, items are drawn with replacement
  /// with probability weight / sum(weights).
  void randomize();

  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  const Identifier& operator[](std::size_t i) const;

 private:
  Sampler(std::vector<std::vector<Identifier>> groups, SamplerOptions options, int);

  std::vector<std::vector<Identifier>> groups_;
  std::vector<double> cumulative_;
  bool shuffle_;
  Rng rng_;
  // (group, alternative) currently at each position
  std::vector<std::pair<std::size_t, std::size_t>> order_;
};

enum class SamplingMode { PerCase, PerRecord };

/// per_record: one Identifier per record. per_case: one position per case
/// whose record is re-drawn uniformly within the case on randomize().
Sampler catalog_sampler(std::shared_ptr<const Mirc> mirc, SamplingMode mode, bool shuffle,
                        std::uint64_t seed = 0);

}  // namespace voxflow
