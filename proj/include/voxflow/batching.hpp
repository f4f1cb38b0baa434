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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "voxflow/creator.hpp"
#include "voxflow/sampling.hpp"

namespace voxflow {

/// One list of Samples per requested connection, batched along axis 0.
using Element = Creator::Outputs;

struct BatchOptions {
  std::size_t batch_size = 1;
  /// Shuffle-buffer capacity; 0 disables shuffling.
  std::size_t shuffle_samples = 0;
  /// Capacity of the prefetch queue in batched elements; 0 runs synchronously.
  std::size_t prefetch_size = 0;
  std::uint64_t seed = 0;
};

/// Concatenates elements along the batch axis, per connection and list item.
Element concat_elements(std::span<const Element> parts);

/// Streams one pass over a Sampler: for each Identifier in order, the
/// Creator runs until depletion; outputs go through an optional shuffle
/// buffer and are grouped batch_size at a time. The final batch may be
/// short. The Creator is reseeded with `seed` at the start of every pass.
class BatchIterator {
 public:
  /// ContractError when an Identifier kind does not match the Creator's
  /// input nodes; ArgumentError when batch_size is 0.
  BatchIterator(Creator& creator, const Sampler& sampler, BatchOptions options = {});
  ~BatchIterator();
  BatchIterator(const BatchIterator&) = delete;
  BatchIterator& operator=(const BatchIterator&) = delete;

  /// Starts a new pass, abandoning any pass in progress.
  void start();
  /// Next batched element of the current pass, or nullopt at its end.
  /// Starts a pass when none is active. Errors raised while generating
  /// (also on the prefetch worker) are rethrown here.
  std::optional<Element> next();
  /// A complete fresh pass.
  std::vector<Element> collect();

  const BatchOptions& options() const { return options_; }

 private:
  class Source;
  class Prefetcher;

  Creator& creator_;
  const Sampler& sampler_;
  BatchOptions options_;
  std::unique_ptr<Source> source_;
  std::unique_ptr<Prefetcher> prefetcher_;
};

}  // namespace voxflow
