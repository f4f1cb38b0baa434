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

#include "voxflow/batching.hpp"

#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <stop_token>
#include <thread>

#include "voxflow/errors.hpp"
#include "voxflow/kernels.hpp"

namespace voxflow {

Element concat_elements(std::span<const Element> parts) {
  if (parts.empty()) throw ArgumentError("cannot batch zero elements");
  if (parts.size() == 1) return parts.front();
  Element out(parts.front().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t length = parts.front()[k].size();
    for (std::size_t i = 0; i < length; ++i) {
      std::vector<Sample> pieces;
      for (const auto& p : parts) {
        if (p.size() != out.size() || p[k].size() != length) {
          throw ShapeError("cannot batch elements with different structure");
        }
        pieces.push_back(p[k][i]);
      }
      out[k].push_back(kernels::concat_batch(pieces));
    }
  }
  return out;
}

// Sequential generator of batched elements for one pass.
class BatchIterator::Source {
 public:
  Source(Creator& creator, const Sampler& sampler, const BatchOptions& options)
      : creator_(creator), sampler_(sampler), options_(options), rng_(derive_seed(options.seed, "shuffle")) {
    creator_.reseed(options.seed);
  }

  std::optional<Element> next() {
    std::vector<Element> parts;
    while (parts.size() < options_.batch_size) {
      auto e = shuffled();
      if (!e) break;
      parts.push_back(std::move(*e));
    }
    if (parts.empty()) return std::nullopt;
    return concat_elements(parts);
  }

 private:
  std::optional<Element> raw() {
    while (true) {
      if (active_) {
        if (auto out = creator_.evaluate_step()) return out;
        active_ = false;
      }
      if (position_ >= sampler_.size()) return std::nullopt;
      creator_.load(sampler_[position_++]);
      active_ = true;
    }
  }

  std::optional<Element> shuffled() {
    if (options_.shuffle_samples == 0) return raw();
    while (!exhausted_ && buffer_.size() < options_.shuffle_samples) {
      auto e = raw();
      if (!e) {
        exhausted_ = true;
        break;
      }
      buffer_.push_back(std::move(*e));
    }
    if (buffer_.empty()) return std::nullopt;
    const std::size_t i = rng_.index(buffer_.size());
    Element out = std::move(buffer_[i]);
    std::optional<Element> refill = exhausted_ ? std::nullopt : raw();
    if (refill) {
      buffer_[i] = std::move(*refill);
    } else {
      exhausted_ = true;
      buffer_[i] = std::move(buffer_.back());
      buffer_.pop_back();
    }
    return out;
  }

  Creator& creator_;
  const Sampler& sampler_;
  BatchOptions options_;
  Rng rng_;
  std::vector<Element> buffer_;
  std::size_t position_ = 0;
  bool active_ = false;
  bool exhausted_ = false;
};

// Runs a Source on a worker thread, keeping at most `capacity` elements queued.
class BatchIterator::Prefetcher {
 public:
  Prefetcher(Source& source, std::size_t capacity)
      : capacity_(capacity), worker_([this, &source](std::stop_token stop) { run(source, stop); }) {}

  ~Prefetcher() {
    worker_.request_stop();
    ready_.notify_all();
  }

  std::optional<Element> next() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return !queue_.empty() || finished_; });
    if (!queue_.empty()) {
      Element e = std::move(queue_.front());
      queue_.pop_front();
      ready_.notify_all();
      return e;
    }
    if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
    return std::nullopt;
  }

 private:
  void run(Source& source, std::stop_token stop) {
    try {
      while (!stop.stop_requested()) {
        auto e = source.next();
        std::unique_lock lock(mutex_);
        if (!e) break;
        ready_.wait(lock, stop, [&] { return queue_.size() < capacity_; });
        if (stop.stop_requested()) return;
        queue_.push_back(std::move(*e));
        ready_.notify_all();
      }
    } catch (...) {
      std::lock_guard lock(mutex_);
      error_ = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    finished_ = true;
    ready_.notify_all();
  }

  std::size_t capacity_;
  std::mutex mutex_;
  std::condition_variable_any ready_;
  std::deque<Element> queue_;
  std::exception_ptr error_;
  bool finished_ = false;
  std::jthread worker_;
};

BatchIterator::BatchIterator(Creator& creator, const Sampler& sampler, BatchOptions options)
    : creator_(creator), sampler_(sampler), options_(options) {
  if (options_.batch_size == 0) throw ArgumentError("batch_size must be at least 1");
  const bool wants_catalog = creator_.has_input_kind(NodeKind::CatalogInput);
  const bool wants_direct = creator_.has_input_kind(NodeKind::DirectInput);
  for (std::size_t i = 0; i < sampler_.size(); ++i) {
    const Identifier& id = sampler_[i];
    if ((id.catalog() && wants_direct) || (id.direct() && wants_catalog)) {
      throw ContractError("sampler item " + id.describe() + " does not match the creator's input nodes");
    }
  }
}

BatchIterator::~BatchIterator() = default;

void BatchIterator::start() {
  prefetcher_.reset();
  source_ = std::make_unique<Source>(creator_, sampler_, options_);
  if (options_.prefetch_size > 0) prefetcher_ = std::make_unique<Prefetcher>(*source_, options_.prefetch_size);
}

std::optional<Element> BatchIterator::next() {
  if (!source_) start();
  return prefetcher_ ? prefetcher_->next() : source_->next();
}

std::vector<Element> BatchIterator::collect() {
  start();
  std::vector<Element> out;
  while (auto e = next()) out.push_back(std::move(*e));
  source_.reset();
  prefetcher_.reset();
  return out;
}

}  // namespace voxflow
