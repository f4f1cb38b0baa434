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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "voxflow/errors.hpp"
#include "voxflow/nifti.hpp"
#include "voxflow/sample.hpp"

namespace voxflow {

/// Insertion-ordered collection keyed by the children's id().
template <typename T>
class IdMap {
 public:
  void add(T item) {
    if (index_.contains(item.id())) throw ArgumentError("duplicate id '" + item.id() + "'");
    index_.emplace(item.id(), items_.size());
    items_.push_back(std::move(item));
  }
  const T* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &items_[it->second];
  }
  const T& at(const std::string& id) const {
    if (const T* p = find(id)) return *p;
    throw LookupError("no entry '" + id + "'");
  }
  bool contains(const std::string& id) const { return index_.contains(id); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<T> items_;
  std::map<std::string, std::size_t> index_;
};

/// Lazily loaded source of one Sample.
class Modality {
 public:
  struct VolumeFile {
    std::filesystem::path path;
  };
  struct Volume {
    NiftiImage image;
  };
  struct Array {
    NdArray data;  // rank-5, or a rank-3/4 volume in (s0, s1, s2[, feature]) order
    Affine affine;
  };
  struct ImageFiles {
    std::vector<std::filesystem::path> paths;
  };
  struct Scalar {
    double value;
  };
  using Source = std::variant<VolumeFile, Volume, Array, ImageFiles, Scalar>;

  Modality(std::string id, Source source) : id_(std::move(id)), source_(std::move(source)) {}

  static Modality volume_file(std::string id, std::filesystem::path path) {
    return Modality(std::move(id), VolumeFile{std::move(path)});
  }
  static Modality volume(std::string id, NiftiImage image) {
    return Modality(std::move(id), Volume{std::move(image)});
  }
  static Modality array(std::string id, NdArray data, Affine affine = Affine::Identity()) {
    return Modality(std::move(id), Array{std::move(data), affine});
  }
  static Modality image_files(std::string id, std::vector<std::filesystem::path> paths) {
    return Modality(std::move(id), ImageFiles{std::move(paths)});
  }
  static Modality scalar(std::string id, double value) {
    return Modality(std::move(id), Scalar{value});
  }

  const std::string& id() const { return id_; }
  const Source& source() const { return source_; }

  /// Reads the source. Every call yields an equal Sample.
  Sample load() const;

 private:
  std::string id_;
  Source source_;
};

class Record {
 public:
  explicit Record(std::string id) : id_(std::move(id)) {}
  const std::string& id() const { return id_; }
  Record& add(Modality m) {
    modalities_.add(std::move(m));
    return *this;
  }
  const IdMap<Modality>& modalities() const { return modalities_; }
  bool has(const std::string& modality_id) const { return modalities_.contains(modality_id); }
  const Modality& operator[](const std::string& modality_id) const { return modalities_.at(modality_id); }

 private:
  std::string id_;
  IdMap<Modality> modalities_;
};

class Case {
 public:
  explicit Case(std::string id) : id_(std::move(id)) {}
  const std::string& id() const { return id_; }
  Case& add(Record r) {
    records_.add(std::move(r));
    return *this;
  }
  const IdMap<Record>& records() const { return records_; }
  const Record& operator[](const std::string& record_id) const { return records_.at(record_id); }

 private:
  std::string id_;
  IdMap<Record> records_;
};

class Dataset {
 public:
  explicit Dataset(std::string id) : id_(std::move(id)) {}
  const std::string& id() const { return id_; }
  Dataset& add(Case c) {
    cases_.add(std::move(c));
    return *this;
  }
  const IdMap<Case>& cases() const { return cases_; }
  const Case& operator[](const std::string& case_id) const { return cases_.at(case_id); }

 private:
  std::string id_;
  IdMap<Case> cases_;
};

/// Address of one record inside a Mirc.
struct RecordKey {
  std::string dataset_id;
  std::string case_id;
  std::string record_id;

  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

/// Top of the catalog hierarchy. Immutable once built; safe to share.
class Mirc {
 public:
  Mirc() = default;
  Mirc& add(Dataset d) {
    datasets_.add(std::move(d));
    return *this;
  }
  const IdMap<Dataset>& datasets() const { return datasets_; }
  const Dataset& operator[](const std::string& dataset_id) const { return datasets_.at(dataset_id); }

  /// Throws LookupError naming the missing level.
  const Record& record(const RecordKey& key) const;

  /// Every record in traversal (insertion) order.
  std::vector<RecordKey> record_keys() const;
  std::size_t case_count() const;

 private:
  IdMap<Dataset> datasets_;
};

enum class CatalogLevel { Dataset, Case, Record, Modality };

/// Distinct ids found at `level`, in first-seen traversal order.
std::vector<std::string> ids_at_level(const Mirc& mirc, CatalogLevel level);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and population standard deviation over every voxel of the first
/// `n` records (traversal order) holding `modality_id`; all when n is empty.
MeanStd mean_and_std(const Mirc& mirc, const std::string& modality_id,
                     std::optional<std::size_t> n = std::nullopt);

struct InspectionEntry {
  RecordKey record;
  std::string modality_id;
  Shape5 shape{};
  std::array<double, 3> voxel_size{};
  Affine affine = Affine::Identity();
};

struct AxisDistribution {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct InspectionFlag {
  RecordKey record;
  std::string message;
};

struct InspectionReport {
  std::vector<InspectionEntry> entries;
  std::vector<InspectionFlag> flags;
  /// Modalities requested but absent from a record that was inspected for another modality.
  std::vector<std::pair<RecordKey, std::string>> missing;
  std::array<AxisDistribution, 3> voxel_size;

  bool consistent() const { return flags.empty(); }
  std::string to_string() const;
};

/// Spatial consistency check across modalities. Modality k is inspected in
/// the first ns[k] records that contain it. A record is flagged when two of
/// its inspected modalities differ in spatial shape or in affine (1e-5).
InspectionReport inspect(const Mirc& mirc, const std::vector<std::string>& modality_ids,
                         const std::vector<std::size_t>& ns);

struct ScalarRow {
  RecordKey record;
  double value = 0.0;
};

/// One row per record holding `modality_id`; that modality must load to a
/// single-element Sample (ShapeError otherwise).
std::vector<ScalarRow> scalar_table(const Mirc& mirc, const std::string& modality_id);

}  // namespace voxflow
