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

#include "voxflow/catalog.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "voxflow/image_io.hpp"

namespace voxflow {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Sample load_array(const Modality::Array& a) {
  const auto rank = a.data.rank();
  if (rank == 5) {
    return Sample(a.data, std::vector<Affine>(a.data.shape[0], a.affine));
  }
  if (rank == 0) {
    return Sample(promote(a.data, {}), {a.affine});
  }
  if (rank == 3) {
    const AxisRole roles[] = {AxisRole::Spatial0, AxisRole::Spatial1, AxisRole::Spatial2};
    return Sample(promote(a.data, roles), {a.affine});
  }
  if (rank == 4) {
    const AxisRole roles[] = {AxisRole::Spatial0, AxisRole::Spatial1, AxisRole::Spatial2,
                              AxisRole::Feature};
    return Sample(promote(a.data, roles), {a.affine});
  }
  throw ShapeError("array modality of rank " + std::to_string(rank) +
                   " is ambiguous; promote it to rank 5 first");
}

std::string key_string(const RecordKey& k) {
  return k.dataset_id + "/" + k.case_id + "/" + k.record_id;
}

}  // namespace

Sample Modality::load() const {
  return std::visit(
      Overloaded{
          [](const VolumeFile& v) { return nifti_to_sample(read_nifti(v.path)); },
          [](const Volume& v) { return nifti_to_sample(v.image); },
          [](const Array& a) { return load_array(a); },
          [](const ImageFiles& f) { return read_images(f.paths); },
          [](const Scalar& s) { return Sample(NdArray({1, 1, 1, 1, 1}, {s.value})); },
      },
      source_);
}

const Record& Mirc::record(const RecordKey& key) const {
  const Dataset* d = datasets_.find(key.dataset_id);
  if (!d) throw LookupError("no dataset '" + key.dataset_id + "'");
  const Case* c = d->cases().find(key.case_id);
  if (!c) throw LookupError("no case '" + key.case_id + "' in dataset '" + key.dataset_id + "'");
  const Record* r = c->records().find(key.record_id);
  if (!r) throw LookupError("no record '" + key.record_id + "' in case '" + key.case_id + "'");
  return *r;
}

std::vector<RecordKey> Mirc::record_keys() const {
  std::vector<RecordKey> keys;
  for (const auto& d : datasets_) {
    for (const auto& c : d.cases()) {
      for (const auto& r : c.records()) keys.push_back({d.id(), c.id(), r.id()});
    }
  }
  return keys;
}

std::size_t Mirc::case_count() const {
  std::size_t n = 0;
  for (const auto& d : datasets_) n += d.cases().size();
  return n;
}

std::vector<std::string> ids_at_level(const Mirc& mirc, CatalogLevel level) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  auto note = [&](const std::string& id) {
    if (seen.insert(id).second) ids.push_back(id);
  };
  for (const auto& d : mirc.datasets()) {
    if (level == CatalogLevel::Dataset) {
      note(d.id());
      continue;
    }
    for (const auto& c : d.cases()) {
      if (level == CatalogLevel::Case) {
        note(c.id());
        continue;
      }
      for (const auto& r : c.records()) {
        if (level == CatalogLevel::Record) {
          note(r.id());
          continue;
        }
        for (const auto& m : r.modalities()) note(m.id());
      }
    }
  }
  return ids;
}

MeanStd mean_and_std(const Mirc& mirc, const std::string& modality_id,
                     std::optional<std::size_t> n) {
  // per-record two-pass moments merged pairwise (Chan et al.)
  double count = 0.0, mean = 0.0, m2 = 0.0;
  std::size_t used = 0;
  for (const auto& key : mirc.record_keys()) {
    if (n && used >= *n) break;
    const Record& rec = mirc.record(key);
    if (!rec.has(modality_id)) continue;
    ++used;
    const Sample s = rec[modality_id].load();
    const auto v = s.values();
    if (v.empty()) continue;
    const double nb = static_cast<double>(v.size());
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const double mb = static_cast<double>(sum / v.size());
    long double sq = 0.0L;
    for (double x : v) sq += (x - mb) * (x - mb);
    const double m2b = static_cast<double>(sq);

    const double total = count + nb;
    const double delta = mb - mean;
    mean += delta * nb / total;
    m2 += m2b + delta * delta * count * nb / total;
    count = total;
  }
  if (used == 0) throw LookupError("no record holds modality '" + modality_id + "'");
  if (count == 0.0) return {};
  return {mean, std::sqrt(m2 / count)};
}

InspectionReport inspect(const Mirc& mirc, const std::vector<std::string>& modality_ids,
                         const std::vector<std::size_t>& ns) {
  if (modality_ids.size() != ns.size()) {
    throw ArgumentError("inspect: modality_ids and ns must have the same length");
  }
  InspectionReport report;
  const auto keys = mirc.record_keys();
  std::vector<std::size_t> taken(modality_ids.size(), 0);
  std::array<std::vector<double>, 3> sizes;

  for (const auto& key : keys) {
    const Record& rec = mirc.record(key);
    std::vector<std::string> absent;
    const std::size_t first_entry = report.entries.size();
    for (std::size_t k = 0; k < modality_ids.size(); ++k) {
      if (!rec.has(modality_ids[k])) {
        absent.push_back(modality_ids[k]);
        continue;
      }
      if (taken[k] >= ns[k]) continue;
      ++taken[k];
      const Sample s = rec[modality_ids[k]].load();
      InspectionEntry e;
      e.record = key;
      e.modality_id = modality_ids[k];
      e.shape = s.shape();
      e.affine = s.affine(0);
      for (int a = 0; a < 3; ++a) {
        e.voxel_size[a] = e.affine.block<3, 1>(0, a).norm();
        sizes[a].push_back(e.voxel_size[a]);
      }
      report.entries.push_back(e);
    }
    if (report.entries.size() == first_entry) continue;
    for (const auto& m : absent) report.missing.emplace_back(key, m);

    const InspectionEntry& ref = report.entries[first_entry];
    for (std::size_t i = first_entry + 1; i < report.entries.size(); ++i) {
      const InspectionEntry& e = report.entries[i];
      const bool same_shape = std::equal(ref.shape.begin() + 1, ref.shape.begin() + 4, e.shape.begin() + 1);
      if (!same_shape) {
        report.flags.push_back({key, "shape of '" + e.modality_id + "' " + shape_string(e.shape) +
                                         " differs from '" + ref.modality_id + "' " +
                                         shape_string(ref.shape)});
      } else if (!affine_close(ref.affine, e.affine)) {
        report.flags.push_back(
            {key, "affine of '" + e.modality_id + "' differs from '" + ref.modality_id + "'"});
      }
    }
  }

  for (int a = 0; a < 3; ++a) {
    auto& v = sizes[a];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    report.voxel_size[a] = {v.front(), v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]), v.back()};
  }
  return report;
}

std::string InspectionReport::to_string() const {
  std::ostringstream os;
  os << std::setprecision(6);
  const RecordKey* current = nullptr;
  for (const auto& e : entries) {
    if (!current || !(*current == e.record)) {
      current = &e.record;
      os << "record " << key_string(e.record) << '\n';
    }
    os << "  " << e.modality_id << "  shape " << shape_string(e.shape) << "  voxel size ("
       << e.voxel_size[0] << ", " << e.voxel_size[1] << ", " << e.voxel_size[2] << ")\n";
  }
  for (const auto& [key, m] : missing) os << "missing " << key_string(key) << ": " << m << '\n';
  for (int a = 0; a < 3; ++a) {
    os << "voxel size axis " << a << ": min " << voxel_size[a].min << " median "
       << voxel_size[a].median << " max " << voxel_size[a].max << '\n';
  }
  for (const auto& f : flags) os << "INCONSISTENT " << key_string(f.record) << ": " << f.message << '\n';
  os << (flags.empty() ? "consistent" : "inconsistent") << " (" << flags.size() << " flagged)\n";
  return os.str();
}

std::vector<ScalarRow> scalar_table(const Mirc& mirc, const std::string& modality_id) {
  std::vector<ScalarRow> rows;
  for (const auto& key : mirc.record_keys()) {
    const Record& rec = mirc.record(key);
    if (!rec.has(modality_id)) continue;
    const Sample s = rec[modality_id].load();
    if (s.element_count() != 1) {
      throw ShapeError("modality '" + modality_id + "' of " + key_string(key) +
                       " is not scalar: " + shape_string(s.shape()));
    }
    rows.push_back({key, s.values()[0]});
  }
  return rows;
}

}  // namespace voxflow
