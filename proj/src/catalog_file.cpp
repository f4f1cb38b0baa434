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

#include "voxflow/catalog_file.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace voxflow {

namespace {

std::string require_string(const YAML::Node& node, const char* key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v || !v.IsScalar()) throw FormatError(where + ": '" + key + "' must be a string");
  return v.as<std::string>();
}

YAML::Node require_sequence(const YAML::Node& node, const char* key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v || !v.IsSequence()) throw FormatError(where + ": '" + key + "' must be a list");
  return v;
}

Modality parse_modality(const YAML::Node& node, const std::filesystem::path& base_dir,
                        const std::string& where) {
  const std::string id = require_string(node, "id", where);
  const std::string at = where + "/" + id;
  const std::string kind = require_string(node, "kind", at);
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  if (kind == "volume") {
    return Modality::volume_file(id, resolve(require_string(node, "path", at)));
  }
  if (kind == "image") {
    std::vector<std::filesystem::path> paths;
    if (node["paths"]) {
      for (const auto& p : require_sequence(node, "paths", at)) paths.push_back(resolve(p.as<std::string>()));
    } else {
      paths.push_back(resolve(require_string(node, "path", at)));
    }
    return Modality::image_files(id, std::move(paths));
  }
  if (kind == "scalar") {
    const YAML::Node v = node["value"];
    if (!v || !v.IsScalar()) throw FormatError(at + ": scalar modality needs a numeric 'value'");
    try {
      return Modality::scalar(id, v.as<double>());
    } catch (const YAML::Exception&) {
      throw FormatError(at + ": 'value' is not a number");
    }
  }
  throw FormatError(at + ": unknown modality kind '" + kind + "'");
}

}  // namespace

Mirc parse_catalog(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw FormatError(std::string("catalog is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw FormatError("catalog root must be a mapping");
  const YAML::Node version = root["version"];
  if (!version || version.as<std::string>() != std::to_string(kCatalogFileVersion)) {
    throw FormatError("unsupported catalog version (expected version: 1)");
  }

  Mirc mirc;
  try {
    for (const auto& dn : require_sequence(root, "datasets", "catalog")) {
      Dataset dataset(require_string(dn, "id", "dataset"));
      const std::string dwhere = dataset.id();
      for (const auto& cn : require_sequence(dn, "cases", dwhere)) {
        Case c(require_string(cn, "id", dwhere));
        const std::string cwhere = dwhere + "/" + c.id();
        for (const auto& rn : require_sequence(cn, "records", cwhere)) {
          Record r(require_string(rn, "id", cwhere));
          const std::string rwhere = cwhere + "/" + r.id();
          for (const auto& mn : require_sequence(rn, "modalities", rwhere)) {
            r.add(parse_modality(mn, base_dir, rwhere));
          }
          c.add(std::move(r));
        }
        dataset.add(std::move(c));
      }
      mirc.add(std::move(dataset));
    }
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("catalog: ") + e.what());
  } catch (const YAML::Exception& e) {
    throw FormatError(std::string("catalog: ") + e.what());
  }
  return mirc;
}

Mirc load_catalog_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_catalog(text.str(), path.parent_path());
}

}  // namespace voxflow
