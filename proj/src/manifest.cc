// oabridge/manifest.cc

// Copyright 2026 The oabridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "oabridge/manifest.h"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "oabridge/errors.h"

namespace oabridge {

namespace {

using Json = nlohmann::ordered_json;

std::optional<std::string> OptString(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw ManifestError(fmt::format("field '{}' must be a string", key));
  return it->get<std::string>();
}

}  // namespace

std::filesystem::path Manifest::Resolve(const std::string &p) const {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path;
  return base_dir / path;
}

std::string RecordToJson(const UtteranceRecord &r) {
  Json j;
  j["id"] = r.id;
  if (r.clean_path) j["clean_path"] = *r.clean_path;
  if (r.noise_path) j["noise_path"] = *r.noise_path;
  j["noisy_path"] = r.noisy_path;
  if (r.enhanced_path) j["enhanced_path"] = *r.enhanced_path;
  if (r.snr_db) j["snr_db"] = *r.snr_db;
  if (r.transcript) j["transcript"] = *r.transcript;
  return j.dump();
}

UtteranceRecord RecordFromJson(const std::string &line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error &e) {
    throw ManifestError(fmt::format("malformed manifest line: {}", e.what()));
  }
  if (!j.is_object()) throw ManifestError("manifest line is not a JSON object");
  UtteranceRecord r;
  auto id = OptString(j, "id");
  auto noisy = OptString(j, "noisy_path");
  if (!id || id->empty()) throw ManifestError("record without id");
  if (!noisy || noisy->empty())
    throw ManifestError(fmt::format("record '{}' without noisy_path", *id));
  r.id = *id;
  r.noisy_path = *noisy;
  r.clean_path = OptString(j, "clean_path");
  r.noise_path = OptString(j, "noise_path");
  r.enhanced_path = OptString(j, "enhanced_path");
  r.transcript = OptString(j, "transcript");
  if (auto it = j.find("snr_db"); it != j.end() && !it->is_null()) {
    if (!it->is_number())
      throw ManifestError(fmt::format("record '{}': snr_db must be a number", r.id));
    r.snr_db = it->get<double>();
  }
  return r;
}

Manifest ReadManifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open manifest {}", path.string()));
  Manifest m;
  m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    UtteranceRecord r;
    try {
      r = RecordFromJson(line);
    } catch (const ManifestError &e) {
      throw ManifestError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
    if (!ids.insert(r.id).second)
      throw ManifestError(fmt::format("{}:{}: duplicate id '{}'", path.string(), line_no, r.id));
    m.records.push_back(std::move(r));
  }
  return m;
}

void WriteManifest(const std::vector<UtteranceRecord> &records,
                   const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write manifest {}", path.string()));
  for (const auto &r : records) out << RecordToJson(r) << '\n';
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

double TrainingLabel(const UtteranceRecord &r) {
  if (r.clean_path && !r.noise_path) return 1.0;
  if (r.noise_path && !r.clean_path) return 0.0;
  throw ManifestError(fmt::format(
      "record '{}' is not a pure-speech or pure-noise training row", r.id));
}

}  // namespace oabridge
