// oabridge/manifest.h

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

#ifndef OABRIDGE_MANIFEST_H_
#define OABRIDGE_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oabridge {

/// One row of a JSON-lines manifest. Paths are stored as written; use
/// Manifest::Resolve to anchor relative ones at the manifest's directory.
///
/// For training manifests the label is implied by which source is present:
/// a row with clean_path and no noise_path is pure speech (label 1), a row
/// with noise_path and no clean_path is pure noise (label 0).
struct UtteranceRecord {
  std::string id;
  std::optional<std::string> clean_path;
  std::optional<std::string> noise_path;
  std::string noisy_path;
  std::optional<std::string> enhanced_path;
  std::optional<double> snr_db;
  std::optional<std::string> transcript;

  bool operator==(const UtteranceRecord &) const = default;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<UtteranceRecord> records;

  std::filesystem::path Resolve(const std::string &p) const;
};

/// Parses one record per nonblank line. Throws ManifestError on malformed
/// JSON, missing id/noisy_path, wrong field types or duplicate ids.
Manifest ReadManifest(const std::filesystem::path &path);

/// Writes records in the given order, one compact JSON object per line,
/// omitting absent optional fields. Throws IoError.
void WriteManifest(const std::vector<UtteranceRecord> &records,
                   const std::filesystem::path &path);

std::string RecordToJson(const UtteranceRecord &r);
UtteranceRecord RecordFromJson(const std::string &line);

/// Training label for a pure-speech (1) or pure-noise (0) row; ManifestError
/// for mixed or sourceless rows.
double TrainingLabel(const UtteranceRecord &r);

}  // namespace oabridge

#endif  // OABRIDGE_MANIFEST_H_
