// oabridge/harness.h

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

#ifndef OABRIDGE_HARNESS_H_
#define OABRIDGE_HARNESS_H_

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oabridge/bridge.h"
#include "oabridge/manifest.h"
#include "oabridge/wer.h"

namespace oabridge {

enum class AdapterRole { kEnhancer, kRecognizer };

/// Parsed ADAPTER argument: `builtin:identity`, `builtin:oracle`,
/// `builtin:specsub` or `cmd:<argv template>`. Enhancer templates need both
/// {in} and {out}; recognizer templates need {in} and write the hypothesis
/// to standard output.
struct AdapterSpec {
  enum class Kind { kBuiltin, kCommand };
  Kind kind = Kind::kBuiltin;
  std::string name_or_template;

  /// Throws InvalidArgumentError for unknown builtins, missing placeholders,
  /// builtin recognizers or empty templates.
  static AdapterSpec Parse(const std::string &text, AdapterRole role);
  std::string ToString() const;
};

inline constexpr std::chrono::seconds kDefaultAdapterTimeout{300};

/// Enhances the record's noisy file into `workdir` and returns the path of
/// the enhanced WAV. Relative record paths resolve against `base_dir`.
/// Throws AdapterError (or AdapterTimeoutError) for failing commands and
/// undecodable outputs; oracle without clean_path is an AdapterError too.
std::filesystem::path RunSe(const AdapterSpec &adapter, const UtteranceRecord &record,
                            const std::filesystem::path &base_dir,
                            const std::filesystem::path &workdir,
                            std::chrono::milliseconds timeout = kDefaultAdapterTimeout);

/// Hypothesis transcript from the recognizer's standard output with trailing
/// whitespace removed. Empty output is returned as "" and noted in
/// `warnings`.
std::string RunAsr(const AdapterSpec &adapter, const std::filesystem::path &wav_path,
                   std::chrono::milliseconds timeout = kDefaultAdapterTimeout,
                   std::vector<std::string> *warnings = nullptr);

struct SnrBinStats {
  std::string key;  // FormatSnr(snr) or "unbinned"
  int count = 0;
  double mean_s = 0.0;
  double std_s = 0.0;  // population
  double mean_s_prime = 0.0;
};

struct RecordOutcome {
  std::string id;
  std::optional<double> snr_db;
  bool ok = false;
  double s = 0.0;
  double s_prime = 0.0;
  std::optional<WerResult> wer;
  std::vector<std::string> warnings;
  std::string error;
};

struct EvalReport {
  int num_records = 0;
  int num_failed = 0;
  /// Ascending SNR, "unbinned" last.
  std::vector<SnrBinStats> per_snr;
  /// Present when a recognizer ran. One entry per SNR bin plus "all".
  std::optional<std::vector<std::pair<std::string, WerResult>>> wer;
  std::vector<std::string> warnings;
  /// Sorted by id; not serialised into the report itself.
  std::vector<RecordOutcome> records;
};

struct EvalOptions {
  int jobs = 1;
  /// Derived audio (enhanced and mixed) lands here. Defaults to
  /// `<report>.work`.
  std::filesystem::path workdir;
  std::optional<std::filesystem::path> dump_path;
  std::chrono::milliseconds timeout = kDefaultAdapterTimeout;
};

/// Runs SE, the bridge, OA mixing and optionally ASR + WER on every record.
/// A failing record is tallied and the run goes on. The report is written to
/// `report_path` when it is nonempty.
EvalReport Evaluate(const std::filesystem::path &manifest_path, const BridgeModel &model,
                    const AdapterSpec &se, const std::optional<AdapterSpec> &asr,
                    const std::filesystem::path &report_path, const EvalOptions &opts = {});

/// Aggregates outcomes (any order) into a report.
EvalReport BuildReport(std::vector<RecordOutcome> outcomes, bool with_wer);

std::string ReportToJson(const EvalReport &report);
/// Parses and schema-checks a report; throws ReportSchemaError on violations.
EvalReport ReportFromJson(const std::string &text);

/// Pairs every training row of the manifest (see TrainingLabel) with its
/// enhanced version in `workdir` and trains the bridge.
TrainResult TrainFromManifest(const std::filesystem::path &manifest_path,
                              const AdapterSpec &se, const TrainConfig &cfg,
                              const std::filesystem::path &workdir,
                              const FeatureConfig &feature_cfg = {},
                              const StftConfig &stft_cfg = {});

struct ProcessOutcome {
  Prediction prediction;
  bool silent = false;
};

/// The whole chain on a single file: enhance, estimate S', mix, write.
ProcessOutcome ProcessFile(const BridgeModel &model, const AdapterSpec &se,
                           const std::filesystem::path &in_path,
                           const std::filesystem::path &out_path, WavEncoding encoding,
                           const std::filesystem::path &workdir,
                           std::chrono::milliseconds timeout = kDefaultAdapterTimeout);

}  // namespace oabridge

#endif  // OABRIDGE_HARNESS_H_
