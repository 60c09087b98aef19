// oabridge/harness.cc

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

#include "oabridge/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "oabridge/baseline_se.h"
#include "oabridge/dataset_synth.h"
#include "oabridge/oa_mixer.h"
#include "oabridge/subprocess.h"

namespace oabridge {

namespace fs = std::filesystem;

namespace {

using Json = nlohmann::ordered_json;

constexpr const char *kBuiltinPrefix = "builtin:";
constexpr const char *kCommandPrefix = "cmd:";
constexpr const char *kUnbinned = "unbinned";

std::string SafeName(const std::string &id) {
  std::string s = id;
  for (char &c : s)
    if (c == '/' || c == '\\' || c == '\0') c = '_';
  return s;
}

std::string ReplaceAll(std::string s, const std::string &from, const std::string &to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

std::vector<std::string> Instantiate(const std::string &tmpl, const fs::path &in,
                                     const fs::path *out) {
  std::vector<std::string> argv = SplitCommandLine(tmpl);
  for (auto &a : argv) {
    a = ReplaceAll(a, "{in}", in.string());
    if (out) a = ReplaceAll(a, "{out}", out->string());
  }
  return argv;
}

std::string Diagnostics(const ProcessResult &r) {
  std::string d = r.stderr_text;
  if (!r.stdout_text.empty()) {
    if (!d.empty() && d.back() != '\n') d.push_back('\n');
    d += r.stdout_text;
  }
  return d;
}

void CheckProcess(const ProcessResult &r, const std::vector<std::string> &argv,
                  std::chrono::milliseconds timeout) {
  if (r.timed_out)
    throw AdapterTimeoutError(
        fmt::format("'{}' timed out after {} ms", argv[0], timeout.count()), Diagnostics(r));
  if (r.exit_status != 0) {
    std::string diag = Diagnostics(r);
    throw AdapterError(fmt::format("'{}' exited with status {}{}{}", argv[0], r.exit_status,
                                   diag.empty() ? "" : ": ", diag),
                       diag);
  }
}

fs::path MakeTempDir() {
  std::string tmpl = (fs::temp_directory_path() / "oabridge-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) throw IoError("cannot create temporary directory");
  return tmpl;
}

void EnsureDir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError(fmt::format("cannot create directory {}", dir.string()));
}

struct BinValues {
  std::vector<double> s, s_prime;
};

}  // namespace

AdapterSpec AdapterSpec::Parse(const std::string &text, AdapterRole role) {
  AdapterSpec spec;
  if (text.rfind(kBuiltinPrefix, 0) == 0) {
    spec.kind = Kind::kBuiltin;
    spec.name_or_template = text.substr(std::string(kBuiltinPrefix).size());
    if (role == AdapterRole::kRecognizer)
      throw InvalidArgumentError("there are no builtin recognizers; use cmd:<template>");
    if (spec.name_or_template != "identity" && spec.name_or_template != "oracle" &&
        spec.name_or_template != "specsub")
      throw InvalidArgumentError(fmt::format("unknown builtin enhancer '{}'", text));
    return spec;
  }
  if (text.rfind(kCommandPrefix, 0) == 0) {
    spec.kind = Kind::kCommand;
    spec.name_or_template = text.substr(std::string(kCommandPrefix).size());
    if (SplitCommandLine(spec.name_or_template).empty())
      throw InvalidArgumentError("empty command template");
    if (spec.name_or_template.find("{in}") == std::string::npos)
      throw InvalidArgumentError(fmt::format("command template lacks {{in}}: {}", text));
    if (role == AdapterRole::kEnhancer &&
        spec.name_or_template.find("{out}") == std::string::npos)
      throw InvalidArgumentError(fmt::format("enhancer template lacks {{out}}: {}", text));
    return spec;
  }
  throw InvalidArgumentError(
      fmt::format("adapter '{}' must start with builtin: or cmd:", text));
}

std::string AdapterSpec::ToString() const {
  return (kind == Kind::kBuiltin ? kBuiltinPrefix : kCommandPrefix) + name_or_template;
}

fs::path RunSe(const AdapterSpec &adapter, const UtteranceRecord &record,
               const fs::path &base_dir, const fs::path &workdir,
               std::chrono::milliseconds timeout) {
  auto resolve = [&](const std::string &p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  const fs::path in = resolve(record.noisy_path);
  const fs::path out = workdir / (SafeName(record.id) + ".enhanced.wav");
  EnsureDir(workdir);

  if (adapter.kind == AdapterSpec::Kind::kBuiltin) {
    const Waveform noisy = ReadWav(in);
    Waveform enhanced;
    if (adapter.name_or_template == "identity") {
      enhanced = SeIdentity(noisy);
    } else if (adapter.name_or_template == "oracle") {
      if (!record.clean_path)
        throw AdapterError(fmt::format("record '{}' has no clean_path for the oracle enhancer",
                                       record.id));
      enhanced = SeOracle(noisy, ReadWav(resolve(*record.clean_path)));
    } else {
      enhanced = SeSpectralSubtraction(noisy);
    }
    WriteWav(enhanced, out, WavEncoding::kFloat32);
    return out;
  }

  const auto argv = Instantiate(adapter.name_or_template, fs::absolute(in), &out);
  const ProcessResult r = RunProcess(argv, timeout);
  CheckProcess(r, argv, timeout);
  try {
    ReadWav(out);
  } catch (const Error &e) {
    throw AdapterError(fmt::format("enhancer output for '{}' is unusable: {}", record.id, e.what()),
                       Diagnostics(r));
  }
  return out;
}

std::string RunAsr(const AdapterSpec &adapter, const fs::path &wav_path,
                   std::chrono::milliseconds timeout, std::vector<std::string> *warnings) {
  if (adapter.kind != AdapterSpec::Kind::kCommand)
    throw InvalidArgumentError("recognizers must be cmd: adapters");
  const auto argv = Instantiate(adapter.name_or_template, wav_path, nullptr);
  const ProcessResult r = RunProcess(argv, timeout);
  CheckProcess(r, argv, timeout);
  std::string text = r.stdout_text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  if (text.empty() && warnings)
    warnings->push_back(fmt::format("recognizer printed nothing for {}", wav_path.filename().string()));
  return text;
}

EvalReport BuildReport(std::vector<RecordOutcome> outcomes, bool with_wer) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const RecordOutcome &a, const RecordOutcome &b) { return a.id < b.id; });
  EvalReport report;
  report.num_records = static_cast<int>(outcomes.size());

  std::map<double, BinValues> binned;
  BinValues unbinned;
  std::map<double, WerResult> wer_binned;
  WerResult wer_unbinned, wer_all;
  bool any_unbinned_wer = false;

  for (const auto &o : outcomes) {
    for (const auto &w : o.warnings) report.warnings.push_back(fmt::format("{}: {}", o.id, w));
    if (!o.ok) {
      ++report.num_failed;
      report.warnings.push_back(fmt::format("{}: failed: {}", o.id, o.error));
      continue;
    }
    BinValues &bin = o.snr_db ? binned[*o.snr_db] : unbinned;
    bin.s.push_back(o.s);
    bin.s_prime.push_back(o.s_prime);
    if (o.wer) {
      (o.snr_db ? wer_binned[*o.snr_db] : wer_unbinned) += *o.wer;
      if (!o.snr_db) any_unbinned_wer = true;
      wer_all += *o.wer;
    }
  }

  auto stats = [](const std::string &key, const BinValues &v) {
    SnrBinStats s;
    s.key = key;
    s.count = static_cast<int>(v.s.size());
    double sum = 0.0, sum_p = 0.0, var = 0.0;
    for (double x : v.s) sum += x;
    for (double x : v.s_prime) sum_p += x;
    s.mean_s = sum / s.count;
    for (double x : v.s) var += (x - s.mean_s) * (x - s.mean_s);
    s.std_s = std::sqrt(var / s.count);
    s.mean_s_prime = sum_p / s.count;
    return s;
  };
  for (const auto &[snr, m] : binned) report.per_snr.push_back(stats(FormatSnr(snr), m));
  if (!unbinned.s.empty()) report.per_snr.push_back(stats(kUnbinned, unbinned));

  if (with_wer) {
    std::vector<std::pair<std::string, WerResult>> wer;
    for (const auto &[snr, w] : wer_binned) wer.emplace_back(FormatSnr(snr), w);
    if (any_unbinned_wer) wer.emplace_back(kUnbinned, wer_unbinned);
    wer.emplace_back("all", wer_all);
    report.wer = std::move(wer);
  }
  report.records = std::move(outcomes);
  return report;
}

std::string ReportToJson(const EvalReport &report) {
  Json j;
  j["format_version"] = 1;
  j["records"] = report.num_records;
  j["processed"] = report.num_records - report.num_failed;
  j["failed"] = report.num_failed;
  Json bins = Json::object();
  for (const auto &b : report.per_snr) {
    bins[b.key] = {{"count", b.count},
                   {"mean_S", b.mean_s},
                   {"std_S", b.std_s},
                   {"mean_S_prime", b.mean_s_prime}};
  }
  j["per_snr"] = bins;
  if (report.wer) {
    Json w = Json::object();
    for (const auto &[cond, r] : *report.wer) {
      w[cond] = {{"wer", r.wer},
                 {"substitutions", r.substitutions},
                 {"deletions", r.deletions},
                 {"insertions", r.insertions},
                 {"ref_words", r.ref_words}};
    }
    j["wer"] = w;
  } else {
    j["wer"] = nullptr;
  }
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

EvalReport ReportFromJson(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ReportSchemaError(fmt::format("report is not valid JSON: {}", e.what()));
  }
  auto need = [](const Json &obj, const char *key, bool (Json::*is)() const noexcept) -> const Json & {
    if (!obj.is_object() || !obj.contains(key) || !(obj.at(key).*is)())
      throw ReportSchemaError(fmt::format("report field '{}' missing or mistyped", key));
    return obj.at(key);
  };
  if (need(j, "format_version", &Json::is_number_integer).get<int>() != 1)
    throw ReportSchemaError("unsupported report format_version");
  EvalReport r;
  r.num_records = need(j, "records", &Json::is_number_integer).get<int>();
  r.num_failed = need(j, "failed", &Json::is_number_integer).get<int>();
  const int processed = need(j, "processed", &Json::is_number_integer).get<int>();
  if (processed + r.num_failed != r.num_records)
    throw ReportSchemaError("processed + failed != records");

  int total = 0;
  for (const auto &[key, b] : need(j, "per_snr", &Json::is_object).items()) {
    SnrBinStats s;
    s.key = key;
    s.count = need(b, "count", &Json::is_number_integer).get<int>();
    s.mean_s = need(b, "mean_S", &Json::is_number).get<double>();
    s.std_s = need(b, "std_S", &Json::is_number).get<double>();
    s.mean_s_prime = need(b, "mean_S_prime", &Json::is_number).get<double>();
    if (s.count <= 0 || s.std_s < 0.0) throw ReportSchemaError("bad bin statistics for " + key);
    total += s.count;
    r.per_snr.push_back(s);
  }
  if (total != processed) throw ReportSchemaError("bin counts do not sum to processed records");

  if (!j.contains("wer")) throw ReportSchemaError("report field 'wer' missing");
  if (!j["wer"].is_null()) {
    std::vector<std::pair<std::string, WerResult>> wer;
    for (const auto &[key, w] : need(j, "wer", &Json::is_object).items()) {
      WerResult x;
      x.wer = need(w, "wer", &Json::is_number).get<double>();
      x.substitutions = need(w, "substitutions", &Json::is_number_integer).get<int>();
      x.deletions = need(w, "deletions", &Json::is_number_integer).get<int>();
      x.insertions = need(w, "insertions", &Json::is_number_integer).get<int>();
      x.ref_words = need(w, "ref_words", &Json::is_number_integer).get<int>();
      if (x.wer < 0.0) throw ReportSchemaError("negative WER");
      wer.emplace_back(key, x);
    }
    r.wer = std::move(wer);
  }
  for (const auto &w : need(j, "warnings", &Json::is_array)) {
    if (!w.is_string()) throw ReportSchemaError("warnings must be strings");
    r.warnings.push_back(w.get<std::string>());
  }
  return r;
}

EvalReport Evaluate(const fs::path &manifest_path, const BridgeModel &model,
                    const AdapterSpec &se, const std::optional<AdapterSpec> &asr,
                    const fs::path &report_path, const EvalOptions &opts) {
  model.Validate();
  const Manifest manifest = ReadManifest(manifest_path);
  fs::path workdir = opts.workdir;
  if (workdir.empty())
    workdir = report_path.empty() ? MakeTempDir() : fs::path(report_path.string() + ".work");
  EnsureDir(workdir);

  const std::size_t n = manifest.records.size();
  std::vector<RecordOutcome> outcomes(n);

  auto process = [&](std::size_t i) {
    const UtteranceRecord &rec = manifest.records[i];
    RecordOutcome &o = outcomes[i];
    o.id = rec.id;
    o.snr_db = rec.snr_db;
    try {
      const fs::path enhanced_path = RunSe(se, rec, manifest.base_dir, workdir, opts.timeout);
      const Waveform noisy = ReadWav(manifest.Resolve(rec.noisy_path));
      const Waveform enhanced = ReadWav(enhanced_path);
      bool silent = false;
      const Prediction p = EstimateCoefficient(model, noisy, enhanced, &silent);
      if (silent) o.warnings.push_back("no frame with usable energy; features set to zero");
      o.s = p.s;
      o.s_prime = p.s_prime;
      const Waveform mixed = OaMix(noisy, enhanced, p.s_prime);
      const fs::path mixed_path = workdir / (SafeName(rec.id) + ".oa.wav");
      WriteWav(mixed, mixed_path, WavEncoding::kFloat32);

      if (asr) {
        const std::string hyp = RunAsr(*asr, fs::absolute(mixed_path), opts.timeout, &o.warnings);
        if (!rec.transcript) {
          o.warnings.push_back("no transcript; WER not scored");
        } else {
          const auto ref = NormalizeText(*rec.transcript);
          if (ref.empty())
            o.warnings.push_back("transcript normalises to nothing; WER not scored");
          else
            o.wer = ComputeWer(ref, NormalizeText(hyp));
        }
      }
      o.ok = true;
    } catch (const std::exception &e) {
      o.ok = false;
      o.error = e.what();
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) process(i);
      });
    }
    for (auto &t : pool) t.join();
  }

  EvalReport report = BuildReport(std::move(outcomes), asr.has_value());

  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write report {}", report_path.string()));
    out << ReportToJson(report);
  }
  if (opts.dump_path) {
    std::ofstream out(*opts.dump_path, std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", opts.dump_path->string()));
    for (const auto &o : report.records) {
      if (!o.ok) continue;
      Json j;
      j["id"] = o.id;
      j["snr_db"] = o.snr_db ? Json(*o.snr_db) : Json(nullptr);
      j["S"] = o.s;
      j["S_prime"] = o.s_prime;
      if (o.wer) j["wer"] = o.wer->wer;
      out << j.dump() << '\n';
    }
  }
  return report;
}

TrainResult TrainFromManifest(const fs::path &manifest_path, const AdapterSpec &se,
                              const TrainConfig &cfg, const fs::path &workdir,
                              const FeatureConfig &feature_cfg, const StftConfig &stft_cfg) {
  const Manifest manifest = ReadManifest(manifest_path);
  if (manifest.records.empty()) throw EmptyInputError("training manifest has no records");
  std::vector<TrainItem> items;
  for (const auto &rec : manifest.records) {
    TrainItem item;
    item.label = TrainingLabel(rec);
    item.noisy_path = manifest.Resolve(rec.noisy_path);
    item.enhanced_path = RunSe(se, rec, manifest.base_dir, workdir);
    items.push_back(std::move(item));
  }
  return Train(items, cfg, feature_cfg, stft_cfg);
}

ProcessOutcome ProcessFile(const BridgeModel &model, const AdapterSpec &se,
                           const fs::path &in_path, const fs::path &out_path,
                           WavEncoding encoding, const fs::path &workdir,
                           std::chrono::milliseconds timeout) {
  model.Validate();
  UtteranceRecord rec;
  rec.id = in_path.stem().string();
  rec.noisy_path = fs::absolute(in_path).string();
  const fs::path dir = workdir.empty() ? MakeTempDir() : workdir;
  const fs::path enhanced_path = RunSe(se, rec, fs::path(), dir, timeout);

  const Waveform noisy = ReadWav(in_path);
  const Waveform enhanced = ReadWav(enhanced_path);
  ProcessOutcome out;
  out.prediction = EstimateCoefficient(model, noisy, enhanced, &out.silent);
  WriteWav(OaMix(noisy, enhanced, out.prediction.s_prime), out_path, encoding);
  if (workdir.empty()) fs::remove_all(dir);
  return out;
}

}  // namespace oabridge
