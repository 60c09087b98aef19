// oabridge/cli.cc

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

#include "oabridge/cli.h"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "oabridge/bridge.h"
#include "oabridge/dataset_synth.h"
#include "oabridge/harness.h"
#include "oabridge/wer.h"

namespace oabridge {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Usage problems detected after CLI11 has parsed the flags.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> ParseCsv(const std::string &csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw UsageError(fmt::format("'{}' is not a number in --snrs", item));
    }
  }
  if (out.empty()) throw UsageError("--snrs is empty");
  return out;
}

AdapterSpec ParseAdapterFlag(const std::string &text, AdapterRole role) {
  try {
    return AdapterSpec::Parse(text, role);
  } catch (const InvalidArgumentError &e) {
    throw UsageError(e.what());
  }
}

WavEncoding ParseEncoding(const std::string &s) {
  if (s == "pcm16") return WavEncoding::kPcm16;
  if (s == "float32") return WavEncoding::kFloat32;
  throw UsageError(fmt::format("unknown encoding '{}'", s));
}

// id<TAB>text per line; a line without a tab is an id with empty text.
std::map<std::string, std::string> ReadTranscripts(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::string text = tab == std::string::npos ? "" : line.substr(tab + 1);
    out[id] = text;
  }
  return out;
}

}  // namespace

int RunCli(int argc, char **argv) {
  CLI::App app{"Observation-adding bridge between speech enhancement and recognition"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // synth
  std::string clean_dir, noise_dir, snrs_csv, out_dir;
  std::uint64_t seed = 0;
  auto *synth = app.add_subcommand("synth", "Mix clean and noise files at fixed SNRs into a manifest");
  synth->add_option("--clean-dir", clean_dir, "Directory of clean 16 kHz mono .wav files")->required();
  synth->add_option("--noise-dir", noise_dir, "Directory of noise .wav files")->required();
  synth->add_option("--snrs", snrs_csv, "Comma-separated SNRs in dB, e.g. -6,6")->required();
  synth->add_option("--seed", seed, "Seed for the noise draw")->capture_default_str();
  synth->add_option("--out-dir", out_dir, "Output directory for mixes and manifest.jsonl")->required();

  // trainset
  std::string manifest_out;
  auto *trainset = app.add_subcommand(
      "trainset", "Write a training manifest: clean files labelled 1, noise files labelled 0");
  trainset->add_option("--clean-dir", clean_dir, "Directory of pure speech .wav files")->required();
  trainset->add_option("--noise-dir", noise_dir, "Directory of pure noise .wav files")->required();
  trainset->add_option("--out", manifest_out, "Manifest to write")->required();

  // gen
  std::string kind, out_file, encoding = "pcm16";
  double duration = 0.0;
  auto *gen = app.add_subcommand("gen", "Generate seeded pseudo-speech or noise");
  gen->add_option("--kind", kind, "speech, white or pink")
      ->required()
      ->check(CLI::IsMember({"speech", "white", "pink"}));
  gen->add_option("--duration", duration, "Length in seconds")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", out_file, "Output .wav")->required();
  gen->add_option("--encoding", encoding, "pcm16 or float32")->capture_default_str();

  // train
  std::string manifest, se_text, model_path, workdir;
  TrainConfig tcfg;
  bool raw_features = false;
  auto *train = app.add_subcommand("train", "Train the bridge on pure-speech/pure-noise rows");
  train->add_option("--manifest", manifest, "Training manifest")->required();
  train->add_option("--se", se_text, "Enhancer: builtin:identity|oracle|specsub or cmd:<template>")->required();
  train->add_option("--out", model_path, "Model file to write")->required();
  train->add_option("--lr", tcfg.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--momentum", tcfg.momentum, "SGD momentum")->capture_default_str();
  train->add_option("--batch", tcfg.batch_size, "Batch size")->capture_default_str();
  train->add_option("--epochs", tcfg.epochs, "Epochs")->capture_default_str();
  train->add_option("--seed", tcfg.seed, "Shuffle and crop seed")->capture_default_str();
  train->add_option("--crop", tcfg.crop_len_samples, "Crop length in samples")->capture_default_str();
  train->add_flag("--raw-features", raw_features,
                  "Run the updates on unstandardised pooled features");
  train->add_option("--workdir", workdir, "Where enhanced training audio goes (default <out>.work)");

  // predict
  std::string noisy_file, enhanced_file;
  auto *predict = app.add_subcommand("predict", "Print S and S' for a noisy/enhanced pair");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--noisy", noisy_file, "Noisy .wav")->required();
  predict->add_option("--enhanced", enhanced_file, "Enhanced .wav")->required();

  // process
  std::string in_file;
  auto *process = app.add_subcommand("process", "Enhance, estimate S', mix and write one file");
  process->add_option("--model", model_path, "Model file")->required();
  process->add_option("--se", se_text, "Enhancer adapter")->required();
  process->add_option("--in", in_file, "Noisy input .wav")->required();
  process->add_option("--out", out_file, "Mixed output .wav")->required();
  process->add_option("--encoding", encoding, "pcm16 or float32")->capture_default_str();
  process->add_option("--workdir", workdir, "Keep intermediate audio here");

  // eval
  std::string asr_text, report_path, dump_path;
  int jobs = 1;
  int timeout_s = 300;
  auto *eval = app.add_subcommand("eval", "Run the pipeline over a manifest and write a report");
  eval->add_option("--model", model_path, "Model file")->required();
  eval->add_option("--manifest", manifest, "Evaluation manifest")->required();
  eval->add_option("--se", se_text, "Enhancer adapter")->required();
  eval->add_option("--asr", asr_text, "Recognizer adapter, cmd:<template> with {in}");
  eval->add_option("--report", report_path, "Report file (JSON)")->required();
  eval->add_option("--jobs", jobs, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--dump", dump_path, "Per-record JSON-lines dump");
  eval->add_option("--workdir", workdir, "Derived audio directory (default <report>.work)");
  eval->add_option("--timeout", timeout_s, "Adapter timeout in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  // wer
  std::string ref_file, hyp_file;
  auto *wer = app.add_subcommand("wer", "Score hypotheses against references (id<TAB>text lines)");
  wer->add_option("--ref", ref_file, "Reference transcripts")->required();
  wer->add_option("--hyp", hyp_file, "Hypothesis transcripts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      const auto snrs = ParseCsv(snrs_csv);
      std::cout << SynthDataset(clean_dir, noise_dir, snrs, seed, out_dir).string() << '\n';
    } else if (trainset->parsed()) {
      std::cout << WriteTrainingManifest(clean_dir, noise_dir, manifest_out).string() << '\n';
    } else if (gen->parsed()) {
      const WavEncoding enc = ParseEncoding(encoding);
      Waveform w = kind == "speech" ? GenPseudoSpeech(duration, seed)
                   : kind == "white" ? GenNoise(duration, NoiseKind::kWhite, seed)
                                     : GenNoise(duration, NoiseKind::kPinkApprox, seed);
      WriteWav(w, out_file, enc);
    } else if (train->parsed()) {
      const AdapterSpec se = ParseAdapterFlag(se_text, AdapterRole::kEnhancer);
      tcfg.standardize_features = !raw_features;
      const fs::path work = workdir.empty() ? fs::path(model_path + ".work") : fs::path(workdir);
      const TrainResult result = TrainFromManifest(manifest, se, tcfg, work);
      for (const auto &w : result.warnings) std::cerr << "warning: " << w << '\n';
      SaveModel(result.model, model_path);
      std::cout << fmt::format("final_mse {}\n", result.epoch_mse.back());
    } else if (predict->parsed()) {
      const BridgeModel model = LoadModel(model_path);
      bool silent = false;
      const Prediction p =
          EstimateCoefficient(model, ReadWav(noisy_file), ReadWav(enhanced_file), &silent);
      if (silent) std::cerr << "warning: silent input, features set to zero\n";
      std::cout << fmt::format("{} {}\n", p.s, p.s_prime);
    } else if (process->parsed()) {
      const AdapterSpec se = ParseAdapterFlag(se_text, AdapterRole::kEnhancer);
      const WavEncoding enc = ParseEncoding(encoding);
      const BridgeModel model = LoadModel(model_path);
      const ProcessOutcome o = ProcessFile(model, se, in_file, out_file, enc, workdir);
      if (o.silent) std::cerr << "warning: silent input, features set to zero\n";
      std::cout << fmt::format("{} {}\n", o.prediction.s, o.prediction.s_prime);
    } else if (eval->parsed()) {
      const AdapterSpec se = ParseAdapterFlag(se_text, AdapterRole::kEnhancer);
      std::optional<AdapterSpec> asr;
      if (!asr_text.empty()) asr = ParseAdapterFlag(asr_text, AdapterRole::kRecognizer);
      const BridgeModel model = LoadModel(model_path);
      EvalOptions opts;
      opts.jobs = jobs;
      opts.workdir = workdir;
      opts.timeout = std::chrono::seconds(timeout_s);
      if (!dump_path.empty()) opts.dump_path = dump_path;
      const EvalReport report = Evaluate(manifest, model, se, asr, report_path, opts);
      for (const auto &b : report.per_snr)
        std::cout << fmt::format("{}\tcount={}\tmean_S={:.6f}\tstd_S={:.6f}\tmean_S_prime={:.6f}\n",
                                 b.key, b.count, b.mean_s, b.std_s, b.mean_s_prime);
      if (report.num_failed > 0)
        std::cerr << fmt::format("warning: {} of {} records failed\n", report.num_failed,
                                 report.num_records);
    } else if (wer->parsed()) {
      const auto refs = ReadTranscripts(ref_file);
      const auto hyps = ReadTranscripts(hyp_file);
      WerResult total;
      for (const auto &[id, text] : refs) {
        auto it = hyps.find(id);
        if (it == hyps.end()) std::cerr << "warning: no hypothesis for " << id << '\n';
        const auto ref = NormalizeText(text);
        if (ref.empty()) {
          std::cerr << "warning: empty reference for " << id << ", skipped\n";
          continue;
        }
        total += ComputeWer(ref, NormalizeText(it == hyps.end() ? "" : it->second));
      }
      for (const auto &[id, text] : hyps)
        if (!refs.count(id)) std::cerr << "warning: hypothesis " << id << " has no reference\n";
      if (total.ref_words == 0) throw InvalidArgumentError("no scorable reference words");
      std::cout << fmt::format("{:.4f} S={} D={} I={} N={}\n", total.wer, total.substitutions,
                               total.deletions, total.insertions, total.ref_words);
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace oabridge
