// oabridge/dataset_synth.cc

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

#include "oabridge/dataset_synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "oabridge/random.h"

namespace oabridge {

namespace fs = std::filesystem;

namespace {

std::size_t SampleCount(double duration_s) {
  if (!(duration_s > 0.0))
    throw InvalidArgumentError(fmt::format("duration must be positive, got {}", duration_s));
  return static_cast<std::size_t>(std::llround(duration_s * kSampleRateHz));
}

void NormalizePeak(std::vector<double> *x, double peak) {
  double m = 0.0;
  for (double v : *x) m = std::max(m, std::abs(v));
  if (m == 0.0) return;
  const double g = peak / m;
  for (double &v : *x) v *= g;
}

std::string RelativeTo(const fs::path &p, const fs::path &base) {
  return fs::proximate(fs::absolute(p), fs::absolute(base)).generic_string();
}

}  // namespace

double Rms(const Waveform &wave) {
  if (wave.empty()) throw EmptyInputError("rms of an empty waveform");
  double acc = 0.0;
  for (double v : wave.samples) acc += v * v;
  return std::sqrt(acc / static_cast<double>(wave.size()));
}

double MeasureSnrDb(const Waveform &clean, const Waveform &noise) {
  return 20.0 * std::log10(Rms(clean) / Rms(noise));
}

NoisyMix MixAtSnr(const Waveform &clean, const Waveform &noise, double snr_db) {
  CheckPipelineRate(clean);
  CheckPipelineRate(noise);
  if (noise.size() < clean.size())
    throw LengthMismatchError(fmt::format("noise has {} samples, clean needs {}",
                                          noise.size(), clean.size()));
  const double clean_rms = Rms(clean);
  Waveform truncated;
  truncated.samples.assign(noise.samples.begin(),
                           noise.samples.begin() + static_cast<std::ptrdiff_t>(clean.size()));
  const double noise_rms = Rms(truncated);
  if (clean_rms == 0.0) throw EmptyInputError("clean signal is silent");
  if (noise_rms == 0.0) throw EmptyInputError("noise signal is silent");

  NoisyMix mix;
  mix.noise_gain = clean_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
  mix.noisy.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i)
    mix.noisy.samples[i] = clean.samples[i] + mix.noise_gain * truncated.samples[i];
  return mix;
}

Waveform GenPseudoSpeech(double duration_s, std::uint64_t seed) {
  const std::size_t n = SampleCount(duration_s);
  Rng rng(seed);
  const double f0 = rng.Uniform(90.0, 250.0);
  const int harmonics = 3 + static_cast<int>(rng.Below(3));
  const double rate = rng.Uniform(2.0, 6.0);
  std::vector<double> amp(harmonics), phase(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    amp[h] = rng.Uniform(0.3, 1.0) / (h + 1);
    phase[h] = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  }

  Waveform w;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRateHz;
    double v = 0.0;
    for (int h = 0; h < harmonics; ++h)
      v += amp[h] * std::sin(2.0 * std::numbers::pi * f0 * (h + 1) * t + phase[h]);
    const double envelope = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * rate * t));
    w.samples[i] = v * envelope;
  }
  NormalizePeak(&w.samples, 0.5);
  return w;
}

Waveform GenNoise(double duration_s, NoiseKind kind, std::uint64_t seed) {
  const std::size_t n = SampleCount(duration_s);
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  double state = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double white = rng.Uniform(-1.0, 1.0);
    if (kind == NoiseKind::kWhite) {
      w.samples[i] = white;
    } else {
      state = 0.98 * state + white;
      w.samples[i] = state;
    }
  }
  NormalizePeak(&w.samples, 0.5);
  return w;
}

std::string FormatSnr(double snr_db) {
  if (snr_db == 0.0) return "0";
  return fmt::format("{}", snr_db);
}

std::vector<fs::path> ListWavFiles(const fs::path &dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw IoError(fmt::format("cannot list {}: {}", dir.string(), ec.message()));
  for (const auto &entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

fs::path SynthDataset(const fs::path &clean_dir, const fs::path &noise_dir,
                      const std::vector<double> &snrs_db, std::uint64_t seed,
                      const fs::path &out_dir, const SynthOptions &opts) {
  const auto clean_files = ListWavFiles(clean_dir);
  const auto noise_files = ListWavFiles(noise_dir);
  if (clean_files.empty())
    throw EmptyInputError(fmt::format("no .wav files in {}", clean_dir.string()));
  if (noise_files.empty())
    throw EmptyInputError(fmt::format("no .wav files in {}", noise_dir.string()));
  if (snrs_db.empty()) throw InvalidArgumentError("no SNR levels given");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw IoError(fmt::format("cannot create {}", out_dir.string()));

  std::map<std::size_t, Waveform> noise_cache;
  Rng rng(seed);
  std::vector<UtteranceRecord> records;
  records.reserve(clean_files.size() * snrs_db.size());

  for (const auto &clean_path : clean_files) {
    const Waveform clean = ReadWav(clean_path);
    std::optional<std::string> transcript;
    fs::path txt = clean_path;
    txt.replace_extension(".txt");
    if (fs::is_regular_file(txt)) {
      std::ifstream in(txt);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string text = ss.str();
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.pop_back();
      transcript = text;
    }

    for (double snr : snrs_db) {
      const std::size_t k = static_cast<std::size_t>(rng.Below(noise_files.size()));
      auto it = noise_cache.find(k);
      if (it == noise_cache.end()) it = noise_cache.emplace(k, ReadWav(noise_files[k])).first;

      NoisyMix mix = MixAtSnr(clean, it->second, snr);
      double peak = 0.0;
      for (double v : mix.noisy.samples) peak = std::max(peak, std::abs(v));
      if (peak > opts.max_peak)
        for (double &v : mix.noisy.samples) v *= opts.max_peak / peak;

      UtteranceRecord r;
      r.id = clean_path.stem().string() + "_snr" + FormatSnr(snr);
      r.clean_path = RelativeTo(clean_path, out_dir);
      r.noise_path = RelativeTo(noise_files[k], out_dir);
      r.noisy_path = r.id + ".wav";
      r.snr_db = snr;
      r.transcript = transcript;
      WriteWav(mix.noisy, out_dir / r.noisy_path, WavEncoding::kFloat32);
      records.push_back(std::move(r));
    }
  }

  const fs::path manifest = out_dir / opts.manifest_name;
  WriteManifest(records, manifest);
  return manifest;
}

fs::path WriteTrainingManifest(const fs::path &clean_dir, const fs::path &noise_dir,
                               const fs::path &manifest_path) {
  const auto clean_files = ListWavFiles(clean_dir);
  const auto noise_files = ListWavFiles(noise_dir);
  if (clean_files.empty())
    throw EmptyInputError(fmt::format("no .wav files in {}", clean_dir.string()));
  if (noise_files.empty())
    throw EmptyInputError(fmt::format("no .wav files in {}", noise_dir.string()));
  const fs::path base =
      manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path(".");
  std::vector<UtteranceRecord> records;
  for (const auto &p : clean_files) {
    UtteranceRecord r;
    r.id = "speech_" + p.stem().string();
    r.clean_path = RelativeTo(p, base);
    r.noisy_path = *r.clean_path;
    records.push_back(std::move(r));
  }
  for (const auto &p : noise_files) {
    UtteranceRecord r;
    r.id = "noise_" + p.stem().string();
    r.noise_path = RelativeTo(p, base);
    r.noisy_path = *r.noise_path;
    records.push_back(std::move(r));
  }
  WriteManifest(records, manifest_path);
  return manifest_path;
}

}  // namespace oabridge
