// oabridge/dataset_synth.h

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

#ifndef OABRIDGE_DATASET_SYNTH_H_
#define OABRIDGE_DATASET_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oabridge/audio_io.h"
#include "oabridge/manifest.h"

namespace oabridge {

/// sqrt(mean(x^2)). Throws EmptyInputError on an empty waveform.
double Rms(const Waveform &wave);

struct NoisyMix {
  Waveform noisy;
  double noise_gain = 0.0;
};

/// Adds `noise`, truncated from offset 0 to the clean length and scaled so
/// that 20 log10(rms(clean) / rms(gain * noise)) == snr_db over the whole
/// signal.
///
/// Throws EmptyInputError for silent inputs and LengthMismatchError when the
/// noise is shorter than the clean signal.
NoisyMix MixAtSnr(const Waveform &clean, const Waveform &noise, double snr_db);

/// Measured full-signal SNR in dB of `clean` against `noise`.
double MeasureSnrDb(const Waveform &clean, const Waveform &noise);

enum class NoiseKind { kWhite, kPinkApprox };

/// Deterministic harmonic stand-in for speech: 3-5 harmonics of a fundamental
/// in [90, 250] Hz, amplitude-modulated at a 2-6 Hz syllabic rate, peak 0.5.
Waveform GenPseudoSpeech(double duration_s, std::uint64_t seed);

/// Stationary seeded noise with peak 0.5. The pink approximation runs white
/// noise through y[n] = 0.98 y[n-1] + w[n].
Waveform GenNoise(double duration_s, NoiseKind kind, std::uint64_t seed);

struct SynthOptions {
  /// Mixes whose peak exceeds this are scaled down as a whole (clean and
  /// noise components alike), which leaves the SNR untouched.
  double max_peak = 0.99;
  std::string manifest_name = "manifest.jsonl";
};

/// Mixes every clean file with one seeded-random noise file at every SNR and
/// writes float32 mixes plus a manifest into `out_dir`. Files are visited in
/// sorted filename order and records follow (clean file, snr) order. A
/// `<stem>.txt` next to a clean file becomes the record's transcript.
///
/// Returns the manifest path. Throws EmptyInputError when a directory holds
/// no .wav files, IoError when out_dir is unwritable.
std::filesystem::path SynthDataset(const std::filesystem::path &clean_dir,
                                   const std::filesystem::path &noise_dir,
                                   const std::vector<double> &snrs_db,
                                   std::uint64_t seed,
                                   const std::filesystem::path &out_dir,
                                   const SynthOptions &opts = {});

/// Writes a training manifest listing every clean file as a pure-speech row
/// and every noise file as a pure-noise row. Returns the manifest path.
std::filesystem::path WriteTrainingManifest(
    const std::filesystem::path &clean_dir,
    const std::filesystem::path &noise_dir,
    const std::filesystem::path &manifest_path);

/// Sorted list of the .wav files directly inside `dir`.
std::vector<std::filesystem::path> ListWavFiles(const std::filesystem::path &dir);

/// "-6", "12", "2.5"; used for record ids and report bins.
std::string FormatSnr(double snr_db);

}  // namespace oabridge

#endif  // OABRIDGE_DATASET_SYNTH_H_
