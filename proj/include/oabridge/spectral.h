// oabridge/spectral.h

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

#ifndef OABRIDGE_SPECTRAL_H_
#define OABRIDGE_SPECTRAL_H_

#include <complex>
#include <span>
#include <vector>

#include "oabridge/audio_io.h"

namespace oabridge {

struct StftConfig {
  int window_len = 400;
  int hop_len = 100;

  int num_bins() const { return window_len / 2 + 1; }
  /// Throws InvalidArgumentError unless 2 <= window_len and
  /// 1 <= hop_len <= window_len.
  void Validate() const;
  bool operator==(const StftConfig &) const = default;
};

/// Frame-major magnitude and complex STFT. Row t of `magnitudes` is the
/// modulus of row t of `complex_frames`.
struct Spectrogram {
  StftConfig config;
  int num_frames = 0;
  int num_bins = 0;
  std::vector<double> magnitudes;
  std::vector<std::complex<double>> complex_frames;

  std::span<const double> Magnitude(int t) const {
    return {magnitudes.data() + static_cast<std::size_t>(t) * num_bins,
            static_cast<std::size_t>(num_bins)};
  }
  std::span<const std::complex<double>> Frame(int t) const {
    return {complex_frames.data() + static_cast<std::size_t>(t) * num_bins,
            static_cast<std::size_t>(num_bins)};
  }
  /// Overwrites frame t and keeps the magnitudes in sync.
  void SetFrame(int t, std::span<const std::complex<double>> values);
};

/// Periodic Hann window, w[n] = 0.5 (1 - cos(2 pi n / len)).
std::vector<double> HannWindow(int len);

/// Number of full frames in n samples; no padding, trailing partial frame
/// dropped.
int NumFrames(std::size_t num_samples, const StftConfig &cfg);

/// Throws SignalTooShortError if the signal is shorter than one window.
Spectrogram Stft(const Waveform &wave, const StftConfig &cfg = {});

/// Weighted overlap-add with the analysis window, normalised by the summed
/// squared window. Samples whose summed weight is below 1e-8 come out as 0.
/// Output length is (T - 1) * hop + window_len.
Waveform Istft(const Spectrogram &spec);

struct FrameSimilarity {
  std::vector<double> values;  // one per frame, 0 where invalid
  std::vector<bool> valid;     // false when either frame norm < 1e-12

  int num_valid() const;
};

/// Per-frame cosine similarity of the magnitude spectra. Magnitudes are
/// nonnegative, so every value lies in [0, 1].
/// Throws ShapeMismatchError unless both share T and F.
FrameSimilarity FrameCosineSimilarity(const Spectrogram &a, const Spectrogram &b);

inline constexpr double kMinFrameNorm = 1e-12;

}  // namespace oabridge

#endif  // OABRIDGE_SPECTRAL_H_
