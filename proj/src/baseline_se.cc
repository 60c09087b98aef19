// oabridge/baseline_se.cc

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

#include "oabridge/baseline_se.h"

#include <algorithm>
#include <complex>

#include <fmt/format.h>

namespace oabridge {

Waveform SeIdentity(const Waveform &noisy) { return noisy; }

Waveform SeOracle(const Waveform &noisy, const Waveform &clean_ref) {
  if (noisy.size() != clean_ref.size())
    throw LengthMismatchError(fmt::format("oracle reference has {} samples, input {}",
                                          clean_ref.size(), noisy.size()));
  return clean_ref;
}

Waveform SeSpectralSubtraction(const Waveform &noisy, const SpectralSubtractionOptions &opts) {
  if (opts.noise_frames < 1) throw InvalidArgumentError("noise_frames must be positive");
  const int frames = NumFrames(noisy.size(), opts.stft);
  if (frames < opts.noise_frames)
    throw SignalTooShortError(fmt::format("{} STFT frames, spectral subtraction needs {}",
                                          frames, opts.noise_frames));
  Spectrogram spec = Stft(noisy, opts.stft);
  const int bins = spec.num_bins;

  std::vector<double> profile(bins, 0.0);
  for (int t = 0; t < opts.noise_frames; ++t) {
    auto m = spec.Magnitude(t);
    for (int f = 0; f < bins; ++f) profile[f] += m[f];
  }
  for (double &p : profile) p /= opts.noise_frames;

  std::vector<std::complex<double>> frame(bins);
  for (int t = 0; t < spec.num_frames; ++t) {
    auto x = spec.Frame(t);
    auto m = spec.Magnitude(t);
    for (int f = 0; f < bins; ++f) {
      const double mag = std::max(m[f] - opts.alpha * profile[f], opts.beta * m[f]);
      // Scale the complex bin so the noisy phase is kept; zero bins stay zero.
      frame[f] = m[f] > 0.0 ? x[f] * (mag / m[f]) : std::complex<double>(0.0, 0.0);
    }
    spec.SetFrame(t, frame);
  }

  Waveform out = Istft(spec);
  out.sample_rate_hz = noisy.sample_rate_hz;
  out.samples.resize(noisy.size(), 0.0);
  return out;
}

}  // namespace oabridge
