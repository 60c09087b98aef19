// oabridge/spectral.cc

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

#include "oabridge/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

namespace oabridge {

namespace {

// FFTW's planner is not thread-safe, execution is. Plans are created once per
// size under a lock and reused through the new-array execute interface.
struct RealPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealPlans GetPlans(int n) {
  static std::mutex mu;
  static std::map<int, RealPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  double *in = fftw_alloc_real(n);
  fftw_complex *out = fftw_alloc_complex(n / 2 + 1);
  RealPlans plans;
  plans.forward = fftw_plan_dft_r2c_1d(n, in, out, flags);
  plans.inverse = fftw_plan_dft_c2r_1d(n, out, in, flags | FFTW_DESTROY_INPUT);
  fftw_free(in);
  fftw_free(out);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

void StftConfig::Validate() const {
  if (window_len < 2)
    throw InvalidArgumentError(fmt::format("window_len {} < 2", window_len));
  if (hop_len < 1 || hop_len > window_len)
    throw InvalidArgumentError(
        fmt::format("hop_len {} must lie in [1, window_len={}]", hop_len, window_len));
}

void Spectrogram::SetFrame(int t, std::span<const std::complex<double>> values) {
  if (static_cast<int>(values.size()) != num_bins)
    throw ShapeMismatchError("frame width does not match spectrogram");
  const std::size_t off = static_cast<std::size_t>(t) * num_bins;
  for (int f = 0; f < num_bins; ++f) {
    complex_frames[off + f] = values[f];
    magnitudes[off + f] = std::abs(values[f]);
  }
}

std::vector<double> HannWindow(int len) {
  if (len < 2) throw InvalidArgumentError(fmt::format("window length {} < 2", len));
  std::vector<double> w(len);
  for (int n = 0; n < len; ++n)
    w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / len));
  return w;
}

int NumFrames(std::size_t num_samples, const StftConfig &cfg) {
  if (num_samples < static_cast<std::size_t>(cfg.window_len)) return 0;
  return static_cast<int>((num_samples - cfg.window_len) / cfg.hop_len) + 1;
}

Spectrogram Stft(const Waveform &wave, const StftConfig &cfg) {
  cfg.Validate();
  const int frames = NumFrames(wave.size(), cfg);
  if (frames == 0)
    throw SignalTooShortError(fmt::format("{} samples is shorter than one {}-sample window",
                                          wave.size(), cfg.window_len));
  const int n = cfg.window_len;
  const auto window = HannWindow(n);
  const RealPlans plans = GetPlans(n);

  Spectrogram spec;
  spec.config = cfg;
  spec.num_frames = frames;
  spec.num_bins = cfg.num_bins();
  spec.magnitudes.resize(static_cast<std::size_t>(frames) * spec.num_bins);
  spec.complex_frames.resize(spec.magnitudes.size());

  std::vector<double> buf(n);
  for (int t = 0; t < frames; ++t) {
    const double *src = wave.samples.data() + static_cast<std::size_t>(t) * cfg.hop_len;
    for (int i = 0; i < n; ++i) buf[i] = src[i] * window[i];
    auto *out = reinterpret_cast<fftw_complex *>(
        spec.complex_frames.data() + static_cast<std::size_t>(t) * spec.num_bins);
    fftw_execute_dft_r2c(plans.forward, buf.data(), out);
  }
  for (std::size_t i = 0; i < spec.magnitudes.size(); ++i)
    spec.magnitudes[i] = std::abs(spec.complex_frames[i]);
  return spec;
}

Waveform Istft(const Spectrogram &spec) {
  spec.config.Validate();
  const int n = spec.config.window_len;
  const int hop = spec.config.hop_len;
  const std::size_t cells = static_cast<std::size_t>(spec.num_frames) * spec.num_bins;
  if (spec.num_frames < 1 || spec.num_bins != spec.config.num_bins() ||
      spec.complex_frames.size() != cells)
    throw ShapeMismatchError(fmt::format(
        "inconsistent spectrogram: {} frames x {} bins, {} values, window {}",
        spec.num_frames, spec.num_bins, spec.complex_frames.size(), n));

  const auto window = HannWindow(n);
  const RealPlans plans = GetPlans(n);
  const std::size_t out_len = static_cast<std::size_t>(spec.num_frames - 1) * hop + n;
  std::vector<double> acc(out_len, 0.0), weight(out_len, 0.0);
  std::vector<std::complex<double>> bins(spec.num_bins);
  std::vector<double> frame(n);

  for (int t = 0; t < spec.num_frames; ++t) {
    auto src = spec.Frame(t);
    std::copy(src.begin(), src.end(), bins.begin());
    fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex *>(bins.data()),
                         frame.data());
    const std::size_t off = static_cast<std::size_t>(t) * hop;
    for (int i = 0; i < n; ++i) {
      acc[off + i] += frame[i] / n * window[i];
      weight[off + i] += window[i] * window[i];
    }
  }

  Waveform out;
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i)
    out.samples[i] = weight[i] < 1e-8 ? 0.0 : acc[i] / weight[i];
  return out;
}

int FrameSimilarity::num_valid() const {
  return static_cast<int>(std::count(valid.begin(), valid.end(), true));
}

FrameSimilarity FrameCosineSimilarity(const Spectrogram &a, const Spectrogram &b) {
  if (a.num_frames != b.num_frames || a.num_bins != b.num_bins)
    throw ShapeMismatchError(fmt::format("spectrogram shapes differ: {}x{} vs {}x{}",
                                         a.num_frames, a.num_bins, b.num_frames,
                                         b.num_bins));
  FrameSimilarity sim;
  sim.values.assign(a.num_frames, 0.0);
  sim.valid.assign(a.num_frames, false);
  for (int t = 0; t < a.num_frames; ++t) {
    auto x = a.Magnitude(t);
    auto y = b.Magnitude(t);
    double dot = 0.0, xx = 0.0, yy = 0.0;
    for (int f = 0; f < a.num_bins; ++f) {
      dot += x[f] * y[f];
      xx += x[f] * x[f];
      yy += y[f] * y[f];
    }
    const double nx = std::sqrt(xx), ny = std::sqrt(yy);
    if (nx < kMinFrameNorm || ny < kMinFrameNorm) continue;
    sim.valid[t] = true;
    sim.values[t] = std::clamp(dot / (nx * ny), 0.0, 1.0);
  }
  return sim;
}

}  // namespace oabridge
