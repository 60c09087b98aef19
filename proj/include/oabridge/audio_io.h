// oabridge/audio_io.h

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

#ifndef OABRIDGE_AUDIO_IO_H_
#define OABRIDGE_AUDIO_IO_H_

#include <filesystem>
#include <vector>

#include "oabridge/errors.h"

namespace oabridge {

/// Every pipeline entry point works at this rate; nothing is resampled.
inline constexpr int kSampleRateHz = 16000;

/// Mono waveform. Plays the role of the noisy input, the enhanced signal and
/// the observation-added mix alike.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRateHz;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  bool operator==(const Waveform &) const = default;
};

enum class WavEncoding { kPcm16, kFloat32 };

/// Decodes a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float mono audio
/// at 16 kHz. PCM values are divided by 32768. Chunks other than `fmt ` and
/// `data` are skipped.
///
/// Throws IoError, WavFormatError, UnsupportedEncodingError,
/// ChannelCountError, SampleRateError or NonFiniteSampleError.
Waveform ReadWav(const std::filesystem::path &path);

/// Encodes `wave` as a canonical 44-byte-header WAV. For kPcm16 the samples
/// are clamped to [-1, 1], scaled by 32768, rounded and saturated to int16
/// (so 1.0 is stored as 32767).
void WriteWav(const Waveform &wave, const std::filesystem::path &path,
              WavEncoding encoding = WavEncoding::kPcm16);

/// Throws SampleRateError unless the rate is 16 kHz.
void CheckPipelineRate(const Waveform &wave);

/// Throws NonFiniteSampleError if any sample is NaN or infinite.
void CheckFinite(const Waveform &wave);

/// Common length of two signals that are truncated to the shorter one.
/// Throws LengthMismatchError when they differ by more than 1 % of the longer.
std::size_t AlignedLength(std::size_t a, std::size_t b);

}  // namespace oabridge

#endif  // OABRIDGE_AUDIO_IO_H_
