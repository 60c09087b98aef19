// oabridge/baseline_se.h

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

#ifndef OABRIDGE_BASELINE_SE_H_
#define OABRIDGE_BASELINE_SE_H_

#include "oabridge/audio_io.h"
#include "oabridge/spectral.h"

namespace oabridge {

// Built-in enhancers so the pipeline runs without neural SE models.

Waveform SeIdentity(const Waveform &noisy);

/// Perfect enhancement: returns the clean reference of a synthetic mix.
/// Throws LengthMismatchError unless both lengths agree.
Waveform SeOracle(const Waveform &noisy, const Waveform &clean_ref);

struct SpectralSubtractionOptions {
  int noise_frames = 10;
  double alpha = 1.0;
  double beta = 0.02;
  StftConfig stft;
};

/// Magnitude spectral subtraction with the noise profile taken as the mean
/// magnitude of the leading frames: |Y| = max(|X| - alpha N, beta |X|), noisy
/// phase kept. The output is zero-padded to the input length where the
/// trailing partial frame was dropped.
///
/// Throws SignalTooShortError when the input has fewer than noise_frames
/// frames.
Waveform SeSpectralSubtraction(const Waveform &noisy,
                               const SpectralSubtractionOptions &opts = {});

}  // namespace oabridge

#endif  // OABRIDGE_BASELINE_SE_H_
