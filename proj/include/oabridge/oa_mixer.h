// oabridge/oa_mixer.h

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

#ifndef OABRIDGE_OA_MIXER_H_
#define OABRIDGE_OA_MIXER_H_

#include "oabridge/audio_io.h"

namespace oabridge {

/// Observation adding: out[i] = s_prime * noisy[i] + (1 - s_prime) * enhanced[i]
/// over the common (truncated) length.
///
/// Throws InvalidArgumentError when s_prime is outside [0, 1],
/// SampleRateError when the rates differ and LengthMismatchError when the
/// lengths differ by more than 1 %.
Waveform OaMix(const Waveform &noisy, const Waveform &enhanced, double s_prime);

}  // namespace oabridge

#endif  // OABRIDGE_OA_MIXER_H_
