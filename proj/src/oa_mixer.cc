// oabridge/oa_mixer.cc

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

#include "oabridge/oa_mixer.h"

#include <fmt/format.h>

namespace oabridge {

Waveform OaMix(const Waveform &noisy, const Waveform &enhanced, double s_prime) {
  if (!(s_prime >= 0.0 && s_prime <= 1.0))
    throw InvalidArgumentError(fmt::format("OA coefficient {} outside [0, 1]", s_prime));
  if (noisy.sample_rate_hz != enhanced.sample_rate_hz)
    throw SampleRateError(fmt::format("sample rates differ: {} vs {}", noisy.sample_rate_hz,
                                      enhanced.sample_rate_hz));
  const std::size_t len = AlignedLength(noisy.size(), enhanced.size());
  Waveform out;
  out.sample_rate_hz = noisy.sample_rate_hz;
  out.samples.resize(len);
  const double rest = 1.0 - s_prime;
  for (std::size_t i = 0; i < len; ++i)
    out.samples[i] = s_prime * noisy.samples[i] + rest * enhanced.samples[i];
  return out;
}

}  // namespace oabridge
