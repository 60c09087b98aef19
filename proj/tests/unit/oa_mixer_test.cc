// tests/unit/oa_mixer_test.cc

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

#include <gtest/gtest.h>

#include "oabridge/errors.h"
#include "oabridge/random.h"
#include "test_util.h"

namespace oabridge {
namespace {

TEST(OaMix, Endpoints) {
  const Waveform x = testing::RandomWave(1000, 1);
  const Waveform y = testing::RandomWave(1000, 2);
  EXPECT_EQ(OaMix(x, y, 1.0), x);
  EXPECT_EQ(OaMix(x, y, 0.0), y);
}

TEST(OaMix, HandExample) {
  const Waveform x{{1.0, -1.0, 0.5}, 16000};
  const Waveform y{{0.0, 1.0, 0.5}, 16000};
  const Waveform out = OaMix(x, y, 0.75);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_DOUBLE_EQ(out.samples[0], 0.75);
  EXPECT_DOUBLE_EQ(out.samples[1], -0.5);
  EXPECT_DOUBLE_EQ(out.samples[2], 0.5);
}

TEST(OaMix, SampleWiseConvexCombination) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = rng.Uniform(-1, 1), b = rng.Uniform(-1, 1), s = rng.Uniform();
    const double v = OaMix(Waveform{{a}, 16000}, Waveform{{b}, 16000}, s).samples[0];
    EXPECT_GE(v, std::min(a, b) - 1e-15);
    EXPECT_LE(v, std::max(a, b) + 1e-15);
  }
}

TEST(OaMix, TruncatesSmallLengthDifferences) {
  const Waveform x = testing::RandomWave(1000, 3);
  const Waveform y = testing::RandomWave(995, 4);
  const Waveform out = OaMix(x, y, 0.6);
  ASSERT_EQ(out.size(), 995u);
  for (std::size_t i = 0; i < out.size(); ++i)
    EXPECT_DOUBLE_EQ(out.samples[i], 0.6 * x.samples[i] + 0.4 * y.samples[i]);
  EXPECT_THROW(OaMix(x, testing::RandomWave(980, 4), 0.6), LengthMismatchError);
}

TEST(OaMix, RejectsBadArguments) {
  const Waveform x = testing::RandomWave(100, 5);
  EXPECT_THROW(OaMix(x, x, -0.01), InvalidArgumentError);
  EXPECT_THROW(OaMix(x, x, 1.01), InvalidArgumentError);
  EXPECT_THROW(OaMix(x, x, std::nan("")), InvalidArgumentError);
  Waveform other = x;
  other.sample_rate_hz = 8000;
  EXPECT_THROW(OaMix(x, other, 0.5), SampleRateError);
}

}  // namespace
}  // namespace oabridge
