// tests/unit/dataset_synth_test.cc

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

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.h"

namespace oabridge {
namespace {

using testing::ReadFile;
using testing::TempDir;

Waveform Constant(std::size_t n, double v) { return Waveform{std::vector<double>(n, v), 16000}; }

TEST(Rms, Examples) {
  EXPECT_DOUBLE_EQ(Rms(Waveform{{1, -1, 1, -1}, 16000}), 1.0);
  EXPECT_EQ(Rms(Waveform{{0, 0, 0}, 16000}), 0.0);
  EXPECT_NEAR(Rms(Waveform{{0.3, 0.4}, 16000}), 0.35355339, 1e-8);
  EXPECT_THROW(Rms(Waveform{}), EmptyInputError);
}

TEST(MixAtSnr, GainExamples) {
  // rms 0.1 vs 0.1 at 0 dB, 6 dB; rms 0.2 vs 0.1 at 0 dB.
  EXPECT_NEAR(MixAtSnr(Constant(100, 0.1), Constant(100, 0.1), 0.0).noise_gain, 1.0, 1e-12);
  EXPECT_NEAR(MixAtSnr(Constant(100, 0.1), Constant(100, 0.1), 6.0).noise_gain,
              std::pow(10.0, -0.3), 1e-12);
  EXPECT_NEAR(MixAtSnr(Constant(100, 0.1), Constant(100, 0.1), 6.0).noise_gain, 0.501187, 1e-6);
  EXPECT_NEAR(MixAtSnr(Constant(100, 0.2), Constant(100, 0.1), 0.0).noise_gain, 2.0, 1e-12);
}

TEST(MixAtSnr, AddsScaledTruncatedNoise) {
  Waveform clean{{0.1, 0.2, 0.3}, 16000};
  Waveform noise{{0.5, -0.5, 0.5, 99.0}, 16000};
  NoisyMix m = MixAtSnr(clean, noise, 3.0);
  ASSERT_EQ(m.noisy.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_DOUBLE_EQ(m.noisy.samples[i], clean.samples[i] + m.noise_gain * noise.samples[i]);
}

TEST(MixAtSnr, Errors) {
  EXPECT_THROW(MixAtSnr(Constant(10, 0.0), Constant(10, 0.1), 0.0), EmptyInputError);
  EXPECT_THROW(MixAtSnr(Constant(10, 0.1), Constant(10, 0.0), 0.0), EmptyInputError);
  EXPECT_THROW(MixAtSnr(Constant(10, 0.1), Constant(9, 0.1), 0.0), LengthMismatchError);
}

TEST(MixAtSnr, MeasuredSnrMatchesRequest) {
  for (double snr : {-12.0, -6.0, 0.0, 6.0, 12.0, 2.5}) {
    const Waveform clean = GenPseudoSpeech(1.0, 7);
    const Waveform noise = GenNoise(1.5, NoiseKind::kPinkApprox, 8);
    const NoisyMix m = MixAtSnr(clean, noise, snr);
    Waveform scaled;
    for (std::size_t i = 0; i < clean.size(); ++i)
      scaled.samples.push_back(m.noise_gain * noise.samples[i]);
    EXPECT_NEAR(MeasureSnrDb(clean, scaled), snr, 1e-9);
  }
}

TEST(GenPseudoSpeech, LengthPeakDeterminism) {
  const Waveform a = GenPseudoSpeech(1.0, 42);
  EXPECT_EQ(a.size(), 16000u);
  EXPECT_EQ(a, GenPseudoSpeech(1.0, 42));
  EXPECT_NE(a, GenPseudoSpeech(1.0, 43));
  double peak = 0.0;
  for (double v : a.samples) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.5, 1e-9);
  EXPECT_THROW(GenPseudoSpeech(0.0, 1), InvalidArgumentError);
}

TEST(GenNoise, LengthDeterminismMean) {
  EXPECT_EQ(GenNoise(0.5, NoiseKind::kWhite, 1).size(), 8000u);
  EXPECT_EQ(GenNoise(0.5, NoiseKind::kWhite, 1), GenNoise(0.5, NoiseKind::kWhite, 1));
  const Waveform w = GenNoise(10.0, NoiseKind::kWhite, 5);
  double mean = 0.0, peak = 0.0;
  for (double v : w.samples) {
    mean += v;
    peak = std::max(peak, std::abs(v));
  }
  EXPECT_NEAR(mean / w.size(), 0.0, 0.01);
  EXPECT_NEAR(peak, 0.5, 1e-12);
  const Waveform p = GenNoise(1.0, NoiseKind::kPinkApprox, 5);
  EXPECT_NE(p, GenNoise(1.0, NoiseKind::kWhite, 5));
  EXPECT_THROW(GenNoise(-1.0, NoiseKind::kWhite, 1), InvalidArgumentError);
}

TEST(GenNoise, PinkApproxFollowsOnePoleRecurrence) {
  // The pink output is the white draw filtered by y = 0.98 y + w, up to the
  // common peak normalisation.
  const Waveform white = GenNoise(0.1, NoiseKind::kWhite, 9);
  const Waveform pink = GenNoise(0.1, NoiseKind::kPinkApprox, 9);
  std::vector<double> y(white.size());
  double state = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    state = 0.98 * state + white.samples[i];
    y[i] = state;
    peak = std::max(peak, std::abs(state));
  }
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(pink.samples[i], 0.5 * y[i] / peak, 1e-12);
}

class SynthDatasetTest : public ::testing::Test {
 protected:
  void MakeInputs(int clean_count, int noise_count) {
    std::filesystem::create_directories(dir_ / "clean");
    std::filesystem::create_directories(dir_ / "noise");
    for (int i = 0; i < clean_count; ++i)
      WriteWav(GenPseudoSpeech(0.5, 100 + i), dir_ / "clean" / ("c" + std::to_string(i) + ".wav"));
    for (int i = 0; i < noise_count; ++i)
      WriteWav(GenNoise(0.75, NoiseKind::kWhite, 200 + i),
               dir_ / "noise" / ("n" + std::to_string(i) + ".wav"));
  }
  TempDir dir_;
};

TEST_F(SynthDatasetTest, CountsAndFields) {
  MakeInputs(2, 3);
  testing::WriteFile(dir_ / "clean" / "c0.txt", "Hello world\n");
  const auto path = SynthDataset(dir_ / "clean", dir_ / "noise", {-6, 6}, 1, dir_ / "out");
  const Manifest m = ReadManifest(path);
  ASSERT_EQ(m.records.size(), 4u);
  EXPECT_EQ(m.records[0].id, "c0_snr-6");
  EXPECT_EQ(m.records[1].id, "c0_snr6");
  EXPECT_EQ(*m.records[0].transcript, "Hello world");
  EXPECT_FALSE(m.records[2].transcript.has_value());
  for (const auto &r : m.records) {
    ASSERT_TRUE(r.snr_db && r.clean_path && r.noise_path);
    const Waveform noisy = ReadWav(m.Resolve(r.noisy_path));
    const Waveform clean = ReadWav(m.Resolve(*r.clean_path));
    EXPECT_EQ(noisy.size(), clean.size());
    EXPECT_TRUE(std::filesystem::exists(m.Resolve(*r.noise_path)));
  }
}

TEST_F(SynthDatasetTest, DeterministicPerSeed) {
  MakeInputs(3, 4);
  const auto a = SynthDataset(dir_ / "clean", dir_ / "noise", {-12, 0, 12}, 9, dir_ / "a");
  const auto b = SynthDataset(dir_ / "clean", dir_ / "noise", {-12, 0, 12}, 9, dir_ / "b");
  EXPECT_EQ(ReadFile(a), ReadFile(b));
  for (const auto &r : ReadManifest(a).records)
    EXPECT_EQ(ReadFile(dir_ / "a" / r.noisy_path), ReadFile(dir_ / "b" / r.noisy_path));
}

TEST_F(SynthDatasetTest, FiveLevelsOverFiftyFiles) {
  MakeInputs(50, 5);
  const auto path = SynthDataset(dir_ / "clean", dir_ / "noise", {0, -6, 6, -12, 12}, 3, dir_ / "o");
  EXPECT_EQ(ReadManifest(path).records.size(), 250u);
}

TEST_F(SynthDatasetTest, EmptyInputsRejected) {
  std::filesystem::create_directories(dir_ / "clean");
  std::filesystem::create_directories(dir_ / "noise");
  EXPECT_THROW(SynthDataset(dir_ / "clean", dir_ / "noise", {0}, 1, dir_ / "o"), EmptyInputError);
  EXPECT_THROW(SynthDataset(dir_ / "nope", dir_ / "noise", {0}, 1, dir_ / "o"), IoError);
}

TEST_F(SynthDatasetTest, UnwritableOutDir) {
  MakeInputs(1, 1);
  testing::WriteFile(dir_ / "blocker", "x");
  EXPECT_THROW(SynthDataset(dir_ / "clean", dir_ / "noise", {0}, 1, dir_ / "blocker" / "sub"),
               IoError);
}

TEST_F(SynthDatasetTest, TrainingManifestLabels) {
  MakeInputs(2, 1);
  const auto path = WriteTrainingManifest(dir_ / "clean", dir_ / "noise", dir_ / "train.jsonl");
  const Manifest m = ReadManifest(path);
  ASSERT_EQ(m.records.size(), 3u);
  EXPECT_EQ(TrainingLabel(m.records[0]), 1.0);
  EXPECT_EQ(TrainingLabel(m.records[2]), 0.0);
  EXPECT_TRUE(std::filesystem::exists(m.Resolve(m.records[2].noisy_path)));
}

TEST(Manifest, RecordJsonRoundTripAndValidation) {
  UtteranceRecord r;
  r.id = "u1";
  r.noisy_path = "a.wav";
  r.snr_db = -6;
  r.transcript = "hi \"there\"";
  EXPECT_EQ(RecordFromJson(RecordToJson(r)), r);
  EXPECT_THROW(RecordFromJson(R"({"noisy_path":"a.wav"})"), ManifestError);
  EXPECT_THROW(RecordFromJson(R"({"id":"x"})"), ManifestError);
  EXPECT_THROW(RecordFromJson(R"({"id":"x","noisy_path":"a","snr_db":"loud"})"), ManifestError);
  EXPECT_THROW(RecordFromJson("{oops"), ManifestError);

  TempDir dir;
  testing::WriteFile(dir / "m.jsonl",
                     "{\"id\":\"a\",\"noisy_path\":\"x.wav\"}\n\n{\"id\":\"a\",\"noisy_path\":\"y.wav\"}\n");
  EXPECT_THROW(ReadManifest(dir / "m.jsonl"), ManifestError);

  UtteranceRecord mixed = r;
  mixed.clean_path = "c.wav";
  mixed.noise_path = "n.wav";
  EXPECT_THROW(TrainingLabel(mixed), ManifestError);
}

TEST(FormatSnr, ShortestForm) {
  EXPECT_EQ(FormatSnr(-6.0), "-6");
  EXPECT_EQ(FormatSnr(12.0), "12");
  EXPECT_EQ(FormatSnr(0.0), "0");
  EXPECT_EQ(FormatSnr(-0.0), "0");
  EXPECT_EQ(FormatSnr(2.5), "2.5");
}

}  // namespace
}  // namespace oabridge
