// tests/unit/bridge_test.cc

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

#include "oabridge/bridge.h"

#include <gtest/gtest.h>

#include <cmath>

#include "oabridge/baseline_se.h"
#include "oabridge/dataset_synth.h"
#include "oracles.h"
#include "test_util.h"

namespace oabridge {
namespace {

using testing::TempDir;

BridgeModel MeanOnly(double bias) {
  BridgeModel m = BridgeModel::Initial();
  m.weights = {1, 0, 0, 0};
  m.bias = bias;
  return m;
}

// Least-squares fit of the linear bridge, bias as a trailing ones column.
std::vector<double> LeastSquares(const std::vector<Example> &data) {
  std::vector<std::vector<double>> a;
  std::vector<double> y;
  for (const auto &ex : data) {
    a.push_back(ex.features);
    a.back().push_back(1.0);
    y.push_back(ex.label);
  }
  return oracle::LeastSquares(a, y);
}

double Mse(const BridgeModel &m, const std::vector<Example> &data) {
  return LossAndGrad(m, data).loss;
}

std::vector<Example> ToySeparable(std::uint64_t seed, int per_class) {
  Rng rng(seed);
  std::vector<Example> out;
  for (int i = 0; i < per_class; ++i) {
    const double ms = 0.99 + rng.Uniform(-0.005, 0.005);
    out.push_back({{ms, rng.Uniform(0.0, 0.02), ms - rng.Uniform(0.02, 0.06), 1.0}, 1.0});
    const double mn = 0.10 + rng.Uniform(-0.03, 0.03);
    out.push_back({{mn, rng.Uniform(0.03, 0.08), mn - rng.Uniform(0.05, 0.09),
                    mn + rng.Uniform(0.1, 0.2)},
                   0.0});
  }
  return out;
}

TEST(Clip, Examples) {
  EXPECT_EQ(Clip(0.3, 0.6, 1.0), 0.6);
  EXPECT_EQ(Clip(0.8, 0.6, 1.0), 0.8);
  EXPECT_EQ(Clip(1.7, 0.6, 1.0), 1.0);
  EXPECT_THROW(Clip(0.5, 1.0, 1.0), InvalidArgumentError);
}

TEST(Predict, Examples) {
  Prediction a = Predict(MeanOnly(0.0), std::vector<double>{0.9, 0, 0, 0});
  EXPECT_DOUBLE_EQ(a.s, 0.9);
  EXPECT_DOUBLE_EQ(a.s_prime, 0.9);
  Prediction b = Predict(MeanOnly(0.0), std::vector<double>{0.3, 0, 0, 0});
  EXPECT_DOUBLE_EQ(b.s, 0.3);
  EXPECT_DOUBLE_EQ(b.s_prime, 0.6);
  Prediction c = Predict(MeanOnly(0.5), std::vector<double>{0.9, 0, 0, 0});
  EXPECT_DOUBLE_EQ(c.s, 1.4);
  EXPECT_DOUBLE_EQ(c.s_prime, 1.0);
  EXPECT_THROW(Predict(MeanOnly(0.0), std::vector<double>{1.0}), ShapeMismatchError);
}

TEST(Predict, CoefficientAlwaysInClipRangeAndMonotone) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    BridgeModel m = BridgeModel::Initial();
    for (double &w : m.weights) w = rng.Uniform(0.0, 3.0);
    m.bias = rng.Uniform(-3, 3);
    m.clip_floor = rng.Uniform(0.0, 0.9);
    m.clip_ceil = rng.Uniform(m.clip_floor + 0.01, 1.0);
    std::vector<double> f(4);
    for (double &v : f) v = rng.Uniform(-1, 2);
    const Prediction p = Predict(m, f);
    EXPECT_GE(p.s_prime, m.clip_floor);
    EXPECT_LE(p.s_prime, m.clip_ceil);
    const std::size_t d = rng.Below(4);
    std::vector<double> g = f;
    g[d] += rng.Uniform(0.0, 1.0);
    EXPECT_GE(Predict(m, g).s, p.s);
    EXPECT_GE(Predict(m, g).s_prime, p.s_prime);
  }
}

TEST(PoolSimilarity, HandStatistics) {
  FrameSimilarity sim{{0.5, 0.0, 1.0}, {true, false, true}};
  const Features f = PoolSimilarity(sim, FeatureConfig{});
  EXPECT_FALSE(f.silent);
  EXPECT_DOUBLE_EQ(f.values[0], 0.75);
  EXPECT_DOUBLE_EQ(f.values[1], 0.25);
  EXPECT_DOUBLE_EQ(f.values[2], 0.5);
  EXPECT_DOUBLE_EQ(f.values[3], 1.0);

  FeatureConfig order{{Statistic::kMax, Statistic::kMean}};
  EXPECT_EQ(PoolSimilarity(sim, order).values, (std::vector<double>{1.0, 0.75}));
}

TEST(ExtractFeatures, IdenticalSignals) {
  const Waveform x = GenPseudoSpeech(0.5, 4);
  const Features f = ExtractFeatures(x, x);
  EXPECT_FALSE(f.silent);
  EXPECT_NEAR(f.values[0], 1.0, 1e-12);
  EXPECT_NEAR(f.values[1], 0.0, 1e-7);
  EXPECT_NEAR(f.values[2], 1.0, 1e-12);
  EXPECT_NEAR(f.values[3], 1.0, 1e-12);
}

TEST(ExtractFeatures, SilentPairFallsBackToZeros) {
  const Waveform z{std::vector<double>(4000, 0.0), 16000};
  const Features f = ExtractFeatures(z, z);
  EXPECT_TRUE(f.silent);
  EXPECT_EQ(f.values, (std::vector<double>{0, 0, 0, 0}));
}

TEST(ExtractFeatures, LengthPolicy) {
  const Waveform x = testing::RandomWave(10000, 1);
  Waveform shorter = x;
  shorter.samples.resize(9950);
  const Features a = ExtractFeatures(x, shorter);
  EXPECT_NEAR(a.values[0], 1.0, 1e-12);
  shorter.samples.resize(9800);
  EXPECT_THROW(ExtractFeatures(x, shorter), LengthMismatchError);
  EXPECT_THROW(ExtractFeatures(testing::RandomWave(300, 1), testing::RandomWave(300, 2)),
               SignalTooShortError);
  Waveform other_rate = x;
  other_rate.sample_rate_hz = 8000;
  EXPECT_THROW(ExtractFeatures(other_rate, x), SampleRateError);
}

TEST(ExtractFeatures, InvariantToCommonRescaling) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Waveform clean = GenPseudoSpeech(0.6, seed);
    const Waveform noisy = MixAtSnr(clean, GenNoise(0.6, NoiseKind::kWhite, seed + 9), 3.0).noisy;
    const Features f1 = ExtractFeatures(noisy, clean);
    const double k = 0.05 + 3.0 * Rng(seed).Uniform();
    Waveform a = noisy, b = clean;
    for (double &v : a.samples) v *= k;
    for (double &v : b.samples) v *= k;
    const Features f2 = ExtractFeatures(a, b);
    for (std::size_t d = 0; d < 4; ++d) EXPECT_NEAR(f1.values[d], f2.values[d], 1e-9);
  }
}

TEST(LossAndGrad, Examples) {
  BridgeModel zero = BridgeModel::Initial();
  zero.bias = 0.0;
  std::vector<Example> one{{{1, 0, 0, 0}, 1.0}};
  LossGrad g = LossAndGrad(zero, one);
  EXPECT_DOUBLE_EQ(g.loss, 1.0);
  EXPECT_DOUBLE_EQ(g.grad_b, -2.0);
  EXPECT_EQ(g.grad_w, (std::vector<double>{-2, 0, 0, 0}));

  BridgeModel m = MeanOnly(0.0);
  std::vector<Example> exact{{{0.3, 1, 1, 1}, 0.3}, {{0.8, 2, 2, 2}, 0.8}};
  g = LossAndGrad(m, exact);
  EXPECT_EQ(g.loss, 0.0);
  EXPECT_EQ(g.grad_b, 0.0);
  for (double v : g.grad_w) EXPECT_EQ(v, 0.0);

  // Errors +e and -e on identical features cancel.
  std::vector<Example> sym{{{0.5, 0.5, 0.5, 0.5}, 0.3}, {{0.5, 0.5, 0.5, 0.5}, 0.7}};
  g = LossAndGrad(m, sym);
  for (double v : g.grad_w) EXPECT_NEAR(v, 0.0, 1e-15);
  EXPECT_NEAR(g.grad_b, 0.0, 1e-15);

  EXPECT_THROW(LossAndGrad(m, std::vector<Example>{}), EmptyInputError);
  EXPECT_THROW(LossAndGrad(m, std::vector<Example>{{{0, 0, 0, 0}, 1.5}}), InvalidArgumentError);
}

TEST(LossAndGrad, MatchesCentralDifferences) {
  Rng rng(2024);
  const double h = 1e-6;
  for (int draw = 0; draw < 100; ++draw) {
    BridgeModel m = BridgeModel::Initial();
    for (double &w : m.weights) w = rng.Uniform(-2, 2);
    m.bias = rng.Uniform(-1, 1);
    std::vector<Example> batch(1 + rng.Below(32));
    for (auto &ex : batch) {
      ex.features.resize(4);
      for (double &v : ex.features) v = rng.Uniform(0, 1);
      ex.label = rng.Uniform() < 0.5 ? 0.0 : 1.0;
    }
    const LossGrad g = LossAndGrad(m, batch);
    std::vector<double> analytic = g.grad_w, numeric;
    analytic.push_back(g.grad_b);
    for (std::size_t p = 0; p <= 4; ++p) {
      BridgeModel plus = m, minus = m;
      double &ap = p < 4 ? plus.weights[p] : plus.bias;
      double &am = p < 4 ? minus.weights[p] : minus.bias;
      ap += h;
      am -= h;
      numeric.push_back((LossAndGrad(plus, batch).loss - LossAndGrad(minus, batch).loss) / (2 * h));
    }
    double diff = 0.0, norm = 0.0;
    for (std::size_t p = 0; p <= 4; ++p) {
      diff += (analytic[p] - numeric[p]) * (analytic[p] - numeric[p]);
      norm = std::max(norm, std::max(std::abs(analytic[p]), std::abs(numeric[p])));
    }
    EXPECT_LE(std::sqrt(diff) / std::max(norm, 1e-12), 1e-5) << "draw " << draw;
  }
}

TEST(Train, ZeroLearningRateReturnsInitialisation) {
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 5;
  for (bool standardize : {true, false}) {
    cfg.standardize_features = standardize;
    const TrainResult r = TrainOnFeatures(ToySeparable(1, 20), cfg);
    EXPECT_EQ(r.model, BridgeModel::Initial());
  }
}

TEST(Train, SeparableToyReachesLowMse) {
  const auto data = ToySeparable(3, 40);
  // Least squares bounds the achievable MSE from below.
  const auto p = LeastSquares(data);
  BridgeModel best = BridgeModel::Initial();
  best.weights.assign(p.begin(), p.begin() + 4);
  best.bias = p[4];
  const double floor_mse = Mse(best, data);
  EXPECT_LT(floor_mse, 0.01);

  TrainConfig cfg;
  cfg.epochs = 200;
  const TrainResult r = TrainOnFeatures(data, cfg);
  EXPECT_EQ(r.epoch_mse.size(), 200u);
  EXPECT_LT(Mse(r.model, data), 0.05);
  EXPECT_GE(Mse(r.model, data), floor_mse - 1e-12);
  EXPECT_NEAR(r.epoch_mse.back(), Mse(r.model, data), 1e-9);
}

TEST(Train, DeterministicForSeed) {
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 7;
  cfg.seed = 99;
  const auto data = ToySeparable(5, 25);
  EXPECT_EQ(TrainOnFeatures(data, cfg).model, TrainOnFeatures(data, cfg).model);
  cfg.seed = 100;
  EXPECT_NE(TrainOnFeatures(data, cfg).model, TrainOnFeatures(data, TrainConfig{}).model);
}

TEST(Train, FullBatchLossNonIncreasing) {
  const auto data = ToySeparable(8, 30);
  for (bool standardize : {true, false}) {
    TrainConfig cfg;
    cfg.batch_size = static_cast<int>(data.size());
    cfg.epochs = 200;
    cfg.standardize_features = standardize;
    const TrainResult r = TrainOnFeatures(data, cfg);
    for (std::size_t e = 1; e < r.epoch_mse.size(); ++e)
      EXPECT_LE(r.epoch_mse[e], r.epoch_mse[e - 1] * (1 + 1e-12)) << "epoch " << e;
    EXPECT_LT(r.epoch_mse.back(), r.epoch_mse.front());
  }
}

TEST(Train, SingleClassWarns) {
  std::vector<Example> data{{{0.9, 0, 0.9, 0.9}, 1.0}, {{0.8, 0, 0.8, 0.8}, 1.0}};
  TrainConfig cfg;
  cfg.epochs = 2;
  EXPECT_FALSE(TrainOnFeatures(data, cfg).warnings.empty());
  cfg.momentum = 1.0;
  EXPECT_THROW(TrainOnFeatures(data, cfg), InvalidArgumentError);
}

TEST(Train, WaveformCropsAndFiles) {
  TempDir dir;
  std::vector<TrainItem> items;
  for (int i = 0; i < 6; ++i) {
    const bool speech = i % 2 == 0;
    const Waveform x = speech ? GenPseudoSpeech(0.5, 10 + i)
                              : GenNoise(0.5, NoiseKind::kWhite, 10 + i);
    const auto noisy = dir / ("n" + std::to_string(i) + ".wav");
    const auto enh = dir / ("e" + std::to_string(i) + ".wav");
    WriteWav(x, noisy, WavEncoding::kFloat32);
    WriteWav(SeSpectralSubtraction(x), enh, WavEncoding::kFloat32);
    items.push_back({noisy, enh, speech ? 1.0 : 0.0});
  }
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.crop_len_samples = 3000;  // shorter than the 8000-sample items
  const TrainResult a = Train(items, cfg);
  const TrainResult b = Train(items, cfg);
  EXPECT_EQ(a.model, b.model);
  EXPECT_NE(a.model, BridgeModel::Initial());
  items.push_back({dir / "missing.wav", dir / "e0.wav", 1.0});
  EXPECT_THROW(Train(items, cfg), IoError);
}

TEST(ModelFile, RoundTrip) {
  TempDir dir;
  BridgeModel m = BridgeModel::Initial(FeatureConfig{{Statistic::kMin, Statistic::kMean}},
                                       StftConfig{512, 128});
  m.weights = {0.1 + 1e-17, -3.14159265358979};
  m.bias = 1.0 / 3.0;
  m.clip_floor = 0.55;
  SaveModel(m, dir / "m.json");
  EXPECT_EQ(LoadModel(dir / "m.json"), m);
}

TEST(ModelFile, Validation) {
  const std::string good = ModelToJson(BridgeModel::Initial());
  auto edit = [&](const std::string &from, const std::string &to) {
    std::string s = good;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
  };
  EXPECT_NO_THROW(ModelFromJson(good));
  EXPECT_THROW(ModelFromJson(edit("\"clip_floor\": 0.6", "\"clip_floor\": 1.2")),
               ModelValidationError);
  EXPECT_THROW(ModelFromJson(edit("\"weights\"", "\"weightz\"")), ModelSchemaError);
  EXPECT_THROW(ModelFromJson(edit("\"format_version\": 1", "\"format_version\": 2")),
               ModelVersionError);
  EXPECT_THROW(ModelFromJson(edit("\"max\"", "\"median\"")), ModelSchemaError);
  EXPECT_THROW(ModelFromJson(edit("\"max\"", "\"mean\"")), ModelValidationError);
  EXPECT_THROW(ModelFromJson(edit("\"bias\": 0.5", "\"bias\": \"half\"")), ModelSchemaError);
  EXPECT_THROW(ModelFromJson("[1, 2]"), ModelSchemaError);
  EXPECT_THROW(ModelFromJson("{"), ModelSchemaError);
}

}  // namespace
}  // namespace oabridge
