// oabridge/bridge.h

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

#ifndef OABRIDGE_BRIDGE_H_
#define OABRIDGE_BRIDGE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "oabridge/audio_io.h"
#include "oabridge/spectral.h"

namespace oabridge {

// The bridge turns the frame-wise cosine similarity between a noisy signal
// and its enhanced version into a score S (1 for clean speech, 0 for pure
// noise) with a single linear layer, then clips S into the observation-adding
// coefficient S'. Variable-length similarity sequences are pooled into a
// fixed set of statistics before the linear layer.

enum class Statistic { kMean, kStd, kMin, kMax };

std::string StatisticName(Statistic s);
/// Throws ModelSchemaError for unknown names.
Statistic ParseStatistic(const std::string &name);

struct FeatureConfig {
  std::vector<Statistic> statistics = {Statistic::kMean, Statistic::kStd,
                                       Statistic::kMin, Statistic::kMax};

  std::size_t dim() const { return statistics.size(); }
  /// Nonempty and duplicate-free, else InvalidArgumentError.
  void Validate() const;
  bool operator==(const FeatureConfig &) const = default;
};

struct BridgeModel {
  std::vector<double> weights;
  double bias = 0.0;
  double clip_floor = 0.6;
  double clip_ceil = 1.0;
  FeatureConfig feature_config;
  StftConfig stft_config;

  /// Zero weights and bias 0.5, the training start point.
  static BridgeModel Initial(const FeatureConfig &features = {},
                             const StftConfig &stft = {});
  /// Throws ModelValidationError when 0 <= floor < ceil <= 1 fails, the
  /// weight count differs from the feature dimension, or a number is not
  /// finite.
  void Validate() const;
  bool operator==(const BridgeModel &) const = default;
};

struct Features {
  std::vector<double> values;
  /// No frame had a usable norm; values are all zero.
  bool silent = false;
};

/// Truncates both signals to the shorter length and pools the per-frame
/// similarity over valid frames (population std).
///
/// Throws LengthMismatchError when lengths differ by more than 1 % and
/// SignalTooShortError when the aligned signal is shorter than one window.
Features ExtractFeatures(const Waveform &noisy, const Waveform &enhanced,
                         const FeatureConfig &cfg = {}, const StftConfig &stft = {});

/// Pools an already computed similarity sequence.
Features PoolSimilarity(const FrameSimilarity &sim, const FeatureConfig &cfg);

struct Prediction {
  double s = 0.0;        // linear output before clipping
  double s_prime = 0.0;  // OA coefficient
};

double Clip(double s, double floor, double ceil);

/// Throws ShapeMismatchError on a feature-dimension mismatch.
Prediction Predict(const BridgeModel &model, std::span<const double> features);

/// Features and prediction for one noisy/enhanced pair with the model's own
/// STFT and feature settings.
Prediction EstimateCoefficient(const BridgeModel &model, const Waveform &noisy,
                               const Waveform &enhanced, bool *silent = nullptr);

struct Example {
  std::vector<double> features;
  double label = 0.0;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

/// Mean squared error of the unclipped output and its exact gradient.
/// Throws EmptyInputError for an empty batch, InvalidArgumentError for labels
/// outside [0, 1] and ShapeMismatchError for wrong feature widths.
LossGrad LossAndGrad(const BridgeModel &model, std::span<const Example> batch);

struct TrainConfig {
  double learning_rate = 1e-4;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 200;
  std::uint64_t seed = 0;
  std::size_t crop_len_samples = 32000;
  /// Run the momentum updates on z-scored features (statistics of the first
  /// epoch) and fold the scaling back into the returned raw weights. With
  /// false, the updates act on the raw pooled features directly.
  bool standardize_features = true;

  void Validate() const;
};

struct TrainItem {
  std::filesystem::path noisy_path;
  std::filesystem::path enhanced_path;
  double label = 0.0;
};

struct TrainResult {
  BridgeModel model;
  /// Training MSE after each epoch, over that epoch's crops.
  std::vector<double> epoch_mse;
  std::vector<std::string> warnings;
};

struct WaveformPair {
  Waveform noisy;
  Waveform enhanced;
  double label = 0.0;
};

/// SGD with classical momentum (v = momentum v - lr g; p = p + v) on the MSE
/// of the unclipped output. Every epoch draws a seeded crop offset per item,
/// then shuffles the item order; the last batch may be short. Bitwise
/// reproducible for a fixed seed.
TrainResult Train(const std::vector<TrainItem> &items, const TrainConfig &cfg,
                  const FeatureConfig &feature_cfg = {}, const StftConfig &stft_cfg = {});

TrainResult TrainOnWaveforms(const std::vector<WaveformPair> &items, const TrainConfig &cfg,
                             const FeatureConfig &feature_cfg = {},
                             const StftConfig &stft_cfg = {});

/// Same optimiser on fixed feature vectors; no cropping.
TrainResult TrainOnFeatures(const std::vector<Example> &examples, const TrainConfig &cfg,
                            const FeatureConfig &feature_cfg = {},
                            const StftConfig &stft_cfg = {});

inline constexpr int kModelFormatVersion = 1;

std::string ModelToJson(const BridgeModel &model);
/// Throws ModelVersionError, ModelSchemaError or ModelValidationError.
BridgeModel ModelFromJson(const std::string &text);

void SaveModel(const BridgeModel &model, const std::filesystem::path &path);
BridgeModel LoadModel(const std::filesystem::path &path);

}  // namespace oabridge

#endif  // OABRIDGE_BRIDGE_H_
