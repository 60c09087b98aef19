// oabridge/bridge.cc

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "oabridge/random.h"

namespace oabridge {

namespace {

using Json = nlohmann::ordered_json;

Waveform Slice(const Waveform &w, std::size_t offset, std::size_t len) {
  Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                     w.samples.begin() + static_cast<std::ptrdiff_t>(offset + len));
  return out;
}

void CheckLabels(const std::vector<double> &labels, std::vector<std::string> *warnings) {
  bool pos = false, neg = false;
  for (double y : labels) {
    if (!(y >= 0.0 && y <= 1.0))
      throw InvalidArgumentError(fmt::format("label {} outside [0, 1]", y));
    (y >= 0.5 ? pos : neg) = true;
  }
  if (!(pos && neg))
    warnings->push_back("training set holds a single class; the bridge cannot learn a contrast");
}

// Shared optimiser. `features_for_epoch` fills the feature matrix for one
// epoch (drawing crops from the rng if it needs to) before the shuffle.
template <typename FeatureFn>
TrainResult RunSgd(const std::vector<double> &labels, const TrainConfig &cfg,
                   const FeatureConfig &feature_cfg, const StftConfig &stft_cfg,
                   FeatureFn &&features_for_epoch) {
  cfg.Validate();
  feature_cfg.Validate();
  stft_cfg.Validate();
  if (labels.empty()) throw EmptyInputError("empty training set");

  TrainResult result;
  CheckLabels(labels, &result.warnings);

  const std::size_t n = labels.size();
  const std::size_t dim = feature_cfg.dim();
  Rng rng(cfg.seed);

  // Parameters live in the (possibly standardised) feature space:
  // S = u . (f - mean) / scale + c.
  std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
  std::vector<double> u(dim, 0.0), vel_u(dim, 0.0);
  double c = 0.5, vel_c = 0.0;

  std::vector<std::vector<double>> feats;
  std::vector<Example> z(n);
  std::vector<std::size_t> order(n);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    features_for_epoch(&rng, &feats);

    if (epoch == 0 && cfg.standardize_features) {
      for (std::size_t d = 0; d < dim; ++d) {
        double m = 0.0;
        for (const auto &f : feats) m += f[d];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (const auto &f : feats) var += (f[d] - m) * (f[d] - m);
        const double sd = std::sqrt(var / static_cast<double>(n));
        mean[d] = m;
        scale[d] = sd < 1e-12 ? 1.0 : sd;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      z[i].label = labels[i];
      z[i].features.resize(dim);
      for (std::size_t d = 0; d < dim; ++d)
        z[i].features[d] = (feats[i][d] - mean[d]) / scale[d];
    }

    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.Shuffle(&order);

    BridgeModel inner = BridgeModel::Initial(feature_cfg, stft_cfg);
    std::vector<Example> batch;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(z[order[k]]);
      inner.weights = u;
      inner.bias = c;
      const LossGrad g = LossAndGrad(inner, batch);
      for (std::size_t d = 0; d < dim; ++d) {
        vel_u[d] = cfg.momentum * vel_u[d] - cfg.learning_rate * g.grad_w[d];
        u[d] += vel_u[d];
      }
      vel_c = cfg.momentum * vel_c - cfg.learning_rate * g.grad_b;
      c += vel_c;
    }

    inner.weights = u;
    inner.bias = c;
    result.epoch_mse.push_back(LossAndGrad(inner, z).loss);
  }

  BridgeModel model = BridgeModel::Initial(feature_cfg, stft_cfg);
  model.bias = c;
  for (std::size_t d = 0; d < dim; ++d) {
    model.weights[d] = u[d] / scale[d];
    model.bias -= u[d] * mean[d] / scale[d];
  }
  result.model = std::move(model);
  return result;
}

}  // namespace

std::string StatisticName(Statistic s) {
  switch (s) {
    case Statistic::kMean: return "mean";
    case Statistic::kStd: return "std";
    case Statistic::kMin: return "min";
    case Statistic::kMax: return "max";
  }
  return "?";
}

Statistic ParseStatistic(const std::string &name) {
  if (name == "mean") return Statistic::kMean;
  if (name == "std") return Statistic::kStd;
  if (name == "min") return Statistic::kMin;
  if (name == "max") return Statistic::kMax;
  throw ModelSchemaError(fmt::format("unknown feature statistic '{}'", name));
}

void FeatureConfig::Validate() const {
  if (statistics.empty()) throw InvalidArgumentError("feature config has no statistics");
  std::set<Statistic> seen(statistics.begin(), statistics.end());
  if (seen.size() != statistics.size())
    throw InvalidArgumentError("feature config lists a statistic twice");
}

BridgeModel BridgeModel::Initial(const FeatureConfig &features, const StftConfig &stft) {
  BridgeModel m;
  m.feature_config = features;
  m.stft_config = stft;
  m.weights.assign(features.dim(), 0.0);
  m.bias = 0.5;
  return m;
}

void BridgeModel::Validate() const {
  try {
    feature_config.Validate();
    stft_config.Validate();
  } catch (const InvalidArgumentError &e) {
    throw ModelValidationError(e.what());
  }
  if (weights.size() != feature_config.dim())
    throw ModelValidationError(fmt::format("{} weights for {} features", weights.size(),
                                           feature_config.dim()));
  for (double w : weights)
    if (!std::isfinite(w)) throw ModelValidationError("non-finite weight");
  if (!std::isfinite(bias)) throw ModelValidationError("non-finite bias");
  if (!(clip_floor >= 0.0 && clip_floor < clip_ceil && clip_ceil <= 1.0))
    throw ModelValidationError(fmt::format(
        "clip range [{}, {}] violates 0 <= floor < ceil <= 1", clip_floor, clip_ceil));
}

Features PoolSimilarity(const FrameSimilarity &sim, const FeatureConfig &cfg) {
  Features out;
  out.values.assign(cfg.dim(), 0.0);
  std::vector<double> v;
  for (std::size_t t = 0; t < sim.values.size(); ++t)
    if (sim.valid[t]) v.push_back(sim.values[t]);
  if (v.empty()) {
    out.silent = true;
    return out;
  }
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());

  for (std::size_t d = 0; d < cfg.dim(); ++d) {
    switch (cfg.statistics[d]) {
      case Statistic::kMean: out.values[d] = mean; break;
      case Statistic::kStd: out.values[d] = std::sqrt(var / n); break;
      case Statistic::kMin: out.values[d] = *lo; break;
      case Statistic::kMax: out.values[d] = *hi; break;
    }
  }
  return out;
}

Features ExtractFeatures(const Waveform &noisy, const Waveform &enhanced,
                         const FeatureConfig &cfg, const StftConfig &stft) {
  cfg.Validate();
  CheckPipelineRate(noisy);
  CheckPipelineRate(enhanced);
  const std::size_t len = AlignedLength(noisy.size(), enhanced.size());
  const Waveform a = len == noisy.size() ? noisy : Slice(noisy, 0, len);
  const Waveform b = len == enhanced.size() ? enhanced : Slice(enhanced, 0, len);
  return PoolSimilarity(FrameCosineSimilarity(Stft(a, stft), Stft(b, stft)), cfg);
}

double Clip(double s, double floor, double ceil) {
  if (!(floor < ceil))
    throw InvalidArgumentError(fmt::format("clip floor {} not below ceiling {}", floor, ceil));
  return std::max(floor, std::min(ceil, s));
}

Prediction Predict(const BridgeModel &model, std::span<const double> features) {
  if (features.size() != model.weights.size())
    throw ShapeMismatchError(fmt::format("{} features for a {}-input model",
                                         features.size(), model.weights.size()));
  Prediction p;
  p.s = model.bias;
  for (std::size_t d = 0; d < features.size(); ++d) p.s += model.weights[d] * features[d];
  p.s_prime = Clip(p.s, model.clip_floor, model.clip_ceil);
  return p;
}

Prediction EstimateCoefficient(const BridgeModel &model, const Waveform &noisy,
                               const Waveform &enhanced, bool *silent) {
  const Features f =
      ExtractFeatures(noisy, enhanced, model.feature_config, model.stft_config);
  if (silent) *silent = f.silent;
  return Predict(model, f.values);
}

LossGrad LossAndGrad(const BridgeModel &model, std::span<const Example> batch) {
  if (batch.empty()) throw EmptyInputError("empty batch");
  const std::size_t dim = model.weights.size();
  LossGrad out;
  out.grad_w.assign(dim, 0.0);
  for (const Example &ex : batch) {
    if (!(ex.label >= 0.0 && ex.label <= 1.0))
      throw InvalidArgumentError(fmt::format("label {} outside [0, 1]", ex.label));
    const double err = Predict(model, ex.features).s - ex.label;
    out.loss += err * err;
    for (std::size_t d = 0; d < dim; ++d) out.grad_w[d] += 2.0 * err * ex.features[d];
    out.grad_b += 2.0 * err;
  }
  const double n = static_cast<double>(batch.size());
  out.loss /= n;
  for (double &g : out.grad_w) g /= n;
  out.grad_b /= n;
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw InvalidArgumentError(fmt::format("learning rate {} must be >= 0", learning_rate));
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw InvalidArgumentError(fmt::format("momentum {} outside [0, 1)", momentum));
  if (batch_size < 1) throw InvalidArgumentError("batch size must be positive");
  if (epochs < 1) throw InvalidArgumentError("epochs must be positive");
  if (crop_len_samples < 1) throw InvalidArgumentError("crop length must be positive");
}

TrainResult TrainOnFeatures(const std::vector<Example> &examples, const TrainConfig &cfg,
                            const FeatureConfig &feature_cfg, const StftConfig &stft_cfg) {
  std::vector<double> labels;
  for (const auto &ex : examples) {
    if (ex.features.size() != feature_cfg.dim())
      throw ShapeMismatchError(fmt::format("{} features, config has {}", ex.features.size(),
                                           feature_cfg.dim()));
    labels.push_back(ex.label);
  }
  return RunSgd(labels, cfg, feature_cfg, stft_cfg,
                [&](Rng *, std::vector<std::vector<double>> *feats) {
                  if (!feats->empty()) return;
                  for (const auto &ex : examples) feats->push_back(ex.features);
                });
}

TrainResult TrainOnWaveforms(const std::vector<WaveformPair> &items, const TrainConfig &cfg,
                             const FeatureConfig &feature_cfg, const StftConfig &stft_cfg) {
  std::vector<double> labels;
  std::vector<std::size_t> lengths;
  for (const auto &it : items) {
    CheckPipelineRate(it.noisy);
    CheckPipelineRate(it.enhanced);
    lengths.push_back(AlignedLength(it.noisy.size(), it.enhanced.size()));
    labels.push_back(it.label);
  }
  // Crops repeat whenever an item is no longer than the crop, so features are
  // cached per (item, offset).
  std::vector<std::map<std::size_t, std::vector<double>>> cache(items.size());
  return RunSgd(
      labels, cfg, feature_cfg, stft_cfg,
      [&](Rng *rng, std::vector<std::vector<double>> *feats) {
        feats->resize(items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
          const std::size_t len = lengths[i];
          std::size_t offset = 0, crop = len;
          if (len > cfg.crop_len_samples) {
            crop = cfg.crop_len_samples;
            offset = static_cast<std::size_t>(rng->Below(len - crop + 1));
          }
          auto hit = cache[i].find(offset);
          if (hit == cache[i].end()) {
            const Features f = ExtractFeatures(Slice(items[i].noisy, offset, crop),
                                               Slice(items[i].enhanced, offset, crop),
                                               feature_cfg, stft_cfg);
            hit = cache[i].emplace(offset, f.values).first;
          }
          (*feats)[i] = hit->second;
        }
      });
}

TrainResult Train(const std::vector<TrainItem> &items, const TrainConfig &cfg,
                  const FeatureConfig &feature_cfg, const StftConfig &stft_cfg) {
  std::vector<WaveformPair> pairs;
  pairs.reserve(items.size());
  for (const auto &it : items)
    pairs.push_back({ReadWav(it.noisy_path), ReadWav(it.enhanced_path), it.label});
  return TrainOnWaveforms(pairs, cfg, feature_cfg, stft_cfg);
}

std::string ModelToJson(const BridgeModel &model) {
  model.Validate();
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["stft"] = {{"window_len", model.stft_config.window_len},
               {"hop_len", model.stft_config.hop_len}};
  Json names = Json::array();
  for (Statistic s : model.feature_config.statistics) names.push_back(StatisticName(s));
  j["features"] = names;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["clip_floor"] = model.clip_floor;
  j["clip_ceil"] = model.clip_ceil;
  return j.dump(2) + "\n";
}

BridgeModel ModelFromJson(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ModelSchemaError(fmt::format("model file is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ModelSchemaError("model file is not a JSON object");

  auto require = [&](const Json &obj, const char *key) -> const Json & {
    auto it = obj.find(key);
    if (it == obj.end()) throw ModelSchemaError(fmt::format("missing field '{}'", key));
    return *it;
  };
  auto number = [&](const Json &obj, const char *key) {
    const Json &v = require(obj, key);
    if (!v.is_number()) throw ModelSchemaError(fmt::format("field '{}' must be a number", key));
    return v.get<double>();
  };
  auto integer = [&](const Json &obj, const char *key) {
    const Json &v = require(obj, key);
    if (!v.is_number_integer())
      throw ModelSchemaError(fmt::format("field '{}' must be an integer", key));
    return v.get<int>();
  };

  const int version = integer(j, "format_version");
  if (version != kModelFormatVersion)
    throw ModelVersionError(fmt::format("model format_version {} is not supported (expected {})",
                                        version, kModelFormatVersion));

  BridgeModel m;
  const Json &stft = require(j, "stft");
  if (!stft.is_object()) throw ModelSchemaError("field 'stft' must be an object");
  m.stft_config.window_len = integer(stft, "window_len");
  m.stft_config.hop_len = integer(stft, "hop_len");

  const Json &names = require(j, "features");
  if (!names.is_array()) throw ModelSchemaError("field 'features' must be an array");
  m.feature_config.statistics.clear();
  for (const auto &n : names) {
    if (!n.is_string()) throw ModelSchemaError("feature names must be strings");
    m.feature_config.statistics.push_back(ParseStatistic(n.get<std::string>()));
  }

  const Json &weights = require(j, "weights");
  if (!weights.is_array()) throw ModelSchemaError("field 'weights' must be an array");
  for (const auto &w : weights) {
    if (!w.is_number()) throw ModelSchemaError("weights must be numbers");
    m.weights.push_back(w.get<double>());
  }
  m.bias = number(j, "bias");
  m.clip_floor = number(j, "clip_floor");
  m.clip_ceil = number(j, "clip_ceil");
  m.Validate();
  return m;
}

void SaveModel(const BridgeModel &model, const std::filesystem::path &path) {
  const std::string text = ModelToJson(model);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write model {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

BridgeModel LoadModel(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open model {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ModelFromJson(ss.str());
}

}  // namespace oabridge
