/*
 * Copyright 2026 The AdaPU Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "adapu/booster.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "adapu/summation.h"

namespace adapu {
namespace {

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<int> SignsOf(std::span<const double> margins) {
  std::vector<int> out(margins.size());
  for (std::size_t i = 0; i < margins.size(); ++i) {
    out[i] = margins[i] >= 0.0 ? 1 : -1;
  }
  return out;
}

double SampleStd(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  return a == Algorithm::kAdaPu ? "adapu" : "adaboost";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "adapu") return Algorithm::kAdaPu;
  if (name == "adaboost") return Algorithm::kAdaBoost;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void Ensemble::Append(double weight, const DecisionStump& stump) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("ensemble weights must be finite and positive");
  }
  members_.push_back({weight, stump});
}

double Ensemble::Score(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& m : members_) s += m.weight * m.stump.Predict(x);
  return s;
}

std::vector<double> Ensemble::Score(const Matrix& instances) const {
  if (!members_.empty() || metadata_.dimension != 0) {
    const std::size_t d = metadata_.dimension;
    if (d != 0 && instances.cols() != d) {
      throw std::invalid_argument(
          "data has " + std::to_string(instances.cols()) +
          " features but the model expects " + std::to_string(d));
    }
    for (const auto& m : members_) {
      if (m.stump.feature >= instances.cols()) {
        throw std::invalid_argument("model uses feature " +
                                    std::to_string(m.stump.feature) +
                                    " beyond the data dimension");
      }
    }
  }
  std::vector<double> out(instances.rows());
  for (std::size_t r = 0; r < instances.rows(); ++r) {
    out[r] = Score(instances.row(r));
  }
  return out;
}

std::vector<int> Ensemble::Predict(const Matrix& instances) const {
  return SignsOf(Score(instances));
}

Ensemble Ensemble::Prefix(std::size_t count) const {
  Ensemble out(metadata_);
  out.members_.assign(members_.begin(),
                      members_.begin() + std::min(count, members_.size()));
  return out;
}

void TrainConfig::Validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

AdaPuTrainer::AdaPuTrainer(const PUDataset& pu, const TrainConfig& config)
    : pu_(pu),
      config_((config.Validate(), config)),
      view_(SignedWeightedView::Build(pu)),
      initial_view_(SignedWeightedView::Build(pu)),
      generator_(view_),
      rng_(Rng::Stream(config.seed, "thresholds")),
      margins_(pu.n_p() + pu.n_u(), 0.0) {
  EnsembleMetadata meta;
  meta.algorithm = Algorithm::kAdaPu;
  meta.prior = pu.prior;
  meta.mode = config.mode;
  meta.strategy = config.strategy;
  meta.interval = config.interval;
  meta.beta = config.beta;
  meta.K = config.K;
  meta.seed = config.seed;
  meta.dimension = pu.dims();
  ensemble_ = Ensemble(meta);
  total_weight_ = view_.TotalWeight();
}

bool AdaPuTrainer::Step() {
  if (done_) return false;
  if (round_ >= config_.rounds) {
    done_ = true;
    return false;
  }
  const double Z = view_.TotalWeight();
  if ((config_.stop_on_nonpositive_total && Z <= 0.0) ||
      (config_.mode == Normalization::kOverAll && Z == 0.0)) {
    stop_ = StopReason::kNonPositiveTotal;
    done_ = true;
    return false;
  }

  const auto start = std::chrono::steady_clock::now();
  ++round_;
  StumpSearchOptions options;
  options.K = config_.K;
  options.mode = config_.mode;
  options.strategy = config_.strategy;
  options.interval = config_.interval;
  options.threads = config_.threads;
  last_search_ = generator_.Generate(view_, options, rng_);

  RoundLog log;
  log.round = round_;
  log.Z = Z;
  log.abstained = last_search_.abstained();
  if (!log.abstained) {
    const DecisionStump& h = *last_search_.stump;
    const double effective = config_.beta * last_search_.alpha;
    log.stump = h;
    log.alpha = last_search_.alpha;
    log.eps = last_search_.eps;
    log.E = last_search_.E;
    ensemble_.Append(effective, h);
    for (std::size_t i = 0; i < margins_.size(); ++i) {
      margins_[i] += effective * h.Predict(view_.instance(i));
    }
    const WeightUpdate update = UpdateWeights(view_, h, effective);
    if (update.overflow) {
      log.error = "weight overflow";
      stop_ = StopReason::kWeightOverflow;
      done_ = true;
    } else if (config_.rescale_weights) {
      view_.Rescale();
    }
  }
  total_weight_ = view_.TotalWeight();

  const auto signs = SignsOf(margins_);
  const std::span<const int> all(signs);
  log.train_pu_risk = ZeroOnePuRisk(all.first(pu_.n_p()),
                                    all.subspan(pu_.n_p()), pu_.prior, false);
  log.wall_time_ms = ElapsedMs(start);
  logs_.push_back(std::move(log));
  ensemble_.mutable_metadata().rounds = round_;
  if (round_ >= config_.rounds) done_ = true;
  return true;
}

TrainResult AdaPuTrainer::Finish() && {
  return {std::move(ensemble_), std::move(logs_), stop_};
}

TrainResult TrainAdaPu(const PUDataset& pu, const TrainConfig& config) {
  AdaPuTrainer trainer(pu, config);
  while (trainer.Step()) {
  }
  return std::move(trainer).Finish();
}

AdaBoostTrainer::AdaBoostTrainer(const LabeledDataset& data,
                                 const TrainConfig& config)
    : data_(data),
      config_((config.Validate(), data.Validate(), config)),
      index_([&data] {
        const Matrix* blocks[] = {&data.instances};
        return FeatureIndex(blocks);
      }()),
      rng_(Rng::Stream(config.seed, "thresholds")),
      weights_(data.size(), 1.0 / static_cast<double>(data.size())),
      margins_(data.size(), 0.0) {
  if (data.CountLabel(1) == 0 || data.CountLabel(-1) == 0) {
    throw DataError("AdaBoost needs both classes in the training data");
  }
  EnsembleMetadata meta;
  meta.algorithm = Algorithm::kAdaBoost;
  meta.prior = 0.0;
  meta.strategy = config.strategy;
  meta.interval = config.interval;
  meta.beta = config.beta;
  meta.K = config.K;
  meta.seed = config.seed;
  meta.dimension = data.dims();
  ensemble_ = Ensemble(meta);
}

double AdaBoostTrainer::WeightedError(const DecisionStump& h) const {
  DoubleDouble miss, total;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    total.Add(weights_[i]);
    if (h.Predict(data_.instances.row(i)) != data_.labels[i]) {
      miss.Add(weights_[i]);
    }
  }
  return miss.value() / total.value();
}

bool AdaBoostTrainer::Step() {
  if (done_) return false;
  if (round_ >= config_.rounds) {
    done_ = true;
    return false;
  }
  const auto start = std::chrono::steady_clock::now();
  ++round_;
  const std::size_t n = data_.size();

  InstanceWeights w;
  w.positive_plus.assign(n, 0.0);
  w.unlabeled_minus.assign(n, 0.0);
  w.positive_minus.assign(n, 0.0);
  DoubleDouble total;
  for (std::size_t i = 0; i < n; ++i) {
    (data_.labels[i] == 1 ? w.positive_plus : w.unlabeled_minus)[i] =
        weights_[i];
    total.Add(weights_[i]);
  }
  const double Z = total.value();
  std::vector<std::vector<double>> thresholds(index_.dims());
  for (std::size_t f = 0; f < index_.dims(); ++f) {
    thresholds[f] = index_.Thresholds(f, config_.K, config_.strategy,
                                      config_.interval, rng_);
  }
  const CandidateJudge judge = [Z](const GroupSums& miss) {
    const double E = (miss.positive_plus + miss.unlabeled_minus).value();
    const double err = E / Z;
    return CandidateVerdict{err >= 0.0 && err < kMaxFeasibleError, E};
  };
  const ScanOutcome outcome =
      ScanCandidates(index_, w, thresholds, judge, config_.threads);

  RoundLog log;
  log.round = round_;
  log.Z = Z;
  log.abstained = !outcome.best.has_value();
  if (outcome.best) {
    const DecisionStump& h = outcome.best->stump;
    const double E = (outcome.best->misclassified.positive_plus +
                      outcome.best->misclassified.unlabeled_minus)
                         .value();
    const double err = E / Z;
    const double alpha = AlphaFromError(err);
    const double effective = config_.beta * alpha;
    log.stump = h;
    log.alpha = alpha;
    log.eps = err;
    log.E = E;
    ensemble_.Append(effective, h);

    const double shrink = std::exp(-effective);
    const double grow = std::exp(effective);
    DoubleDouble new_total;
    for (std::size_t i = 0; i < n; ++i) {
      const int pred = h.Predict(data_.instances.row(i));
      margins_[i] += effective * pred;
      weights_[i] *= (pred == data_.labels[i] ? shrink : grow);
      new_total.Add(weights_[i]);
    }
    const double norm = new_total.value();
    for (double& wi : weights_) wi /= norm;
  }

  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if ((margins_[i] >= 0.0 ? 1 : -1) != data_.labels[i]) ++wrong;
  }
  log.train_pu_risk = static_cast<double>(wrong) / static_cast<double>(n);
  log.wall_time_ms = ElapsedMs(start);
  logs_.push_back(std::move(log));
  ensemble_.mutable_metadata().rounds = round_;
  if (round_ >= config_.rounds) done_ = true;
  return true;
}

TrainResult AdaBoostTrainer::Finish() && {
  return {std::move(ensemble_), std::move(logs_), StopReason::kCompleted};
}

TrainResult TrainAdaBoost(const LabeledDataset& data,
                          const TrainConfig& config) {
  AdaBoostTrainer trainer(data, config);
  while (trainer.Step()) {
  }
  return std::move(trainer).Finish();
}

std::vector<double> DefaultBetaGrid() {
  return {0.0001, 0.001, 0.01, 0.1, 0.2, 0.5, 0.7, 0.9, 1.0};
}

CvResult CrossValidateBeta(const PUDataset& pu, std::span<const double> grid,
                           const TrainConfig& base_config,
                           const SplitSpec& split) {
  if (grid.empty()) throw std::invalid_argument("beta grid is empty");
  const auto folds = PuFolds(pu, split);
  CvResult result;
  for (double beta : grid) {
    TrainConfig config = base_config;
    config.beta = beta;
    config.Validate();
    CvRow row;
    row.beta = beta;
    for (const auto& [train, valid] : folds) {
      const TrainResult fit = TrainAdaPu(train, config);
      const auto pred_p = fit.ensemble.Predict(valid.positives);
      const auto pred_u = fit.ensemble.Predict(valid.unlabeled);
      row.fold_risks.push_back(ZeroOnePuRisk(pred_p, pred_u, pu.prior, true));
    }
    row.mean_risk =
        std::accumulate(row.fold_risks.begin(), row.fold_risks.end(), 0.0) /
        static_cast<double>(row.fold_risks.size());
    row.std_risk = SampleStd(row.fold_risks, row.mean_risk);
    result.table.push_back(std::move(row));
  }
  const CvRow* best = &result.table.front();
  for (const auto& row : result.table) {
    if (row.mean_risk < best->mean_risk ||
        (row.mean_risk == best->mean_risk && row.beta < best->beta)) {
      best = &row;
    }
  }
  result.best_beta = best->beta;
  return result;
}

}  // namespace adapu
