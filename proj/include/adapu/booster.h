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


#ifndef ADAPU_BOOSTER_H_
#define ADAPU_BOOSTER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adapu/dataset.h"
#include "adapu/decision_stump.h"
#include "adapu/risk.h"
#include "adapu/rng.h"
#include "adapu/stump.h"

namespace adapu {

enum class Algorithm { kAdaPu, kAdaBoost };

std::string_view AlgorithmName(Algorithm a);
Algorithm ParseAlgorithm(std::string_view name);

struct EnsembleMember {
  double weight = 0.0;  // beta * alpha, strictly positive
  DecisionStump stump;

  friend bool operator==(const EnsembleMember&, const EnsembleMember&) = default;
};

struct EnsembleMetadata {
  Algorithm algorithm = Algorithm::kAdaPu;
  double prior = 0.0;  // 0 for the labeled baseline
  Normalization mode = Normalization::kPerGroup;
  ThresholdStrategy strategy = ThresholdStrategy::kRandom;
  ThresholdInterval interval = ThresholdInterval::kWidened;
  double beta = 1.0;
  int K = 10;
  std::uint64_t seed = 0;
  int rounds = 0;  // rounds actually run, abstained ones included
  std::size_t dimension = 0;

  friend bool operator==(const EnsembleMetadata&,
                         const EnsembleMetadata&) = default;
};

// Weighted vote of decision stumps. score(x) = sum weight * h(x) and
// predict(x) = sign(score(x)) with sign(0) = +1.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(EnsembleMetadata metadata) : metadata_(metadata) {}

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const EnsembleMetadata& metadata() const { return metadata_; }
  EnsembleMetadata& mutable_metadata() { return metadata_; }

  // Throws std::invalid_argument unless weight > 0 and finite.
  void Append(double weight, const DecisionStump& stump);

  double Score(std::span<const double> x) const;
  int Predict(std::span<const double> x) const {
    return Score(x) >= 0.0 ? 1 : -1;
  }

  // Row-wise; throw std::invalid_argument on dimension mismatch.
  std::vector<double> Score(const Matrix& instances) const;
  std::vector<int> Predict(const Matrix& instances) const;

  // Ensemble made of the first `count` members.
  Ensemble Prefix(std::size_t count) const;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;

 private:
  EnsembleMetadata metadata_;
  std::vector<EnsembleMember> members_;
};

struct TrainConfig {
  int rounds = 100;
  double beta = 1.0;
  int K = 10;
  Normalization mode = Normalization::kPerGroup;
  ThresholdStrategy strategy = ThresholdStrategy::kRandom;
  ThresholdInterval interval = ThresholdInterval::kWidened;
  std::uint64_t seed = 0;
  bool stop_on_nonpositive_total = true;
  // Divide the weights by their absolute sum after every round.
  bool rescale_weights = true;
  int threads = 1;

  // Throws std::invalid_argument when rounds < 1, K < 1, beta outside (0, 1]
  // or threads < 1.
  void Validate() const;
};

struct RoundLog {
  int round = 0;  // 1-based
  std::optional<DecisionStump> stump;
  double alpha = 0.0;
  double eps = 0.0;
  double E = 0.0;  // in the stored weight scale
  double Z = 0.0;  // total weight before the update, stored scale
  bool abstained = false;
  double train_pu_risk = 0.0;  // labeled baseline: training zero-one error
  double wall_time_ms = 0.0;
  std::string error;  // non-empty when training aborted in this round
};

enum class StopReason { kCompleted, kNonPositiveTotal, kWeightOverflow };

struct TrainResult {
  Ensemble ensemble;
  std::vector<RoundLog> logs;
  StopReason stop = StopReason::kCompleted;

  bool ok() const { return stop != StopReason::kWeightOverflow; }
};

// Step-wise AdaPU trainer. Each Step runs one boosting round: stump search,
// ensemble append, weight update. The view and margins stay accessible so
// callers can audit every round.
class AdaPuTrainer {
 public:
  // `pu` must outlive the trainer.
  AdaPuTrainer(const PUDataset& pu, const TrainConfig& config);

  // Returns false once training is over (budget spent, stop condition, or
  // overflow); the round is not run in that case.
  bool Step();
  bool done() const { return done_; }

  const SignedWeightedView& view() const { return view_; }
  SignedWeightedView& mutable_view() { return view_; }
  // The untouched t = 1 view.
  const SignedWeightedView& initial_view() const { return initial_view_; }
  const Ensemble& ensemble() const { return ensemble_; }
  const std::vector<RoundLog>& logs() const { return logs_; }
  // H(x) per instance (positives first, then unlabeled).
  const std::vector<double>& margins() const { return margins_; }
  const StumpSearchResult& last_search() const { return last_search_; }
  const StumpGenerator& generator() const { return generator_; }
  StopReason stop_reason() const { return stop_; }
  // Total weight after the latest update, stored scale.
  double total_weight() const { return total_weight_; }

  TrainResult Finish() &&;

 private:
  const PUDataset& pu_;
  TrainConfig config_;
  SignedWeightedView view_;
  SignedWeightedView initial_view_;
  StumpGenerator generator_;
  Rng rng_;
  Ensemble ensemble_;
  std::vector<RoundLog> logs_;
  std::vector<double> margins_;
  StumpSearchResult last_search_;
  double total_weight_ = 0.0;
  int round_ = 0;
  bool done_ = false;
  StopReason stop_ = StopReason::kCompleted;
};

TrainResult TrainAdaPu(const PUDataset& pu, const TrainConfig& config);

// Classical AdaBoost over the same candidate stumps: uniform start, weights
// normalized every round, feasible iff weighted error in [0, 0.5).
class AdaBoostTrainer {
 public:
  AdaBoostTrainer(const LabeledDataset& data, const TrainConfig& config);

  bool Step();
  bool done() const { return done_; }

  // Normalized weights for the next round.
  const std::vector<double>& weights() const { return weights_; }
  const Ensemble& ensemble() const { return ensemble_; }
  const std::vector<RoundLog>& logs() const { return logs_; }
  const FeatureIndex& index() const { return index_; }

  // Weighted error of `h` under the current weights.
  double WeightedError(const DecisionStump& h) const;

  TrainResult Finish() &&;

 private:
  const LabeledDataset& data_;
  TrainConfig config_;
  FeatureIndex index_;
  Rng rng_;
  std::vector<double> weights_;
  std::vector<double> margins_;
  Ensemble ensemble_;
  std::vector<RoundLog> logs_;
  int round_ = 0;
  bool done_ = false;
};

// Throws DataError on single-class data.
TrainResult TrainAdaBoost(const LabeledDataset& data, const TrainConfig& config);

// {0.0001, 0.001, 0.01, 0.1, 0.2, 0.5, 0.7, 0.9, 1.0}
std::vector<double> DefaultBetaGrid();

struct CvRow {
  double beta = 0.0;
  double mean_risk = 0.0;
  double std_risk = 0.0;
  std::vector<double> fold_risks;
};

struct CvResult {
  double best_beta = 0.0;
  std::vector<CvRow> table;  // grid order
};

// k-fold selection of beta by the clamped zero-one PU risk on held-out PU
// folds. Ties go to the smaller beta.
CvResult CrossValidateBeta(const PUDataset& pu, std::span<const double> grid,
                           const TrainConfig& base_config,
                           const SplitSpec& split);

// Model file: versioned JSON document.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

std::string SerializeEnsemble(const Ensemble& ensemble);
Ensemble DeserializeEnsemble(const std::string& json_text);
void SaveEnsemble(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble LoadEnsemble(const std::filesystem::path& path);

// One CSV row per round; columns follow RoundLog.
void WriteRoundLogCsv(std::span<const RoundLog> logs,
                      const std::filesystem::path& path);

}  // namespace adapu

#endif  // ADAPU_BOOSTER_H_
