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


#ifndef ADAPU_STUMP_H_
#define ADAPU_STUMP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "adapu/decision_stump.h"
#include "adapu/matrix.h"
#include "adapu/risk.h"
#include "adapu/rng.h"

namespace adapu {

// Error measure used for feasibility and alpha.
enum class Normalization {
  kPerGroup,  // eps / eps_nn
  kOverAll,   // e / e_nn
};

enum class ThresholdStrategy { kRandom, kEven };

// Candidate threshold interval, with pad = v_r/(n_f-1). kWidened is
// [v_min - pad, v_max + pad]; kPseudocode is [v_min - pad, v_min + pad],
// which only covers the low end of the feature.
enum class ThresholdInterval { kWidened, kPseudocode };

std::string_view NormalizationName(Normalization n);
std::string_view ThresholdStrategyName(ThresholdStrategy s);
std::string_view ThresholdIntervalName(ThresholdInterval i);
// These accept the names above and throw std::invalid_argument otherwise.
Normalization ParseNormalization(std::string_view name);
ThresholdStrategy ParseThresholdStrategy(std::string_view name);
ThresholdInterval ParseThresholdInterval(std::string_view name);

// Errors below this are clamped before computing alpha, which caps alpha at
// about 11.51.
inline constexpr double kErrorFloor = 1e-10;

// Feasible errors must be below this rather than 0.5. A candidate whose exact
// error is 0.5 (the previous stump right after a beta = 1 round) would
// otherwise be accepted or rejected by rounding noise, with alpha ~ 1e-14.
inline constexpr double kMaxFeasibleError = 0.5 - 1e-12;

// 0.5 * ln((1 - err) / err) with err clamped to [kErrorFloor, 0.5).
double AlphaFromError(double err);

struct FeatureSummary {
  double min = 0.0;
  double max = 0.0;
  std::size_t unique = 0;
};

FeatureSummary SummarizeFeature(std::span<const double> values);

// Interval thresholds are drawn from. A constant feature yields [v, v].
std::pair<double, double> ThresholdRange(const FeatureSummary& summary,
                                         ThresholdInterval interval);

// K independent uniform draws from ThresholdRange. Throws
// std::invalid_argument on empty input or K < 1.
std::vector<double> SampleThresholds(
    std::span<const double> feature_values, int K, Rng& rng,
    ThresholdInterval interval = ThresholdInterval::kWidened);
// K evenly spaced points across ThresholdRange, endpoints included; K = 1
// gives the midpoint.
std::vector<double> EvenlySpacedThresholds(
    std::span<const double> feature_values, int K,
    ThresholdInterval interval = ThresholdInterval::kWidened);

// Per-feature sorted copy of a set of instances (the rows of `blocks`
// concatenated), built once per training run.
class FeatureIndex {
 public:
  explicit FeatureIndex(std::span<const Matrix* const> blocks);

  std::size_t size() const { return n_; }
  std::size_t dims() const { return summaries_.size(); }
  std::span<const double> sorted_values(std::size_t f) const {
    return {values_.data() + f * n_, n_};
  }
  std::span<const std::uint32_t> order(std::size_t f) const {
    return {order_.data() + f * n_, n_};
  }
  const FeatureSummary& summary(std::size_t f) const { return summaries_[f]; }

  // K thresholds for feature f, drawn (kRandom) or spaced (kEven).
  std::vector<double> Thresholds(std::size_t f, int K,
                                 ThresholdStrategy strategy,
                                 ThresholdInterval interval, Rng& rng) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;        // dims x n, each row sorted ascending
  std::vector<std::uint32_t> order_;  // instance id for each sorted value
  std::vector<FeatureSummary> summaries_;
};

// Per-instance weights of the three target/group slots, zero where an
// instance has no such slot. For labeled data, `positive_plus` carries the
// positives and `unlabeled_minus` the negatives.
struct InstanceWeights {
  std::vector<double> positive_plus;
  std::vector<double> unlabeled_minus;
  std::vector<double> positive_minus;
};

InstanceWeights InstanceWeightsOf(const SignedWeightedView& view);

struct Candidate {
  std::size_t feature = 0;
  std::size_t position = 0;  // index in the feature's threshold list
  DecisionStump stump;
  GroupSums misclassified;
};

struct CandidateVerdict {
  bool feasible = false;
  double key = 0.0;  // smaller is better
};

// Must be safe to call concurrently.
using CandidateJudge = std::function<CandidateVerdict(const GroupSums&)>;

struct ScanOutcome {
  std::optional<Candidate> best;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

// Scores every (feature, threshold, orientation) with binary search and
// compensated prefix sums, and returns the feasible candidate with the
// smallest key. Ties go to the lower feature, then the earlier threshold,
// then left-positive; the result does not depend on `threads`.
ScanOutcome ScanCandidates(const FeatureIndex& index,
                           const InstanceWeights& weights,
                           std::span<const std::vector<double>> thresholds,
                           const CandidateJudge& judge, int threads = 1);

struct StumpSearchOptions {
  int K = 10;
  Normalization mode = Normalization::kPerGroup;
  ThresholdStrategy strategy = ThresholdStrategy::kRandom;
  ThresholdInterval interval = ThresholdInterval::kWidened;
  int threads = 1;
};

struct StumpSearchResult {
  std::optional<DecisionStump> stump;  // nullopt: abstain
  double alpha = 0.0;
  double eps = 0.0;  // eps (per-group) or e (over-all) of the winner
  double E = 0.0;
  ErrorReport report;
  std::size_t candidates_evaluated = 0;
  std::size_t feasible_count = 0;
  bool error_floored = false;

  bool abstained() const { return !stump.has_value(); }
};

// Feasibility of a scored candidate under `mode`.
bool IsFeasible(const ErrorReport& report, Normalization mode);

// Constrained stump search over a signed-weight view. Sorting of the
// instances happens once in the constructor; Generate draws fresh thresholds
// from `rng` on each call.
class StumpGenerator {
 public:
  explicit StumpGenerator(const SignedWeightedView& view);

  StumpSearchResult Generate(const SignedWeightedView& view,
                             const StumpSearchOptions& options,
                             Rng& rng) const;

  // Same search over caller-supplied thresholds (one list per feature).
  StumpSearchResult Search(const SignedWeightedView& view,
                           std::span<const std::vector<double>> thresholds,
                           Normalization mode, int threads = 1) const;

  const FeatureIndex& index() const { return index_; }

 private:
  FeatureIndex index_;
};

// One-off search; builds a StumpGenerator internally.
StumpSearchResult GenerateStump(const SignedWeightedView& view,
                                const StumpSearchOptions& options, Rng& rng);

}  // namespace adapu

#endif  // ADAPU_STUMP_H_
