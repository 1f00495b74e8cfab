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


#include "adapu/stump.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace adapu {

std::string_view OrientationName(Orientation o) {
  return o == Orientation::kLeftPositive ? "left-positive" : "right-positive";
}

Orientation ParseOrientation(std::string_view name) {
  if (name == "left-positive") return Orientation::kLeftPositive;
  if (name == "right-positive") return Orientation::kRightPositive;
  throw std::invalid_argument("unknown orientation '" + std::string(name) +
                              "'");
}

std::string_view NormalizationName(Normalization n) {
  return n == Normalization::kPerGroup ? "per-group" : "over-all";
}

std::string_view ThresholdStrategyName(ThresholdStrategy s) {
  return s == ThresholdStrategy::kRandom ? "random" : "even";
}

std::string_view ThresholdIntervalName(ThresholdInterval i) {
  return i == ThresholdInterval::kWidened ? "widened" : "pseudocode";
}

Normalization ParseNormalization(std::string_view name) {
  if (name == "per-group") return Normalization::kPerGroup;
  if (name == "over-all") return Normalization::kOverAll;
  throw std::invalid_argument("unknown normalization '" + std::string(name) +
                              "' (expected per-group or over-all)");
}

ThresholdStrategy ParseThresholdStrategy(std::string_view name) {
  if (name == "random") return ThresholdStrategy::kRandom;
  if (name == "even") return ThresholdStrategy::kEven;
  throw std::invalid_argument("unknown threshold strategy '" +
                              std::string(name) + "' (expected random or even)");
}

ThresholdInterval ParseThresholdInterval(std::string_view name) {
  if (name == "widened") return ThresholdInterval::kWidened;
  if (name == "pseudocode") return ThresholdInterval::kPseudocode;
  throw std::invalid_argument("unknown threshold interval '" +
                              std::string(name) +
                              "' (expected widened or pseudocode)");
}

double AlphaFromError(double err) {
  if (!(err < 0.5)) return 0.0;
  const double e = std::max(err, kErrorFloor);
  return 0.5 * std::log((1.0 - e) / e);
}

FeatureSummary SummarizeFeature(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("cannot summarize an empty feature");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  FeatureSummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.unique = static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  return s;
}

std::pair<double, double> ThresholdRange(const FeatureSummary& summary,
                                         ThresholdInterval interval) {
  if (summary.unique <= 1) return {summary.min, summary.min};
  const double pad = (summary.max - summary.min) /
                     static_cast<double>(summary.unique - 1);
  const double upper_base =
      interval == ThresholdInterval::kWidened ? summary.max : summary.min;
  return {summary.min - pad, upper_base + pad};
}

namespace {

std::vector<double> DrawThresholds(const FeatureSummary& summary, int K,
                                   ThresholdStrategy strategy,
                                   ThresholdInterval interval, Rng& rng) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  const auto count = static_cast<std::size_t>(K);
  if (summary.unique <= 1) return std::vector<double>(count, summary.min);
  const auto [lo, hi] = ThresholdRange(summary, interval);
  std::vector<double> out(count);
  if (strategy == ThresholdStrategy::kRandom) {
    for (double& v : out) v = rng.Uniform(lo, hi);
  } else if (count == 1) {
    out[0] = lo + 0.5 * (hi - lo);
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      out[k] = lo + (hi - lo) * static_cast<double>(k) /
                        static_cast<double>(count - 1);
    }
    out.back() = hi;
  }
  return out;
}

struct FeatureBest {
  std::optional<Candidate> best;
  double key = 0.0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

// Scratch buffers reused across features by one worker.
struct PrefixBuffers {
  std::vector<DoubleDouble> plus, unlabeled, positive_minus;

  void Build(std::span<const std::uint32_t> order, const InstanceWeights& w) {
    const std::size_t n = order.size();
    plus.resize(n + 1);
    unlabeled.resize(n + 1);
    positive_minus.resize(n + 1);
    plus[0] = unlabeled[0] = positive_minus[0] = DoubleDouble{};
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t id = order[i];
      plus[i + 1] = plus[i];
      plus[i + 1].Add(w.positive_plus[id]);
      unlabeled[i + 1] = unlabeled[i];
      unlabeled[i + 1].Add(w.unlabeled_minus[id]);
      positive_minus[i + 1] = positive_minus[i];
      positive_minus[i + 1].Add(w.positive_minus[id]);
    }
  }
};

FeatureBest ScanFeature(const FeatureIndex& index, std::size_t f,
                        const InstanceWeights& weights,
                        std::span<const double> thresholds,
                        const CandidateJudge& judge, PrefixBuffers& buffers) {
  FeatureBest out;
  buffers.Build(index.order(f), weights);
  const auto values = index.sorted_values(f);
  const std::size_t n = values.size();
  const DoubleDouble& total_plus = buffers.plus[n];
  const DoubleDouble& total_unlabeled = buffers.unlabeled[n];
  const DoubleDouble& total_pm = buffers.positive_minus[n];

  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double v = thresholds[k];
    // Instances strictly below v go left.
    const auto left_count = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), v) - values.begin());
    const DoubleDouble& left_plus = buffers.plus[left_count];
    const DoubleDouble& left_unlabeled = buffers.unlabeled[left_count];
    const DoubleDouble& left_pm = buffers.positive_minus[left_count];
    const DoubleDouble right_plus = total_plus - left_plus;
    const DoubleDouble right_unlabeled = total_unlabeled - left_unlabeled;
    const DoubleDouble right_pm = total_pm - left_pm;

    for (const Orientation o :
         {Orientation::kLeftPositive, Orientation::kRightPositive}) {
      GroupSums miss;
      if (o == Orientation::kLeftPositive) {
        miss = {right_plus, left_unlabeled, left_pm};
      } else {
        miss = {left_plus, right_unlabeled, right_pm};
      }
      ++out.evaluated;
      const CandidateVerdict verdict = judge(miss);
      if (!verdict.feasible) continue;
      ++out.feasible;
      if (!out.best || verdict.key < out.key) {
        out.best = Candidate{f, k, DecisionStump{f, v, o}, miss};
        out.key = verdict.key;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> SampleThresholds(std::span<const double> feature_values,
                                     int K, Rng& rng,
                                     ThresholdInterval interval) {
  return DrawThresholds(SummarizeFeature(feature_values), K,
                        ThresholdStrategy::kRandom, interval, rng);
}

std::vector<double> EvenlySpacedThresholds(
    std::span<const double> feature_values, int K,
    ThresholdInterval interval) {
  Rng unused(0);  // kEven draws nothing
  return DrawThresholds(SummarizeFeature(feature_values), K,
                        ThresholdStrategy::kEven, interval, unused);
}

FeatureIndex::FeatureIndex(std::span<const Matrix* const> blocks) {
  std::size_t dims = 0;
  for (const Matrix* m : blocks) {
    if (m->rows() == 0) continue;
    if (dims != 0 && m->cols() != dims) {
      throw std::invalid_argument("feature index blocks differ in dimension");
    }
    dims = m->cols();
    n_ += m->rows();
  }
  if (n_ == 0) throw std::invalid_argument("feature index needs instances");
  if (n_ > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("too many instances for the feature index");
  }
  values_.resize(dims * n_);
  order_.resize(dims * n_);
  summaries_.resize(dims);

  std::vector<double> column(n_);
  std::vector<std::uint32_t> perm(n_);
  for (std::size_t f = 0; f < dims; ++f) {
    std::size_t i = 0;
    for (const Matrix* m : blocks) {
      for (std::size_t r = 0; r < m->rows(); ++r) column[i++] = (*m)(r, f);
    }
    std::iota(perm.begin(), perm.end(), std::uint32_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
      return column[a] < column[b] || (column[a] == column[b] && a < b);
    });
    double* vals = values_.data() + f * n_;
    std::uint32_t* ord = order_.data() + f * n_;
    FeatureSummary& s = summaries_[f];
    s.unique = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      ord[j] = perm[j];
      vals[j] = column[perm[j]];
      if (j == 0 || vals[j] != vals[j - 1]) ++s.unique;
    }
    s.min = vals[0];
    s.max = vals[n_ - 1];
  }
}

std::vector<double> FeatureIndex::Thresholds(std::size_t f, int K,
                                             ThresholdStrategy strategy,
                                             ThresholdInterval interval,
                                             Rng& rng) const {
  return DrawThresholds(summaries_[f], K, strategy, interval, rng);
}

InstanceWeights InstanceWeightsOf(const SignedWeightedView& view) {
  const std::size_t n = view.instance_count();
  const std::size_t n_p = view.n_p();
  const auto w = view.weights();
  InstanceWeights out;
  out.positive_plus.assign(n, 0.0);
  out.unlabeled_minus.assign(n, 0.0);
  out.positive_minus.assign(n, 0.0);
  for (std::size_t i = 0; i < n_p; ++i) {
    out.positive_plus[i] = w[i];
    out.positive_minus[i] = w[n + i];
  }
  for (std::size_t i = n_p; i < n; ++i) out.unlabeled_minus[i] = w[i];
  return out;
}

ScanOutcome ScanCandidates(const FeatureIndex& index,
                           const InstanceWeights& weights,
                           std::span<const std::vector<double>> thresholds,
                           const CandidateJudge& judge, int threads) {
  const std::size_t d = index.dims();
  if (thresholds.size() != d) {
    throw std::invalid_argument("need one threshold list per feature: got " +
                                std::to_string(thresholds.size()) +
                                " lists for " + std::to_string(d) +
                                " features");
  }
  if (weights.positive_plus.size() != index.size() ||
      weights.unlabeled_minus.size() != index.size() ||
      weights.positive_minus.size() != index.size()) {
    throw std::invalid_argument("instance weights do not match the index");
  }

  std::vector<FeatureBest> per_feature(d);
  const std::size_t workers = std::clamp<std::size_t>(
      threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, d);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    PrefixBuffers buffers;
    for (std::size_t f = begin; f < end; ++f) {
      per_feature[f] =
          ScanFeature(index, f, weights, thresholds[f], judge, buffers);
    }
  };
  if (workers == 1) {
    run_range(0, d);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (d + workers - 1) / workers;
    for (std::size_t begin = 0; begin < d; begin += chunk) {
      pool.emplace_back(run_range, begin, std::min(d, begin + chunk));
    }
  }

  // Reduction in feature order keeps the tie-break independent of threads.
  ScanOutcome outcome;
  double best_key = 0.0;
  for (auto& fb : per_feature) {
    outcome.evaluated += fb.evaluated;
    outcome.feasible += fb.feasible;
    if (fb.best && (!outcome.best || fb.key < best_key)) {
      outcome.best = std::move(fb.best);
      best_key = fb.key;
    }
  }
  return outcome;
}

bool IsFeasible(const ErrorReport& report, Normalization mode) {
  if (mode == Normalization::kPerGroup) {
    return report.eps >= 0.0 && report.eps < kMaxFeasibleError &&
           report.eps_nn >= 0.0;
  }
  return !report.degenerate_total && report.e >= 0.0 &&
         report.e < kMaxFeasibleError && report.e_nn >= 0.0;
}

StumpGenerator::StumpGenerator(const SignedWeightedView& view)
    : index_([&view] {
        const Matrix* blocks[] = {&view.data().positives,
                                  &view.data().unlabeled};
        return FeatureIndex(blocks);
      }()) {}

StumpSearchResult StumpGenerator::Search(
    const SignedWeightedView& view,
    std::span<const std::vector<double>> thresholds, Normalization mode,
    int threads) const {
  if (view.dims() != index_.dims() || view.instance_count() != index_.size()) {
    throw std::invalid_argument(
        "view does not match the instances this generator was built for");
  }
  const GroupSums totals = GroupTotals(view);
  const double prior = view.prior();
  if (mode == Normalization::kOverAll && totals.Total().value() == 0.0) {
    throw std::domain_error("degenerate total weight");
  }
  const CandidateJudge judge = [&](const GroupSums& miss) {
    const ErrorReport r = MakeErrorReport(miss, totals, prior);
    return CandidateVerdict{IsFeasible(r, mode), r.E};
  };
  const ScanOutcome outcome = ScanCandidates(index_, InstanceWeightsOf(view),
                                             thresholds, judge, threads);

  StumpSearchResult result;
  result.candidates_evaluated = outcome.evaluated;
  result.feasible_count = outcome.feasible;
  if (!outcome.best) return result;

  result.stump = outcome.best->stump;
  result.report = MakeErrorReport(outcome.best->misclassified, totals, prior);
  result.E = result.report.E;
  result.eps = mode == Normalization::kPerGroup ? result.report.eps
                                                : result.report.e;
  result.error_floored = result.eps < kErrorFloor;
  result.alpha = AlphaFromError(result.eps);
  return result;
}

StumpSearchResult StumpGenerator::Generate(const SignedWeightedView& view,
                                           const StumpSearchOptions& options,
                                           Rng& rng) const {
  if (view.dims() != index_.dims()) {
    throw std::invalid_argument("view dimension does not match feature count");
  }
  std::vector<std::vector<double>> thresholds(index_.dims());
  for (std::size_t f = 0; f < index_.dims(); ++f) {
    thresholds[f] = index_.Thresholds(f, options.K, options.strategy,
                                      options.interval, rng);
  }
  return Search(view, thresholds, options.mode, options.threads);
}

StumpSearchResult GenerateStump(const SignedWeightedView& view,
                                const StumpSearchOptions& options, Rng& rng) {
  return StumpGenerator(view).Generate(view, options, rng);
}

}  // namespace adapu
