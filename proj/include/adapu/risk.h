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


#ifndef ADAPU_RISK_H_
#define ADAPU_RISK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "adapu/dataset.h"
#include "adapu/decision_stump.h"
#include "adapu/summation.h"

namespace adapu {

// The three labeled copies that make up the signed-weight dataset.
enum class Group {
  kPositivePlus,    // each positive with target +1, weight prior / n_p
  kUnlabeledMinus,  // each unlabeled with target -1, weight 1 / n_u
  kPositiveMinus,   // each positive with target -1, weight -prior / n_p
};

// Signed-weight PN view of a PUDataset.
//
// Slots are laid out as [P+ (n_p) | U- (n_u) | P- (n_p)]. P+ and P- slot i
// share instance i of the positive matrix. Instances are referenced, so the
// PUDataset must outlive the view.
//
// Stored weights may be rescaled by a positive factor to avoid overflow; the
// weight of the exact recursion is `weights()[i] * weight_scale()`.
class SignedWeightedView {
 public:
  static SignedWeightedView Build(const PUDataset& pu);

  const PUDataset& data() const { return *pu_; }
  double prior() const { return pu_->prior; }
  std::size_t n_p() const { return pu_->n_p(); }
  std::size_t n_u() const { return pu_->n_u(); }
  std::size_t dims() const { return pu_->dims(); }
  std::size_t size() const { return weights_.size(); }
  std::size_t instance_count() const { return n_p() + n_u(); }

  // Instance id in [0, n_p + n_u): positives first, then unlabeled.
  std::size_t instance_index(std::size_t slot) const {
    return slot < instance_count() ? slot : slot - instance_count();
  }
  std::span<const double> instance(std::size_t id) const {
    return id < n_p() ? pu_->positives.row(id) : pu_->unlabeled.row(id - n_p());
  }
  Group group(std::size_t slot) const {
    if (slot < n_p()) return Group::kPositivePlus;
    if (slot < instance_count()) return Group::kUnlabeledMinus;
    return Group::kPositiveMinus;
  }
  int target(std::size_t slot) const {
    return group(slot) == Group::kPositivePlus ? 1 : -1;
  }

  std::span<const double> weights() const { return weights_; }
  std::span<double> mutable_weights() { return weights_; }
  double weight_scale() const { return scale_; }

  // Compensated sum of the stored weights.
  double TotalWeight() const;

  // Multiplies every stored weight by c > 0 and divides the scale by c, so
  // the recursion weights are unchanged.
  void ScaleStored(double c);

  // Divides the stored weights by their absolute sum. Returns the divisor.
  double Rescale();

 private:
  const PUDataset* pu_ = nullptr;
  std::vector<double> weights_;
  double scale_ = 1.0;
};

// Per-group compensated sums (misclassified weight, or total weight).
struct GroupSums {
  DoubleDouble positive_plus;
  DoubleDouble unlabeled_minus;
  DoubleDouble positive_minus;

  DoubleDouble Total() const {
    return positive_plus + unlabeled_minus + positive_minus;
  }
};

struct GroupErrors {
  double positive_plus = 0.0;
  double unlabeled_minus = 0.0;
  double positive_minus = 0.0;
};

struct ErrorReport {
  double E = 0.0;       // misclassified weight
  double Z = 0.0;       // total weight
  double e = 0.0;       // E / Z
  double e_nn = 0.0;    // misclassified U- and P- weight over Z
  double eps = 0.0;     // prior*eps(P+) + eps(U-) - prior*eps(P-)
  double eps_nn = 0.0;  // eps(U-) - prior*eps(P-)
  GroupErrors group_errors;
  // Z == 0: e and e_nn are NaN and over-all normalization is undefined.
  bool degenerate_total = false;
};

// Assembles a report from misclassified and total group sums. A group with
// total weight exactly zero gets error 0.
ErrorReport MakeErrorReport(const GroupSums& misclassified,
                            const GroupSums& totals, double prior);

GroupSums GroupTotals(const SignedWeightedView& view);

// Scores one stump against the current weights with a direct pass over all
// slots.
ErrorReport ScoreStump(const SignedWeightedView& view, const DecisionStump& h);

struct WeightUpdate {
  double total_weight = 0.0;  // stored scale
  bool overflow = false;      // some weight became non-finite
};

// w <- w * exp(-effective_alpha * y * h(x)). Signs are preserved.
WeightUpdate UpdateWeights(SignedWeightedView& view, const DecisionStump& h,
                           double effective_alpha);

// Empirical PU exponential loss sum_D w1(x,y) exp(-y H(x)) given the margin
// H(x) of every instance (positives first, then unlabeled). Weights are the
// t=1 weights regardless of the state of `view`. May be negative.
double ExpLoss(const SignedWeightedView& view, std::span<const double> margins);

// Zero-one PU risk from predictions on the positive and unlabeled samples:
// prior*P[f(P)=-1] + P[f(U)=+1] - prior*P[f(P)=+1]. With `clamp_nonnegative`
// the last two terms are floored at zero together.
double ZeroOnePuRisk(std::span<const int> positive_predictions,
                     std::span<const int> unlabeled_predictions, double prior,
                     bool clamp_nonnegative);

}  // namespace adapu

#endif  // ADAPU_RISK_H_
