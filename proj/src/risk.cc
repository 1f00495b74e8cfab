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


#include "adapu/risk.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adapu {

SignedWeightedView SignedWeightedView::Build(const PUDataset& pu) {
  pu.Validate();
  SignedWeightedView view;
  view.pu_ = &pu;
  const double n_p = static_cast<double>(pu.n_p());
  const double n_u = static_cast<double>(pu.n_u());
  view.weights_.reserve(2 * pu.n_p() + pu.n_u());
  view.weights_.insert(view.weights_.end(), pu.n_p(), pu.prior / n_p);
  view.weights_.insert(view.weights_.end(), pu.n_u(), 1.0 / n_u);
  view.weights_.insert(view.weights_.end(), pu.n_p(), -pu.prior / n_p);
  return view;
}

double SignedWeightedView::TotalWeight() const {
  DoubleDouble sum;
  for (double w : weights_) sum.Add(w);
  return sum.value();
}

void SignedWeightedView::ScaleStored(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("scale factor must be finite and positive");
  }
  for (double& w : weights_) w *= c;
  scale_ /= c;
}

double SignedWeightedView::Rescale() {
  DoubleDouble abs_sum;
  for (double w : weights_) abs_sum.Add(std::abs(w));
  const double s = abs_sum.value();
  if (s > 0.0 && std::isfinite(s)) {
    for (double& w : weights_) w /= s;
    scale_ *= s;
  }
  return s;
}

GroupSums GroupTotals(const SignedWeightedView& view) {
  GroupSums totals;
  const auto w = view.weights();
  const std::size_t n_p = view.n_p();
  const std::size_t n_pu = view.instance_count();
  for (std::size_t i = 0; i < n_p; ++i) totals.positive_plus.Add(w[i]);
  for (std::size_t i = n_p; i < n_pu; ++i) totals.unlabeled_minus.Add(w[i]);
  for (std::size_t i = n_pu; i < w.size(); ++i) totals.positive_minus.Add(w[i]);
  return totals;
}

ErrorReport MakeErrorReport(const GroupSums& misclassified,
                            const GroupSums& totals, double prior) {
  auto ratio = [](const DoubleDouble& part, const DoubleDouble& whole) {
    const double denom = whole.value();
    return denom == 0.0 ? 0.0 : part.value() / denom;
  };
  ErrorReport r;
  r.E = misclassified.Total().value();
  r.Z = totals.Total().value();
  r.group_errors.positive_plus =
      ratio(misclassified.positive_plus, totals.positive_plus);
  r.group_errors.unlabeled_minus =
      ratio(misclassified.unlabeled_minus, totals.unlabeled_minus);
  r.group_errors.positive_minus =
      ratio(misclassified.positive_minus, totals.positive_minus);
  const GroupErrors& g = r.group_errors;
  r.eps = prior * g.positive_plus + g.unlabeled_minus - prior * g.positive_minus;
  r.eps_nn = g.unlabeled_minus - prior * g.positive_minus;
  if (r.Z == 0.0) {
    r.degenerate_total = true;
    r.e = std::numeric_limits<double>::quiet_NaN();
    r.e_nn = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.e = r.E / r.Z;
    r.e_nn =
        (misclassified.unlabeled_minus + misclassified.positive_minus).value() /
        r.Z;
  }
  return r;
}

ErrorReport ScoreStump(const SignedWeightedView& view, const DecisionStump& h) {
  if (h.feature >= view.dims()) {
    throw std::invalid_argument("stump feature index exceeds view dimension");
  }
  GroupSums miss;
  const auto w = view.weights();
  for (std::size_t slot = 0; slot < w.size(); ++slot) {
    const auto x = view.instance(view.instance_index(slot));
    if (h.Predict(x) == view.target(slot)) continue;
    switch (view.group(slot)) {
      case Group::kPositivePlus:
        miss.positive_plus.Add(w[slot]);
        break;
      case Group::kUnlabeledMinus:
        miss.unlabeled_minus.Add(w[slot]);
        break;
      case Group::kPositiveMinus:
        miss.positive_minus.Add(w[slot]);
        break;
    }
  }
  return MakeErrorReport(miss, GroupTotals(view), view.prior());
}

WeightUpdate UpdateWeights(SignedWeightedView& view, const DecisionStump& h,
                           double effective_alpha) {
  if (!(effective_alpha >= 0.0)) {
    throw std::invalid_argument("effective alpha must be non-negative");
  }
  WeightUpdate result;
  if (effective_alpha == 0.0) {
    result.total_weight = view.TotalWeight();
    return result;
  }
  // Only two multipliers exist: correct (y h = +1) and incorrect (y h = -1).
  const double shrink = std::exp(-effective_alpha);
  const double grow = std::exp(effective_alpha);
  auto w = view.mutable_weights();
  DoubleDouble total;
  for (std::size_t slot = 0; slot < w.size(); ++slot) {
    const int margin =
        view.target(slot) * h.Predict(view.instance(view.instance_index(slot)));
    w[slot] *= (margin > 0 ? shrink : grow);
    if (!std::isfinite(w[slot])) result.overflow = true;
    total.Add(w[slot]);
  }
  result.total_weight = total.value();
  return result;
}

double ExpLoss(const SignedWeightedView& view,
               std::span<const double> margins) {
  if (margins.size() != view.instance_count()) {
    throw std::invalid_argument("margin count does not match instance count");
  }
  const double prior = view.prior();
  const double n_p = static_cast<double>(view.n_p());
  const double n_u = static_cast<double>(view.n_u());
  DoubleDouble loss;
  for (std::size_t i = 0; i < view.n_p(); ++i) {
    loss.Add(prior / n_p * std::exp(-margins[i]));
    loss.Add(-prior / n_p * std::exp(margins[i]));
  }
  for (std::size_t i = view.n_p(); i < view.instance_count(); ++i) {
    loss.Add(1.0 / n_u * std::exp(margins[i]));
  }
  return loss.value();
}

double ZeroOnePuRisk(std::span<const int> positive_predictions,
                     std::span<const int> unlabeled_predictions, double prior,
                     bool clamp_nonnegative) {
  if (positive_predictions.empty() || unlabeled_predictions.empty()) {
    throw std::invalid_argument("PU risk needs positive and unlabeled samples");
  }
  const auto count_pos = [](std::span<const int> p) {
    return static_cast<double>(std::count(p.begin(), p.end(), 1));
  };
  const double n_p = static_cast<double>(positive_predictions.size());
  const double n_u = static_cast<double>(unlabeled_predictions.size());
  const double p_as_pos = count_pos(positive_predictions) / n_p;
  const double p_as_neg = (n_p - count_pos(positive_predictions)) / n_p;
  const double u_as_pos = count_pos(unlabeled_predictions) / n_u;
  double negative_part = u_as_pos - prior * p_as_pos;
  if (clamp_nonnegative) negative_part = std::max(0.0, negative_part);
  return prior * p_as_neg + negative_part;
}

}  // namespace adapu
