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


// Test-only reference implementations. Nothing here calls into the scoring or
// summation code under test; sums are exact (Shewchuk partials) and every
// candidate is scored with a direct pass over all slots.
#ifndef ADAPU_TESTS_ORACLE_H_
#define ADAPU_TESTS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "adapu/booster.h"
#include "adapu/dataset.h"
#include "adapu/decision_stump.h"
#include "adapu/rng.h"
#include "adapu/stump.h"

namespace adapu::oracle {

// Running sum kept as non-overlapping partials; Sum() is correctly rounded.
class ExactSum {
 public:
  void Add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double Sum() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push past a tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

inline double SumOf(std::span<const double> values) {
  ExactSum s;
  for (double v : values) s.Add(v);
  return s.Sum();
}

// Signed-weight slots, written out independently of SignedWeightedView:
// [P+ | U- | P-] with targets +1, -1, -1.
struct Slots {
  std::vector<std::vector<double>> x;
  std::vector<int> target;
  std::vector<int> group;  // 0 = P+, 1 = U-, 2 = P-
  double prior = 0.0;
};

inline Slots SlotsOf(const PUDataset& pu) {
  Slots s;
  s.prior = pu.prior;
  for (std::size_t i = 0; i < pu.n_p(); ++i) {
    const auto r = pu.positives.row(i);
    s.x.emplace_back(r.begin(), r.end());
    s.target.push_back(1);
    s.group.push_back(0);
  }
  for (std::size_t i = 0; i < pu.n_u(); ++i) {
    const auto r = pu.unlabeled.row(i);
    s.x.emplace_back(r.begin(), r.end());
    s.target.push_back(-1);
    s.group.push_back(1);
  }
  for (std::size_t i = 0; i < pu.n_p(); ++i) {
    const auto r = pu.positives.row(i);
    s.x.emplace_back(r.begin(), r.end());
    s.target.push_back(-1);
    s.group.push_back(2);
  }
  return s;
}

inline std::vector<double> InitialWeights(const PUDataset& pu) {
  std::vector<double> w;
  const double np = static_cast<double>(pu.n_p());
  const double nu = static_cast<double>(pu.n_u());
  for (std::size_t i = 0; i < pu.n_p(); ++i) w.push_back(pu.prior / np);
  for (std::size_t i = 0; i < pu.n_u(); ++i) w.push_back(1.0 / nu);
  for (std::size_t i = 0; i < pu.n_p(); ++i) w.push_back(-pu.prior / np);
  return w;
}

inline int StumpOutput(const DecisionStump& h, const std::vector<double>& x) {
  const bool below = x[h.feature] < h.threshold;
  if (h.orientation == Orientation::kLeftPositive) return below ? 1 : -1;
  return below ? -1 : 1;
}

struct Score {
  double E = 0.0, Z = 0.0, e = 0.0, e_nn = 0.0, eps = 0.0, eps_nn = 0.0;
  bool feasible_per_group = false;
  bool feasible_over_all = false;
};

inline Score ScoreExact(const Slots& s, std::span<const double> w,
                        const DecisionStump& h) {
  ExactSum miss[3], total[3], miss_all, total_all, miss_nn;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int g = s.group[i];
    total[g].Add(w[i]);
    total_all.Add(w[i]);
    if (StumpOutput(h, s.x[i]) != s.target[i]) {
      miss[g].Add(w[i]);
      miss_all.Add(w[i]);
      if (g != 0) miss_nn.Add(w[i]);
    }
  }
  double err[3];
  for (int g = 0; g < 3; ++g) {
    const double t = total[g].Sum();
    err[g] = t == 0.0 ? 0.0 : miss[g].Sum() / t;
  }
  Score r;
  r.E = miss_all.Sum();
  r.Z = total_all.Sum();
  r.eps = s.prior * err[0] + err[1] - s.prior * err[2];
  r.eps_nn = err[1] - s.prior * err[2];
  r.feasible_per_group =
      r.eps >= 0.0 && r.eps < kMaxFeasibleError && r.eps_nn >= 0.0;
  if (r.Z != 0.0) {
    r.e = r.E / r.Z;
    r.e_nn = miss_nn.Sum() / r.Z;
    r.feasible_over_all =
        r.e >= 0.0 && r.e < kMaxFeasibleError && r.e_nn >= 0.0;
  }
  return r;
}

// Candidate thresholds for one feature, drawn in the documented order: the
// interval is [min - pad, max + pad] (or [min - pad, min + pad] for the
// pseudocode interval) with pad = range / (unique - 1); a constant feature
// gives K copies of its value without consuming randomness.
inline std::vector<double> Thresholds(const std::vector<double>& column, int K,
                                      ThresholdStrategy strategy,
                                      ThresholdInterval interval, Rng& rng) {
  const std::set<double> unique(column.begin(), column.end());
  const double lo_v = *unique.begin();
  const double hi_v = *unique.rbegin();
  if (unique.size() == 1) return std::vector<double>(K, lo_v);
  const double pad = (hi_v - lo_v) / static_cast<double>(unique.size() - 1);
  const double lo = lo_v - pad;
  const double hi =
      (interval == ThresholdInterval::kWidened ? hi_v : lo_v) + pad;
  std::vector<double> out;
  for (int k = 0; k < K; ++k) {
    if (strategy == ThresholdStrategy::kRandom) {
      out.push_back(lo + (hi - lo) * rng.Uniform01());
    } else if (K == 1) {
      out.push_back(lo + 0.5 * (hi - lo));
    } else {
      out.push_back(k == K - 1 ? hi : lo + (hi - lo) * k / (K - 1.0));
    }
  }
  return out;
}

struct Choice {
  std::optional<DecisionStump> stump;
  Score score;
  double eps = 0.0;
  double alpha = 0.0;
};

inline double Alpha(double err) {
  const double e = err < 1e-10 ? 1e-10 : err;
  return 0.5 * std::log((1.0 - e) / e);
}

// Exhaustive search over the given per-feature thresholds. Features in order,
// thresholds in order, left-positive before right-positive, strict < on E.
inline Choice Search(const Slots& s, std::span<const double> w,
                     const std::vector<std::vector<double>>& thresholds,
                     Normalization mode) {
  Choice best;
  double best_E = INFINITY;
  for (std::size_t f = 0; f < thresholds.size(); ++f) {
    for (double v : thresholds[f]) {
      for (Orientation o :
           {Orientation::kLeftPositive, Orientation::kRightPositive}) {
        const DecisionStump h{f, v, o};
        const Score sc = ScoreExact(s, w, h);
        const bool ok = mode == Normalization::kPerGroup
                            ? sc.feasible_per_group
                            : sc.feasible_over_all;
        if (ok && sc.E < best_E) {
          best_E = sc.E;
          best.stump = h;
          best.score = sc;
        }
      }
    }
  }
  if (best.stump) {
    best.eps = mode == Normalization::kPerGroup ? best.score.eps : best.score.e;
    best.alpha = Alpha(best.eps);
  }
  return best;
}

inline std::vector<std::vector<double>> DrawAll(const PUDataset& pu, int K,
                                                ThresholdStrategy strategy,
                                                ThresholdInterval interval,
                                                Rng& rng) {
  std::vector<std::vector<double>> out;
  for (std::size_t f = 0; f < pu.dims(); ++f) {
    std::vector<double> column;
    for (std::size_t i = 0; i < pu.n_p(); ++i) column.push_back(pu.positives(i, f));
    for (std::size_t i = 0; i < pu.n_u(); ++i) column.push_back(pu.unlabeled(i, f));
    out.push_back(Thresholds(column, K, strategy, interval, rng));
  }
  return out;
}

// --- random inputs --------------------------------------------------------

inline double Normal(Rng& rng) {
  double u = rng.Uniform01();
  while (u == 0.0) u = rng.Uniform01();
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(6.283185307179586 * rng.Uniform01());
}

// Column kinds: continuous, a small integer grid (ties), or constant.
inline double FeatureValue(Rng& rng, int kind, double shift) {
  switch (kind) {
    case 0:
      return Normal(rng) + shift;
    case 1:
      return static_cast<double>(rng.UniformIndex(4)) + (shift > 0 ? 1 : 0);
    default:
      return 3.0;
  }
}

inline PUDataset RandomPu(Rng& rng, std::size_t max_n, std::size_t max_d) {
  const std::size_t d = 1 + rng.UniformIndex(max_d);
  const std::size_t n_p = 1 + rng.UniformIndex(max_n / 3);
  const std::size_t n_u = 2 + rng.UniformIndex(max_n - n_p - 1);
  std::vector<int> kind(d);
  for (auto& k : kind) {
    const std::size_t r = rng.UniformIndex(10);
    k = r < 6 ? 0 : (r < 9 ? 1 : 2);
  }
  PUDataset pu;
  pu.prior = 0.1 + 0.8 * rng.Uniform01();
  pu.positives = Matrix(n_p, d);
  pu.unlabeled = Matrix(n_u, d);
  for (std::size_t i = 0; i < n_p; ++i) {
    for (std::size_t f = 0; f < d; ++f) {
      pu.positives(i, f) = FeatureValue(rng, kind[f], 1.0);
    }
  }
  for (std::size_t i = 0; i < n_u; ++i) {
    const double shift = rng.Uniform01() < pu.prior ? 1.0 : -1.0;
    for (std::size_t f = 0; f < d; ++f) {
      pu.unlabeled(i, f) = FeatureValue(rng, kind[f], shift);
    }
  }
  // Occasionally reuse a positive as an unlabeled row (exact duplicates).
  if (rng.UniformIndex(3) == 0) {
    const auto src = pu.positives.row(rng.UniformIndex(n_p));
    std::copy(src.begin(), src.end(), pu.unlabeled.mutable_row(0).begin());
  }
  return pu;
}

inline LabeledDataset RandomLabeled(Rng& rng, std::size_t n, std::size_t d) {
  LabeledDataset data;
  data.instances = Matrix(n, d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.labels[i] = i < 2 ? (i == 0 ? 1 : -1) : (rng.Uniform01() < 0.5 ? 1 : -1);
    const double shift = data.labels[i] > 0 ? 0.7 : -0.7;
    for (std::size_t f = 0; f < d; ++f) {
      data.instances(i, f) = Normal(rng) + (f % 2 == 0 ? shift : 0.0);
    }
  }
  return data;
}

// Applies `rounds` random multiplicative updates so searches see weights far
// from the initial ones. Signs are preserved.
inline void Perturb(std::vector<double>& w, Rng& rng, int rounds) {
  for (int r = 0; r < rounds; ++r) {
    for (double& v : w) v *= std::exp(2.0 * (rng.Uniform01() - 0.5));
  }
}

}  // namespace adapu::oracle

#endif  // ADAPU_TESTS_ORACLE_H_
