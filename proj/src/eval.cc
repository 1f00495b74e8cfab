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


#include "adapu/eval.h"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "adapu/risk.h"

namespace adapu {
namespace {

int Sign(double s) { return s >= 0.0 ? 1 : -1; }

void CheckDimension(const Ensemble& ensemble, std::size_t d) {
  const std::size_t expected = ensemble.metadata().dimension;
  if (expected != 0 && expected != d) {
    throw std::invalid_argument("data has " + std::to_string(d) +
                                " features but the model expects " +
                                std::to_string(expected));
  }
  for (const auto& m : ensemble.members()) {
    if (m.stump.feature >= d) {
      throw std::invalid_argument("model uses feature " +
                                  std::to_string(m.stump.feature) +
                                  " beyond the data dimension");
    }
  }
}

// Calls visit(prefix_length, scores) after each member, accumulating scores
// in member order so the last call matches Ensemble::Score exactly.
template <typename Visit>
void SweepPrefixes(const Ensemble& ensemble, const Matrix& instances,
                   Visit visit) {
  std::vector<double> scores(instances.rows(), 0.0);
  std::size_t t = 0;
  for (const auto& m : ensemble.members()) {
    for (std::size_t r = 0; r < instances.rows(); ++r) {
      scores[r] += m.weight * m.stump.Predict(instances.row(r));
    }
    visit(++t, scores);
  }
}

MetricPoint LabeledPoint(std::span<const double> scores,
                         const std::vector<int>& labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (Sign(scores[i]) == labels[i]) ++correct;
  }
  const double n = static_cast<double>(labels.size());
  MetricPoint p;
  p.accuracy = static_cast<double>(correct) / n;
  p.zero_one_loss = static_cast<double>(labels.size() - correct) / n;
  return p;
}

MetricPoint PuPoint(std::span<const double> p_scores,
                    std::span<const double> u_scores, double prior) {
  std::vector<int> pp(p_scores.size()), pu(u_scores.size());
  std::size_t p_pos = 0, u_neg = 0;
  for (std::size_t i = 0; i < p_scores.size(); ++i) {
    pp[i] = Sign(p_scores[i]);
    if (pp[i] == 1) ++p_pos;
  }
  for (std::size_t i = 0; i < u_scores.size(); ++i) {
    pu[i] = Sign(u_scores[i]);
    if (pu[i] == -1) ++u_neg;
  }
  MetricPoint point;
  point.positives_as_positive_rate =
      static_cast<double>(p_pos) / static_cast<double>(p_scores.size());
  point.unlabeled_as_negative_rate =
      static_cast<double>(u_neg) / static_cast<double>(u_scores.size());
  point.zero_one_loss = ZeroOnePuRisk(pp, pu, prior, false);
  return point;
}

}  // namespace

EvalReport EvaluateLabeled(const Ensemble& ensemble, const LabeledDataset& data,
                           bool prefix_sweep) {
  if (data.size() == 0) throw std::invalid_argument("empty evaluation data");
  CheckDimension(ensemble, data.dims());
  EvalReport report;
  report.final = LabeledPoint(ensemble.Score(data.instances), data.labels);
  if (prefix_sweep) {
    SweepPrefixes(ensemble, data.instances,
                  [&](std::size_t t, const std::vector<double>& scores) {
                    MetricPoint p = LabeledPoint(scores, data.labels);
                    p.round = t;
                    report.curve.push_back(p);
                  });
  }
  return report;
}

EvalReport EvaluatePuTrain(const Ensemble& ensemble, const PUDataset& pu,
                           bool prefix_sweep) {
  pu.Validate();
  CheckDimension(ensemble, pu.dims());
  EvalReport report;
  report.final = PuPoint(ensemble.Score(pu.positives),
                         ensemble.Score(pu.unlabeled), pu.prior);
  if (prefix_sweep) {
    std::vector<std::vector<double>> p_curve;
    SweepPrefixes(ensemble, pu.positives,
                  [&](std::size_t, const std::vector<double>& scores) {
                    p_curve.push_back(scores);
                  });
    SweepPrefixes(ensemble, pu.unlabeled,
                  [&](std::size_t t, const std::vector<double>& scores) {
                    MetricPoint p = PuPoint(p_curve[t - 1], scores, pu.prior);
                    p.round = t;
                    report.curve.push_back(p);
                  });
  }
  return report;
}

FeatureUsage FeatureUsageOf(const Ensemble& ensemble, std::size_t d) {
  FeatureUsage usage;
  usage.counts.assign(d, 0);
  for (const auto& m : ensemble.members()) {
    if (m.stump.feature >= d) {
      throw std::invalid_argument("member feature " +
                                  std::to_string(m.stump.feature) +
                                  " out of range for d = " + std::to_string(d));
    }
    ++usage.counts[m.stump.feature];
  }
  return usage;
}

Summary Summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("nothing to summarize");
  Summary s;
  s.count = values.size();
  // Welford: constant inputs give exactly zero spread.
  double m2 = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double delta = values[k] - s.mean;
    s.mean += delta / static_cast<double>(k + 1);
    m2 += delta * (values[k] - s.mean);
  }
  if (values.size() > 1) {
    s.std = std::sqrt(m2 / static_cast<double>(values.size() - 1));
  }
  return s;
}

AggregateReport AggregateTrials(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no trials to aggregate");
  auto field = [&](auto member) -> std::optional<Summary> {
    std::vector<double> values;
    for (const auto& r : reports) {
      const std::optional<double>& v = r.final.*member;
      if (!v) return std::nullopt;
      values.push_back(*v);
    }
    return Summarize(values);
  };
  AggregateReport out;
  out.accuracy = field(&MetricPoint::accuracy);
  out.zero_one_loss = field(&MetricPoint::zero_one_loss);
  out.positives_as_positive_rate =
      field(&MetricPoint::positives_as_positive_rate);
  out.unlabeled_as_negative_rate =
      field(&MetricPoint::unlabeled_as_negative_rate);
  return out;
}

void WriteCurveHeader(std::ostream& out) {
  out << "round,metric,value,trial,dataset,method\n";
}

void WriteCurveRows(std::ostream& out, const EvalReport& report,
                    const std::string& metric_prefix, std::size_t trial,
                    const std::string& dataset, const std::string& method) {
  auto emit = [&](std::size_t round, const char* name,
                  const std::optional<double>& v) {
    if (!v) return;
    out << round << ',' << metric_prefix << name << ',' << FormatDouble(*v)
        << ',' << trial << ',' << dataset << ',' << method << '\n';
  };
  for (const auto& p : report.curve) {
    emit(p.round, "accuracy", p.accuracy);
    emit(p.round, "zero_one_loss", p.zero_one_loss);
    emit(p.round, "positives_as_positive", p.positives_as_positive_rate);
    emit(p.round, "unlabeled_as_negative", p.unlabeled_as_negative_rate);
  }
}

}  // namespace adapu
