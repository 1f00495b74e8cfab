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


#ifndef ADAPU_EVAL_H_
#define ADAPU_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adapu/booster.h"
#include "adapu/dataset.h"

namespace adapu {

// Metrics at one point. Fields that do not apply to the data evaluated are
// empty: labeled data fills accuracy / zero_one_loss, PU training data fills
// the two rates and zero_one_loss (as the unclamped PU risk estimate).
struct MetricPoint {
  std::size_t round = 0;  // ensemble prefix length; 0 for the full model
  std::optional<double> accuracy;
  std::optional<double> zero_one_loss;
  std::optional<double> positives_as_positive_rate;
  std::optional<double> unlabeled_as_negative_rate;
};

struct EvalReport {
  MetricPoint final;
  std::vector<MetricPoint> curve;  // one entry per prefix when swept
};

EvalReport EvaluateLabeled(const Ensemble& ensemble, const LabeledDataset& data,
                           bool prefix_sweep = false);
EvalReport EvaluatePuTrain(const Ensemble& ensemble, const PUDataset& pu,
                           bool prefix_sweep = false);

struct FeatureUsage {
  std::vector<std::size_t> counts;
};

// Throws std::invalid_argument if a member's feature is >= d.
FeatureUsage FeatureUsageOf(const Ensemble& ensemble, std::size_t d);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for one trial
  std::size_t count = 0;
};

struct AggregateReport {
  std::optional<Summary> accuracy;
  std::optional<Summary> zero_one_loss;
  std::optional<Summary> positives_as_positive_rate;
  std::optional<Summary> unlabeled_as_negative_rate;
};

Summary Summarize(std::span<const double> values);

// Per-field mean and std over the final metrics of each report. A field is
// aggregated when every report has it. Throws on an empty list.
AggregateReport AggregateTrials(std::span<const EvalReport> reports);

// Long-format curve rows: round,metric,value,trial,dataset,method
void WriteCurveHeader(std::ostream& out);
void WriteCurveRows(std::ostream& out, const EvalReport& report,
                    const std::string& metric_prefix, std::size_t trial,
                    const std::string& dataset, const std::string& method);

}  // namespace adapu

#endif  // ADAPU_EVAL_H_
