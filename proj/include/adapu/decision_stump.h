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


#ifndef ADAPU_DECISION_STUMP_H_
#define ADAPU_DECISION_STUMP_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace adapu {

enum class Orientation {
  kLeftPositive,   // +1 when x[feature] < threshold
  kRightPositive,  // +1 when x[feature] >= threshold
};

std::string_view OrientationName(Orientation o);
// Accepts "left-positive" / "right-positive"; throws std::invalid_argument.
Orientation ParseOrientation(std::string_view name);

// Depth-one threshold classifier on a single feature.
struct DecisionStump {
  std::size_t feature = 0;
  double threshold = 0.0;
  Orientation orientation = Orientation::kLeftPositive;

  int Predict(std::span<const double> x) const {
    const bool left = x[feature] < threshold;
    return (left != (orientation == Orientation::kRightPositive)) ? 1 : -1;
  }

  DecisionStump Flipped() const {
    return {feature, threshold,
            orientation == Orientation::kLeftPositive
                ? Orientation::kRightPositive
                : Orientation::kLeftPositive};
  }

  friend bool operator==(const DecisionStump&, const DecisionStump&) = default;
};

}  // namespace adapu

#endif  // ADAPU_DECISION_STUMP_H_
