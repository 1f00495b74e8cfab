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


#ifndef ADAPU_SUMMATION_H_
#define ADAPU_SUMMATION_H_

namespace adapu {

// Double-double accumulator built on error-free TwoSum. Keeps roughly 106
// bits, so sums of mixed-sign weights round to the same double no matter
// the order they were added in (barring values within ~2^-106 of a rounding
// boundary).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  void Add(double x) {
    double err;
    const double s = TwoSum(hi, x, err);
    Renormalize(s, err + lo);
  }

  DoubleDouble& operator+=(const DoubleDouble& o) {
    double err;
    const double s = TwoSum(hi, o.hi, err);
    Renormalize(s, err + lo + o.lo);
    return *this;
  }

  friend DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) {
    a += b;
    return a;
  }
  friend DoubleDouble operator-(const DoubleDouble& a) {
    return {-a.hi, -a.lo};
  }
  friend DoubleDouble operator-(DoubleDouble a, const DoubleDouble& b) {
    a += -b;
    return a;
  }

  // Nearest double to hi + lo.
  double value() const { return hi; }

 private:
  static double TwoSum(double a, double b, double& err) {
    const double s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
  }
  void Renormalize(double s, double e) {
    hi = s + e;
    lo = e - (hi - s);
  }
};

}  // namespace adapu

#endif  // ADAPU_SUMMATION_H_
