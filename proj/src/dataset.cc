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


#include "adapu/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "adapu/rng.h"

namespace adapu {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw DataError("matrix value count does not match its shape");
  }
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.AppendRow(r);
  return m;
}

void Matrix::AppendRow(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) {
    throw DataError("row has " + std::to_string(row.size()) +
                    " values, expected " + std::to_string(cols_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::SelectRows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.mutable_row(i).begin());
  }
  return out;
}

ParseError::ParseError(const std::string& source, std::size_t line,
                       std::size_t column, const std::string& message)
    : DataError(source + (line ? ":" + std::to_string(line) : "") +
                (column ? ":" + std::to_string(column) : "") + ": " +
                message),
      line_(line),
      column_(column) {}

namespace {

void CheckFinite(const Matrix& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(r, c))) {
        throw DataError(std::string(what) + " has a non-finite value at row " +
                        std::to_string(r) + ", column " + std::to_string(c));
      }
    }
  }
}

std::vector<std::size_t> IndicesWithLabel(const LabeledDataset& data,
                                          int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (data.labels[i] == label) out.push_back(i);
  }
  return out;
}

// First `count` entries of a seeded Fisher-Yates shuffle of `pool`.
std::vector<std::size_t> SampleWithoutReplacement(std::vector<std::size_t> pool,
                                                  std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.UniformIndex(pool.size() - i)]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

std::size_t LabeledDataset::CountLabel(int label) const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), label));
}

double LabeledDataset::PositiveFraction() const {
  if (labels.empty()) return 0.0;
  return static_cast<double>(CountLabel(+1)) /
         static_cast<double>(labels.size());
}

void LabeledDataset::Validate() const {
  if (instances.rows() < 1 || instances.cols() < 1) {
    throw DataError("labeled dataset needs at least one row and one feature");
  }
  if (labels.size() != instances.rows()) {
    throw DataError("label count does not match instance count");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw DataError("labels must be +1 or -1");
  }
  if (!feature_names.empty() && feature_names.size() != instances.cols()) {
    throw DataError("feature name count does not match column count");
  }
  CheckFinite(instances, "instance matrix");
}

LabeledDataset LabeledDataset::SelectRows(
    std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.instances = instances.SelectRows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  out.feature_names = feature_names;
  return out;
}

void PUDataset::Validate() const {
  if (positives.rows() < 1 || unlabeled.rows() < 1) {
    throw DataError("PU dataset needs at least one positive and one unlabeled");
  }
  if (positives.cols() < 1 || positives.cols() != unlabeled.cols()) {
    throw DataError("positive and unlabeled dimensions differ");
  }
  if (!(prior > 0.0 && prior < 1.0)) {
    throw DataError("class prior must lie strictly inside (0, 1)");
  }
  CheckFinite(positives, "positive matrix");
  CheckFinite(unlabeled, "unlabeled matrix");
}

PUDataset MakePu(const LabeledDataset& data, std::size_t n_p, double prior,
                 std::uint64_t seed) {
  auto positives = IndicesWithLabel(data, +1);
  if (n_p == 0) throw DataError("n_p must be positive");
  if (positives.size() < n_p) {
    throw DataError("requested " + std::to_string(n_p) + " positives but only " +
                    std::to_string(positives.size()) + " are available");
  }
  Rng rng = Rng::Stream(seed, "pu-sampling");
  const auto chosen = SampleWithoutReplacement(std::move(positives), n_p, rng);
  PUDataset pu;
  pu.positives = data.instances.SelectRows(chosen);
  pu.unlabeled = data.instances;
  pu.prior = prior;
  pu.Validate();
  return pu;
}

std::size_t PnNegativeCount(double prior, std::size_t n_p) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw DataError("class prior must lie strictly inside (0, 1)");
  }
  const double ratio = (1.0 - prior) / (2.0 * prior);
  const double count = ratio * ratio * static_cast<double>(n_p);
  // Absorbs representation error when the product is an exact integer.
  return static_cast<std::size_t>(std::floor(count + 1e-9));
}

LabeledDataset MakePnSample(const LabeledDataset& data, std::size_t n_p,
                            std::size_t n_n, std::uint64_t seed) {
  auto positives = IndicesWithLabel(data, +1);
  auto negatives = IndicesWithLabel(data, -1);
  if (positives.size() < n_p || negatives.size() < n_n) {
    throw DataError("insufficient class counts: need " + std::to_string(n_p) +
                    " positives and " + std::to_string(n_n) +
                    " negatives, have " + std::to_string(positives.size()) +
                    " and " + std::to_string(negatives.size()));
  }
  Rng rng = Rng::Stream(seed, "pn-sampling");
  auto chosen = SampleWithoutReplacement(std::move(positives), n_p, rng);
  const auto neg = SampleWithoutReplacement(std::move(negatives), n_n, rng);
  chosen.insert(chosen.end(), neg.begin(), neg.end());
  rng.Shuffle(std::span<std::size_t>(chosen));
  return data.SelectRows(chosen);
}

LabeledDataset MakePnCounterpart(const LabeledDataset& data, std::size_t n_p,
                                 double prior, std::uint64_t seed) {
  return MakePnSample(data, n_p, PnNegativeCount(prior, n_p), seed);
}

std::vector<Fold> KFoldIndices(std::size_t n, const SplitSpec& spec) {
  if (spec.fold_count < 2) throw DataError("fold count must be at least 2");
  if (n < spec.fold_count) {
    throw DataError("cannot split " + std::to_string(n) + " items into " +
                    std::to_string(spec.fold_count) + " folds");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = Rng::Stream(spec.seed, "folds");
  rng.Shuffle(std::span<std::size_t>(perm));

  const std::size_t k = spec.fold_count;
  std::vector<Fold> folds(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = n / k + (f < n % k ? 1 : 0);
    folds[f].validation.assign(perm.begin() + start,
                               perm.begin() + start + len);
    std::sort(folds[f].validation.begin(), folds[f].validation.end());
    start += len;
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<char> held(n, 0);
    for (std::size_t i : folds[f].validation) held[i] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!held[i]) folds[f].train.push_back(i);
    }
  }
  return folds;
}

std::vector<std::pair<PUDataset, PUDataset>> PuFolds(const PUDataset& pu,
                                                     const SplitSpec& spec) {
  const auto p_folds =
      KFoldIndices(pu.n_p(), {spec.fold_count, spec.seed ^ 0x50ULL});
  const auto u_folds =
      KFoldIndices(pu.n_u(), {spec.fold_count, spec.seed ^ 0x55ULL});
  std::vector<std::pair<PUDataset, PUDataset>> out;
  out.reserve(spec.fold_count);
  for (std::size_t f = 0; f < spec.fold_count; ++f) {
    PUDataset train{pu.positives.SelectRows(p_folds[f].train),
                    pu.unlabeled.SelectRows(u_folds[f].train), pu.prior};
    PUDataset valid{pu.positives.SelectRows(p_folds[f].validation),
                    pu.unlabeled.SelectRows(u_folds[f].validation), pu.prior};
    out.emplace_back(std::move(train), std::move(valid));
  }
  return out;
}

std::pair<LabeledDataset, LabeledDataset> SplitHeadTail(
    const LabeledDataset& data, std::size_t n_train) {
  if (n_train == 0 || n_train >= data.size()) {
    throw DataError("training size must be in [1, n)");
  }
  std::vector<std::size_t> head(n_train), tail(data.size() - n_train);
  std::iota(head.begin(), head.end(), std::size_t{0});
  std::iota(tail.begin(), tail.end(), n_train);
  return {data.SelectRows(head), data.SelectRows(tail)};
}

std::pair<LabeledDataset, LabeledDataset> ShuffleSplit(
    const LabeledDataset& data, std::size_t n_train, std::uint64_t seed) {
  if (n_train == 0 || n_train >= data.size()) {
    throw DataError("training size must be in [1, n)");
  }
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = Rng::Stream(seed, "split");
  rng.Shuffle(std::span<std::size_t>(perm));
  std::vector<std::size_t> train(perm.begin(), perm.begin() + n_train);
  std::vector<std::size_t> test(perm.begin() + n_train, perm.end());
  return {data.SelectRows(train), data.SelectRows(test)};
}

ColumnRef ColumnRef::Parse(const std::string& text) {
  ColumnRef ref;
  if (!text.empty() &&
      std::all_of(text.begin(), text.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    ref.index = std::stoull(text);
  } else {
    ref.name = text;
  }
  return ref;
}

}  // namespace adapu
