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


#ifndef ADAPU_DATASET_H_
#define ADAPU_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adapu/matrix.h"

namespace adapu {

// Raised for invalid datasets and sampling requests that cannot be met.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the file loaders. `line` and `column` are 1-based; 0 means
// "not applicable".
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Fully labeled data with labels in {+1, -1}.
struct LabeledDataset {
  Matrix instances;
  std::vector<int> labels;
  std::vector<std::string> feature_names;  // empty or one per column

  std::size_t size() const { return instances.rows(); }
  std::size_t dims() const { return instances.cols(); }
  std::size_t CountLabel(int label) const;
  double PositiveFraction() const;

  // Throws DataError when an invariant is broken (label domain, finiteness,
  // non-empty shape, name count).
  void Validate() const;

  LabeledDataset SelectRows(std::span<const std::size_t> indices) const;
};

// Case-control PU data: a positive sample, an unlabeled sample drawn from the
// marginal, and the known class prior.
struct PUDataset {
  Matrix positives;
  Matrix unlabeled;
  double prior = 0.5;

  std::size_t n_p() const { return positives.rows(); }
  std::size_t n_u() const { return unlabeled.rows(); }
  std::size_t dims() const { return positives.cols(); }

  void Validate() const;
};

struct SplitSpec {
  std::size_t fold_count = 5;
  std::uint64_t seed = 0;
};

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Refers to a CSV column either by header name or by 0-based index. The
// default refers to the last column.
struct ColumnRef {
  std::optional<std::string> name;
  std::optional<std::size_t> index;

  // All-digit text is an index, anything else a name.
  static ColumnRef Parse(const std::string& text);
  static ColumnRef Last() { return {}; }
};

struct CsvOptions {
  bool has_header = true;
  ColumnRef label_column = ColumnRef::Last();
  std::string positive_label = "1";
  char delimiter = ',';
};

LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvOptions& options);
LabeledDataset ReadCsv(std::istream& in, const CsvOptions& options,
                       const std::string& source = "<stream>");

// Feature-only CSV (no label column), e.g. a file of positive instances.
Matrix LoadFeatureCsv(const std::filesystem::path& path, bool has_header,
                      char delimiter = ',');
Matrix ReadFeatureCsv(std::istream& in, bool has_header, char delimiter = ',',
                      const std::string& source = "<stream>");

// Shortest text that parses back to exactly `v`.
std::string FormatDouble(double v);

// Writes shortest round-trip representations, so reloading is bit-exact.
// Labels are written as `positive_label` / `negative_label` in the last
// column; the header is emitted when feature names are present or
// `header` is set.
void WriteCsv(const LabeledDataset& data, const std::filesystem::path& path,
              bool header = true, const std::string& positive_label = "1",
              const std::string& negative_label = "-1");
void WriteFeatureCsv(const Matrix& instances,
                     const std::filesystem::path& path);

// "label idx:val idx:val ..." with 1-based strictly increasing indices.
LabeledDataset LoadSparseText(const std::filesystem::path& path,
                              std::size_t dimension);
LabeledDataset ReadSparseText(std::istream& in, std::size_t dimension,
                              const std::string& source = "<stream>");

// n_p positives sampled without replacement; every instance of `data` becomes
// unlabeled.
PUDataset MakePu(const LabeledDataset& data, std::size_t n_p, double prior,
                 std::uint64_t seed);

// floor((pi_n / (2 pi_p))^2 * n_p).
std::size_t PnNegativeCount(double prior, std::size_t n_p);

// n_p positives plus PnNegativeCount(prior, n_p) negatives, shuffled.
LabeledDataset MakePnCounterpart(const LabeledDataset& data, std::size_t n_p,
                                 double prior, std::uint64_t seed);
// Same, with an explicit negative count.
LabeledDataset MakePnSample(const LabeledDataset& data, std::size_t n_p,
                            std::size_t n_n, std::uint64_t seed);

std::vector<Fold> KFoldIndices(std::size_t n, const SplitSpec& spec);

// Folds positives and unlabeled independently and pairs fold k of each.
// Returns (train, validation) PU datasets per fold.
std::vector<std::pair<PUDataset, PUDataset>> PuFolds(const PUDataset& pu,
                                                     const SplitSpec& spec);

// First `n_train` rows for training, the rest for testing (file order).
std::pair<LabeledDataset, LabeledDataset> SplitHeadTail(
    const LabeledDataset& data, std::size_t n_train);
std::pair<LabeledDataset, LabeledDataset> ShuffleSplit(
    const LabeledDataset& data, std::size_t n_train, std::uint64_t seed);

}  // namespace adapu

#endif  // ADAPU_DATASET_H_
