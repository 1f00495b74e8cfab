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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "adapu/rng.h"
#include "oracle.h"

namespace adapu {
namespace {

LabeledDataset FromCsv(const std::string& text, CsvOptions options = {}) {
  std::istringstream in(text);
  return ReadCsv(in, options, "test.csv");
}

TEST(CsvLoader, MapsRawLabelsToSigns) {
  CsvOptions options;
  options.positive_label = "M";
  const auto data = FromCsv("a,b,diagnosis\n1,2,M\n3,4,B\n5,6,M\n", options);
  EXPECT_EQ(data.labels, (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(data.dims(), 2u);
  EXPECT_EQ(data.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(data.instances(2, 1), 6.0);
}

TEST(CsvLoader, LabelColumnByNameOrIndex) {
  CsvOptions by_name;
  by_name.label_column = ColumnRef::Parse("y");
  const auto a = FromCsv("y,x1,x2\n1,0.5,7\n0,1.5,8\n", by_name);
  EXPECT_EQ(a.labels, (std::vector<int>{1, -1}));
  EXPECT_EQ(a.instances(1, 0), 1.5);

  CsvOptions by_index;
  by_index.label_column = ColumnRef::Parse("0");
  by_index.has_header = false;
  const auto b = FromCsv("1,0.5,7\n0,1.5,8\n", by_index);
  EXPECT_EQ(b.instances, a.instances);
  EXPECT_EQ(b.labels, a.labels);
}

TEST(CsvLoader, QuotedFieldsAndCrlf) {
  const auto data = FromCsv("\"f,1\",\"label\"\r\n\"1.25\",1\r\n\r\n2.5,0\r\n");
  EXPECT_EQ(data.feature_names[0], "f,1");
  EXPECT_EQ(data.size(), 2u);
  EXPECT_EQ(data.instances(0, 0), 1.25);
}

TEST(CsvLoader, BadCellNamesRowAndColumn) {
  try {
    FromCsv("a,b,y\n1,2,1\n3,abc,0\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 2u);
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
}

TEST(CsvLoader, RejectsNonFiniteAndThreeLabels) {
  EXPECT_THROW(FromCsv("a,y\nnan,1\n"), ParseError);
  EXPECT_THROW(FromCsv("a,y\ninf,1\n"), ParseError);
  EXPECT_THROW(FromCsv("a,y\n1,1\n2,0\n3,2\n"), DataError);
  EXPECT_THROW(FromCsv("a,y\n1,1\n2\n"), ParseError);
}

TEST(CsvLoader, RoundTripIsBitExact) {
  Rng rng(7);
  LabeledDataset data = oracle::RandomLabeled(rng, 40, 4);
  data.instances(0, 0) = 0.1;
  data.instances(1, 1) = -1e-300;
  data.instances(2, 2) = std::numeric_limits<double>::max();
  data.instances(3, 3) = std::nextafter(1.0, 2.0);
  const auto path =
      std::filesystem::temp_directory_path() / "adapu_roundtrip.csv";
  WriteCsv(data, path, true, "1", "0");
  const auto back = LoadCsv(path, {});
  EXPECT_EQ(back.instances, data.instances);
  EXPECT_EQ(back.labels, data.labels);
  std::filesystem::remove(path);
}

TEST(CsvLoader, Wdbc) {
  CsvOptions options;
  options.positive_label = "B";
  const auto data = LoadCsv(std::string(ADAPU_DATA_DIR) + "/wdbc.csv", options);
  EXPECT_EQ(data.size(), 569u);
  EXPECT_EQ(data.dims(), 30u);
  EXPECT_EQ(data.CountLabel(1), 357u);
}

TEST(SparseLoader, ParsesOneBasedIndices) {
  std::istringstream in("+1 1:0.5 3:-0.2\n-1\n");
  const auto data = ReadSparseText(in, 3);
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data.labels, (std::vector<int>{1, -1}));
  EXPECT_EQ(data.instances(0, 0), 0.5);
  EXPECT_EQ(data.instances(0, 1), 0.0);
  EXPECT_EQ(data.instances(0, 2), -0.2);
  EXPECT_EQ(data.instances(1, 0), 0.0);
  EXPECT_EQ(data.instances(1, 1), 0.0);
}

TEST(SparseLoader, Errors) {
  auto parse = [](const std::string& text, std::size_t d) {
    std::istringstream in(text);
    return ReadSparseText(in, d);
  };
  try {
    parse("+1 1:1\n+1 3:1 2:1\n", 3);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-increasing index"),
              std::string::npos);
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("+1 4:1\n", 3), ParseError);
  EXPECT_THROW(parse("+1 0:1\n", 3), ParseError);
  EXPECT_THROW(parse("2 1:1\n", 3), ParseError);
  EXPECT_THROW(parse("+1 1:x\n", 3), ParseError);
}

LabeledDataset Counted(std::size_t pos, std::size_t neg) {
  LabeledDataset d;
  d.instances = Matrix(pos + neg, 1);
  for (std::size_t i = 0; i < pos + neg; ++i) {
    d.instances(i, 0) = static_cast<double>(i);
    d.labels.push_back(i < pos ? 1 : -1);
  }
  return d;
}

TEST(MakePu, SamplesWithoutReplacementAndKeepsEveryRowUnlabeled) {
  const auto data = Counted(270, 185);
  const PUDataset pu = MakePu(data, 10, 0.59, 3);
  EXPECT_EQ(pu.n_p(), 10u);
  EXPECT_EQ(pu.n_u(), 455u);
  EXPECT_EQ(pu.unlabeled, data.instances);
  std::set<double> seen;
  for (std::size_t i = 0; i < pu.n_p(); ++i) {
    EXPECT_LT(pu.positives(i, 0), 270.0);
    EXPECT_TRUE(seen.insert(pu.positives(i, 0)).second);
  }
}

TEST(MakePu, ExhaustiveSampleIsAPermutation) {
  const auto data = Counted(20, 5);
  const PUDataset pu = MakePu(data, 20, 0.8, 9);
  std::vector<double> got(pu.positives.values());
  std::sort(got.begin(), got.end());
  std::vector<double> want(20);
  std::iota(want.begin(), want.end(), 0.0);
  EXPECT_EQ(got, want);
  EXPECT_THROW(MakePu(data, 21, 0.8, 9), DataError);
}

TEST(MakePu, DeterministicPerSeed) {
  const auto data = Counted(50, 50);
  EXPECT_EQ(MakePu(data, 10, 0.5, 1).positives,
            MakePu(data, 10, 0.5, 1).positives);
  EXPECT_NE(MakePu(data, 10, 0.5, 1).positives,
            MakePu(data, 10, 0.5, 2).positives);
}

TEST(PnCounterpart, NegativeCountFormula) {
  EXPECT_EQ(PnNegativeCount(0.4, 1000), 562u);
  EXPECT_EQ(PnNegativeCount(0.68, 1000), 55u);
  EXPECT_EQ(PnNegativeCount(0.5, 1000), 250u);
  EXPECT_EQ(PnNegativeCount(0.59, 10), 1u);
  const auto pn = MakePnCounterpart(Counted(100, 100), 10, 0.59, 4);
  EXPECT_EQ(pn.CountLabel(1), 10u);
  EXPECT_EQ(pn.CountLabel(-1), 1u);
}

TEST(KFold, DivisibleAndRemainder) {
  const auto even = KFoldIndices(10, {5, 1});
  ASSERT_EQ(even.size(), 5u);
  std::vector<std::size_t> all;
  for (const auto& f : even) {
    EXPECT_EQ(f.validation.size(), 2u);
    EXPECT_EQ(f.train.size(), 8u);
    all.insert(all.end(), f.validation.begin(), f.validation.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);

  std::multiset<std::size_t> sizes;
  for (const auto& f : KFoldIndices(11, {5, 1})) sizes.insert(f.validation.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 2, 2, 2, 3}));
  EXPECT_THROW(KFoldIndices(10, {1, 1}), DataError);
}

TEST(KFold, PartitionPropertyAndDeterminism) {
  Rng gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + gen.UniformIndex(6);
    const std::size_t n = k + gen.UniformIndex(60);
    const std::uint64_t seed = gen.NextU64();
    const auto folds = KFoldIndices(n, {k, seed});
    std::vector<int> hits(n, 0);
    for (const auto& f : folds) {
      for (auto i : f.validation) ++hits[i];
      std::set<std::size_t> train(f.train.begin(), f.train.end());
      for (auto i : f.validation) EXPECT_EQ(train.count(i), 0u);
      EXPECT_EQ(f.train.size() + f.validation.size(), n);
    }
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(),
                            [](int h) { return h == 1; }));
    const auto again = KFoldIndices(n, {k, seed});
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_EQ(again[j].validation, folds[j].validation);
    }
  }
}

TEST(PuFolds, SplitsBothSamples) {
  PUDataset pu;
  pu.prior = 0.5;
  pu.positives = Matrix(10, 1, 1.0);
  pu.unlabeled = Matrix(23, 1, 0.0);
  const auto folds = PuFolds(pu, {5, 3});
  ASSERT_EQ(folds.size(), 5u);
  std::size_t p = 0, u = 0;
  for (const auto& [train, val] : folds) {
    EXPECT_EQ(val.n_p(), 2u);
    p += val.n_p();
    u += val.n_u();
    EXPECT_EQ(train.n_p() + val.n_p(), 10u);
    EXPECT_EQ(train.prior, 0.5);
  }
  EXPECT_EQ(p, 10u);
  EXPECT_EQ(u, 23u);
}

TEST(Splits, HeadTailKeepsFileOrder) {
  const auto data = Counted(6, 4);
  const auto [train, test] = SplitHeadTail(data, 7);
  EXPECT_EQ(train.size(), 7u);
  EXPECT_EQ(test.size(), 3u);
  EXPECT_EQ(test.instances(0, 0), 7.0);
  EXPECT_THROW(SplitHeadTail(data, 10), DataError);
}

TEST(Validation, RejectsBrokenInvariants) {
  PUDataset pu;
  pu.positives = Matrix(1, 2);
  pu.unlabeled = Matrix(1, 2);
  pu.prior = 1.0;
  EXPECT_THROW(pu.Validate(), DataError);
  pu.prior = 0.5;
  EXPECT_NO_THROW(pu.Validate());
  pu.unlabeled = Matrix(1, 3);
  EXPECT_THROW(pu.Validate(), DataError);

  LabeledDataset d = Counted(1, 1);
  d.labels[0] = 0;
  EXPECT_THROW(d.Validate(), DataError);
}

}  // namespace
}  // namespace adapu
