// Copyright 2026 The Readlevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "readlevel/evaluation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "readlevel/error.h"

namespace readlevel {
namespace {

std::string CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "none";
}

const std::vector<std::vector<long>> kGradeConfusion = {
    {182, 45, 9, 4, 2},
    {36, 160, 102, 14, 1},
    {11, 99, 170, 39, 19},
    {6, 13, 79, 118, 71},
    {3, 5, 28, 60, 180},
};

TEST(ConfusionTest, GradeLevelMatrixArithmetic) {
  ConfusionMatrix cm;
  cm.labels = {1, 2, 3, 4, 5};
  cm.counts = kGradeConfusion;
  EXPECT_EQ(cm.Trace(), 810);
  EXPECT_EQ(cm.Total(), 1456);
  EXPECT_EQ(cm.RowSums(), (std::vector<long>{242, 313, 338, 287, 276}));
  EXPECT_DOUBLE_EQ(AccuracyFromConfusion(cm), 810.0 / 1456.0);
  EXPECT_NEAR(AccuracyFromConfusion(kGradeConfusion), 0.5563, 5e-5);
}

TEST(ConfusionTest, DiagonalExtremes) {
  EXPECT_DOUBLE_EQ(AccuracyFromConfusion({{3, 0}, {0, 4}}), 1.0);
  EXPECT_DOUBLE_EQ(AccuracyFromConfusion({{0, 3}, {4, 0}}), 0.0);
}

using Counts = std::vector<std::vector<long>>;

TEST(ConfusionTest, Errors) {
  EXPECT_EQ(CodeOf([] { AccuracyFromConfusion(Counts{}); }), "empty_confusion");
  EXPECT_EQ(CodeOf([] { AccuracyFromConfusion({{0, 0}, {0, 0}}); }),
            "empty_confusion");
  EXPECT_EQ(CodeOf([] { AccuracyFromConfusion(Counts{{1, 2}}); }),
            "dimension_mismatch");
  EXPECT_EQ(CodeOf([] { AccuracyFromConfusion({{1, -1}, {0, 1}}); }),
            "negative_count");
  ConfusionMatrix cm = ConfusionMatrix::Zero({1, 3});
  cm.Add(3, 1);
  EXPECT_EQ(cm.counts[1][0], 1);
  EXPECT_EQ(CodeOf([&] { cm.Add(2, 1); }), "unknown_label");
}

TEST(MakeFoldsTest, UnstratifiedEvenSplit) {
  std::vector<int> labels(10, 1);
  EvalConfig cfg;
  cfg.k = 5;
  cfg.stratified = false;
  auto folds = MakeFolds(labels, cfg);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto &f : folds) EXPECT_EQ(f.size(), 2u);
}

TEST(MakeFoldsTest, StratifiedTwoClasses) {
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) labels.push_back(i < 10 ? 1 : 2);
  EvalConfig cfg;
  cfg.k = 5;
  cfg.seed = 4;
  auto folds = MakeFolds(labels, cfg);
  for (const auto &f : folds) {
    int ones = 0;
    for (size_t i : f) ones += labels[i] == 1;
    EXPECT_EQ(ones, 2);
    EXPECT_EQ(f.size(), 4u);
  }
  EXPECT_EQ(folds, MakeFolds(labels, cfg));
  cfg.seed = 5;
  EXPECT_NE(folds, MakeFolds(labels, cfg));
}

TEST(MakeFoldsTest, PartitionAndProportionProperty) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng() % 9);
    int classes = 1 + static_cast<int>(rng() % 5);
    std::vector<int> labels;
    std::map<int, int> per_class;
    for (int c = 1; c <= classes; ++c) {
      int count = k + static_cast<int>(rng() % 30);
      per_class[c] = count;
      for (int i = 0; i < count; ++i) labels.push_back(c);
    }
    std::shuffle(labels.begin(), labels.end(), rng);
    EvalConfig cfg;
    cfg.k = k;
    cfg.seed = rng();
    cfg.stratified = rng() % 2;
    auto folds = MakeFolds(labels, cfg);
    ASSERT_EQ(folds.size(), size_t(k));
    std::vector<int> seen(labels.size(), 0);
    for (const auto &f : folds) {
      EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
      for (size_t i : f) ++seen[i];
    }
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), long(labels.size()));
    size_t lo = labels.size(), hi = 0;
    for (const auto &f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
    }
    if (!cfg.stratified) {
      EXPECT_LE(hi - lo, 1u);
      continue;
    }
    for (const auto &[c, count] : per_class) {
      for (const auto &f : folds) {
        long in = std::count_if(f.begin(), f.end(),
                                [&](size_t i) { return labels[i] == c; });
        double expected = double(count) / k;
        EXPECT_LT(std::abs(in - expected), 1.0) << "class " << c;
      }
    }
  }
}

TEST(MakeFoldsTest, Errors) {
  std::vector<int> labels = {1, 1, 1, 2, 2, 2, 2};
  EvalConfig cfg;
  cfg.k = 4;
  EXPECT_EQ(CodeOf([&] { MakeFolds(labels, cfg); }), "invalid_folds");
  cfg.stratified = false;
  EXPECT_EQ(MakeFolds(labels, cfg).size(), 4u);
  cfg.k = 8;
  EXPECT_EQ(CodeOf([&] { MakeFolds(labels, cfg); }), "invalid_folds");
  cfg.k = 1;
  EXPECT_EQ(CodeOf([&] { MakeFolds(labels, cfg); }), "invalid_folds");
}

struct Synthetic {
  Matrix x;
  std::vector<int> labels;
  std::vector<std::string> names;
};

Synthetic Gaussian(uint64_t seed, int per_class, int classes, double sigma,
                   double gap) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Synthetic s;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < per_class * classes; ++i) {
    int c = i % classes;
    rows.push_back({gap * c + noise(rng), noise(rng), -gap * c + noise(rng)});
    s.labels.push_back(c + 1);
  }
  s.x = Matrix::FromRows(rows);
  s.names = {"a", "b", "c"};
  return s;
}

TEST(CrossValidateTest, SeparableDataIsPerfect) {
  Synthetic s = Gaussian(1, 20, 2, 0.3, 10.0);
  EvalConfig cfg;
  cfg.k = 5;
  EvaluationReport r = CrossValidate(s.x, s.labels, s.names, {}, cfg);
  EXPECT_DOUBLE_EQ(r.mean_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.spread, 0.0);
  EXPECT_DOUBLE_EQ(r.pooled_accuracy, 1.0);
  EXPECT_EQ(r.per_fold_accuracy.size(), 5u);
}

TEST(CrossValidateTest, ReportBookkeeping) {
  Synthetic s = Gaussian(2, 25, 4, 2.0, 1.0);
  EvalConfig cfg;
  cfg.k = 7;
  cfg.seed = 3;
  EvaluationReport r = CrossValidate(s.x, s.labels, s.names, {}, cfg);
  ASSERT_EQ(r.per_fold_accuracy.size(), 7u);
  EXPECT_EQ(r.confusion.RowSums(), (std::vector<long>{25, 25, 25, 25}));
  long correct = 0;
  for (size_t i = 0; i < s.labels.size(); ++i) {
    correct += r.predictions[i] == s.labels[i];
  }
  double weighted = 0.0;
  for (size_t f = 0; f < r.fold_sizes.size(); ++f) {
    weighted += r.per_fold_accuracy[f] * double(r.fold_sizes[f]);
  }
  EXPECT_NEAR(weighted / double(s.labels.size()), r.pooled_accuracy, 1e-12);
  EXPECT_DOUBLE_EQ(r.pooled_accuracy, AccuracyFromConfusion(r.confusion));
  EXPECT_DOUBLE_EQ(r.pooled_accuracy, double(correct) / s.labels.size());

  double mean = std::accumulate(r.per_fold_accuracy.begin(),
                                r.per_fold_accuracy.end(), 0.0) / 7.0;
  double var = 0.0;
  for (double a : r.per_fold_accuracy) var += (a - mean) * (a - mean);
  EXPECT_NEAR(r.mean_accuracy, mean, 1e-12);
  EXPECT_NEAR(r.std_accuracy, std::sqrt(var / 7.0), 1e-12);
  EXPECT_NEAR(r.spread, 2.0 * r.std_accuracy, 1e-12);
}

TEST(CrossValidateTest, LeaveOneOutMatchesBruteForceRetraining) {
  Synthetic s = Gaussian(5, 10, 3, 1.5, 1.5);
  const size_t n = s.labels.size();
  ASSERT_EQ(n, 30u);
  TrainConfig train;
  train.seed = 11;
  EvalConfig cfg;
  cfg.k = static_cast<int>(n);
  cfg.stratified = false;
  EvaluationReport r = CrossValidate(s.x, s.labels, s.names, train, cfg);
  for (size_t held = 0; held < n; ++held) {
    std::vector<size_t> rows;
    std::vector<int> labels;
    for (size_t i = 0; i < n; ++i) {
      if (i == held) continue;
      rows.push_back(i);
      labels.push_back(s.labels[i]);
    }
    MulticlassModel m =
        TrainMulticlass(s.x.SelectRows(rows), labels, s.names, train);
    EXPECT_EQ(r.predictions[held], Predict(m, s.x.row(held))) << held;
  }
}

TEST(CrossValidateTest, ParallelFoldsMatchSerial) {
  Synthetic s = Gaussian(6, 20, 3, 2.0, 1.0);
  EvalConfig cfg;
  cfg.k = 5;
  EvaluationReport serial = CrossValidate(s.x, s.labels, s.names, {}, cfg);
  cfg.jobs = 3;
  EvaluationReport parallel = CrossValidate(s.x, s.labels, s.names, {}, cfg);
  EXPECT_EQ(serial.predictions, parallel.predictions);
  EXPECT_EQ(serial.per_fold_accuracy, parallel.per_fold_accuracy);
}

TEST(CrossValidateTest, ShuffledLabelsSitNearChance) {
  double sum = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Synthetic s = Gaussian(100 + seed, 30, 5, 1.0, 0.0);
    std::mt19937_64 rng(seed);
    std::shuffle(s.labels.begin(), s.labels.end(), rng);
    EvalConfig cfg;
    cfg.seed = seed;
    sum += CrossValidate(s.x, s.labels, s.names, {}, cfg).mean_accuracy;
  }
  EXPECT_NEAR(sum / 20.0, 0.2, 0.1);
}

TEST(CrossValidateTest, FoldFailureNamesTheFold) {
  Matrix x = Matrix::FromRows({{0.0}, {1.0}, {2.0}, {3.0}});
  std::vector<int> labels = {1, 1, 1, 2};
  EvalConfig cfg;
  cfg.k = 4;
  cfg.stratified = false;
  try {
    CrossValidate(x, labels, {"f"}, {}, cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "fold_failed");
    EXPECT_NE(std::string(e.what()).find("fold "), std::string::npos);
  }
}

TEST(KappaTest, HandComputedCases) {
  std::vector<int> a = {1, 2, 3, 2, 1};
  AgreementReport same = CohenKappa(a, a);
  EXPECT_DOUBLE_EQ(same.kappa, 1.0);
  EXPECT_FALSE(same.degenerate);

  // Contingency [[20, 5], [10, 15]].
  std::vector<int> x, y;
  auto push = [&](int u, int v, int times) {
    for (int i = 0; i < times; ++i) {
      x.push_back(u);
      y.push_back(v);
    }
  };
  push(1, 1, 20);
  push(1, 2, 5);
  push(2, 1, 10);
  push(2, 2, 15);
  AgreementReport r = CohenKappa(x, y);
  EXPECT_NEAR(r.observed_agreement, 0.7, 1e-12);
  EXPECT_NEAR(r.expected_agreement, 0.5, 1e-12);
  EXPECT_NEAR(r.kappa, 0.4, 1e-12);
  EXPECT_EQ(r.band, "fair");
  EXPECT_EQ(r.count, 50u);

  std::vector<int> p = {1, 2}, q = {2, 1};
  AgreementReport opposite = CohenKappa(p, q);
  EXPECT_DOUBLE_EQ(opposite.observed_agreement, 0.0);
  EXPECT_DOUBLE_EQ(opposite.expected_agreement, 0.5);
  EXPECT_DOUBLE_EQ(opposite.kappa, -1.0);
  EXPECT_EQ(opposite.band, "poor");
}

TEST(KappaTest, DegenerateMarginals) {
  std::vector<int> a = {3, 3, 3};
  AgreementReport r = CohenKappa(a, a);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
}

TEST(KappaTest, SymmetricAndMatchesDefinition) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 1 + rng() % 40;
    std::vector<int> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = 1 + rng() % 4;
      b[i] = rng() % 3 ? a[i] : 1 + static_cast<int>(rng() % 4);
    }
    AgreementReport ab = CohenKappa(a, b);
    AgreementReport ba = CohenKappa(b, a);
    EXPECT_DOUBLE_EQ(ab.kappa, ba.kappa);
    std::map<int, double> ma, mb;
    double po = 0.0;
    for (size_t i = 0; i < n; ++i) {
      ma[a[i]] += 1.0 / n;
      mb[b[i]] += 1.0 / n;
      po += a[i] == b[i] ? 1.0 / n : 0.0;
    }
    double pe = 0.0;
    for (const auto &[label, share] : ma) pe += share * mb[label];
    if (pe < 1.0 - 1e-12) {
      EXPECT_NEAR(ab.kappa, (po - pe) / (1.0 - pe), 1e-9);
    }
    EXPECT_GE(ab.kappa, -1.0 - 1e-12);
    EXPECT_LE(ab.kappa, 1.0 + 1e-12);
  }
}

TEST(KappaTest, Errors) {
  std::vector<int> a = {1, 2}, b = {1};
  std::vector<int> none;
  EXPECT_EQ(CodeOf([&] { CohenKappa(a, b); }), "length_mismatch");
  EXPECT_EQ(CodeOf([&] { CohenKappa(none, none); }), "empty_input");
}

TEST(LandisKochTest, BandsAreClosedAtTheTop) {
  EXPECT_EQ(LandisKoch(0.528), "moderate");
  EXPECT_EQ(LandisKoch(1.0), "almost perfect");
  EXPECT_EQ(LandisKoch(-0.3), "poor");
  EXPECT_EQ(LandisKoch(0.0), "slight");
  EXPECT_EQ(LandisKoch(0.20), "slight");
  EXPECT_EQ(LandisKoch(0.2001), "fair");
  EXPECT_EQ(LandisKoch(0.40), "fair");
  EXPECT_EQ(LandisKoch(0.60), "moderate");
  EXPECT_EQ(LandisKoch(0.80), "substantial");
  EXPECT_EQ(LandisKoch(0.81), "almost perfect");
  EXPECT_EQ(CodeOf([] { LandisKoch(1.5); }), "out_of_range");
  EXPECT_EQ(CodeOf([] { LandisKoch(std::nan("")); }), "out_of_range");
}

}  // namespace
}  // namespace readlevel
