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

#include <algorithm>
#include <cmath>
#include <map>

#include "readlevel/error.h"
#include "readlevel/parallel.h"
#include "readlevel/random.h"

namespace readlevel {

ConfusionMatrix ConfusionMatrix::Zero(std::vector<int> labels) {
  ConfusionMatrix m;
  const size_t n = labels.size();
  m.labels = std::move(labels);
  m.counts.assign(n, std::vector<long>(n, 0));
  return m;
}

void ConfusionMatrix::Add(int gold, int predicted) {
  auto g = std::find(labels.begin(), labels.end(), gold);
  auto p = std::find(labels.begin(), labels.end(), predicted);
  if (g == labels.end() || p == labels.end()) {
    throw Error("unknown_label", "label outside confusion matrix");
  }
  ++counts[g - labels.begin()][p - labels.begin()];
}

long ConfusionMatrix::Total() const {
  long total = 0;
  for (const auto &row : counts) {
    for (long c : row) total += c;
  }
  return total;
}

long ConfusionMatrix::Trace() const {
  long trace = 0;
  for (size_t i = 0; i < counts.size(); ++i) trace += counts[i][i];
  return trace;
}

std::vector<long> ConfusionMatrix::RowSums() const {
  std::vector<long> sums;
  for (const auto &row : counts) {
    long s = 0;
    for (long c : row) s += c;
    sums.push_back(s);
  }
  return sums;
}

double AccuracyFromConfusion(const std::vector<std::vector<long>> &counts) {
  if (counts.empty()) throw Error("empty_confusion", "empty confusion matrix");
  long total = 0;
  long trace = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != counts.size()) {
      throw Error("dimension_mismatch", "confusion matrix is not square");
    }
    for (size_t j = 0; j < counts[i].size(); ++j) {
      if (counts[i][j] < 0) {
        throw Error("negative_count", "negative confusion count");
      }
      total += counts[i][j];
      if (i == j) trace += counts[i][j];
    }
  }
  if (total == 0) throw Error("empty_confusion", "confusion total is zero");
  return double(trace) / double(total);
}

double AccuracyFromConfusion(const ConfusionMatrix &confusion) {
  return AccuracyFromConfusion(confusion.counts);
}

std::vector<std::vector<size_t>> MakeFolds(std::span<const int> labels,
                                           const EvalConfig &config) {
  const size_t n = labels.size();
  if (config.k < 2) throw Error("invalid_folds", "k must be at least 2");
  const size_t k = static_cast<size_t>(config.k);
  if (k > n) {
    throw Error("invalid_folds", "k=" + std::to_string(k) + " exceeds " +
                                     std::to_string(n) + " instances");
  }
  std::vector<std::vector<size_t>> folds(k);
  const std::vector<size_t> perm = SeededPermutation(n, config.seed);
  if (!config.stratified) {
    for (size_t t = 0; t < n; ++t) folds[t % k].push_back(perm[t]);
  } else {
    std::map<int, std::vector<size_t>> by_class;
    for (size_t t : perm) by_class[labels[t]].push_back(t);
    size_t next = 0;
    for (const auto &[label, members] : by_class) {
      if (members.size() < k) {
        throw Error("invalid_folds",
                    "class " + std::to_string(label) + " has " +
                        std::to_string(members.size()) + " instances, fewer "
                        "than k=" + std::to_string(k));
      }
      // Continue dealing where the previous class stopped so fold sizes
      // stay within one of each other overall.
      for (size_t index : members) {
        folds[next].push_back(index);
        next = (next + 1) % k;
      }
    }
  }
  for (auto &fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<std::vector<size_t>> MakeFolds(const Dataset &dataset,
                                           const EvalConfig &config) {
  std::vector<int> labels = dataset.Targets();
  return MakeFolds(labels, config);
}

EvaluationReport CrossValidate(const Matrix &raw, std::span<const int> labels,
                               const std::vector<std::string> &feature_names,
                               const TrainConfig &train_config,
                               const EvalConfig &eval_config) {
  if (labels.size() != raw.rows()) {
    throw Error("dimension_mismatch", "label count mismatch");
  }
  const size_t n = raw.rows();
  const auto folds = MakeFolds(labels, eval_config);
  std::vector<int> label_set(labels.begin(), labels.end());
  std::sort(label_set.begin(), label_set.end());
  label_set.erase(std::unique(label_set.begin(), label_set.end()),
                  label_set.end());

  EvaluationReport report;
  report.eval_config = eval_config;
  report.train_config = train_config;
  report.predictions.assign(n, 0);
  report.per_fold_accuracy.assign(folds.size(), 0.0);

  ParallelFor(folds.size(), eval_config.jobs, [&](size_t f) {
    std::vector<bool> held(n, false);
    for (size_t index : folds[f]) held[index] = true;
    std::vector<size_t> train_rows;
    std::vector<int> train_labels;
    for (size_t t = 0; t < n; ++t) {
      if (!held[t]) {
        train_rows.push_back(t);
        train_labels.push_back(labels[t]);
      }
    }
    MulticlassModel model;
    try {
      model = TrainMulticlass(raw.SelectRows(train_rows), train_labels,
                              feature_names, train_config);
    } catch (const Error &e) {
      throw Error("fold_failed",
                  "fold " + std::to_string(f) + ": " + e.what());
    }
    long correct = 0;
    for (size_t index : folds[f]) {
      int predicted = Predict(model, raw.row(index));
      report.predictions[index] = predicted;
      if (predicted == labels[index]) ++correct;
    }
    report.per_fold_accuracy[f] = double(correct) / double(folds[f].size());
  });

  report.confusion = ConfusionMatrix::Zero(label_set);
  long correct = 0;
  for (size_t t = 0; t < n; ++t) {
    report.confusion.Add(labels[t], report.predictions[t]);
    if (report.predictions[t] == labels[t]) ++correct;
  }
  for (const auto &fold : folds) report.fold_sizes.push_back(fold.size());
  double sum = 0.0;
  for (double a : report.per_fold_accuracy) sum += a;
  report.mean_accuracy = sum / double(folds.size());
  double var = 0.0;
  for (double a : report.per_fold_accuracy) {
    var += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  }
  report.std_accuracy = std::sqrt(var / double(folds.size()));
  report.spread = 2.0 * report.std_accuracy;
  report.pooled_accuracy = double(correct) / double(n);
  return report;
}

EvaluationReport CrossValidate(const Dataset &dataset,
                               const TrainConfig &train_config,
                               const EvalConfig &eval_config) {
  std::vector<int> labels = dataset.Targets();
  return CrossValidate(Matrix::FromDataset(dataset), labels,
                       dataset.feature_names(), train_config, eval_config);
}

AgreementReport CohenKappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error("length_mismatch",
                "label sequences differ in length: " +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  if (a.empty()) throw Error("empty_input", "no labels to compare");
  const double n = double(a.size());
  std::map<int, long> ma;
  std::map<int, long> mb;
  long equal = 0;
  for (size_t t = 0; t < a.size(); ++t) {
    ++ma[a[t]];
    ++mb[b[t]];
    if (a[t] == b[t]) ++equal;
  }
  AgreementReport report;
  report.count = a.size();
  report.observed_agreement = double(equal) / n;
  double pe = 0.0;
  for (const auto &[label, count] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) pe += (double(count) / n) * (double(it->second) / n);
  }
  report.expected_agreement = pe;
  if (pe >= 1.0 - 1e-15) {
    report.degenerate = true;
    report.kappa = report.observed_agreement == 1.0 ? 1.0 : 0.0;
  } else {
    report.kappa = (report.observed_agreement - pe) / (1.0 - pe);
  }
  report.band = LandisKoch(std::clamp(report.kappa, -1.0, 1.0));
  return report;
}

std::string LandisKoch(double kappa) {
  if (!(kappa >= -1.0 && kappa <= 1.0)) {
    throw Error("out_of_range", "kappa outside [-1, 1]");
  }
  if (kappa < 0.0) return "poor";
  if (kappa <= 0.20) return "slight";
  if (kappa <= 0.40) return "fair";
  if (kappa <= 0.60) return "moderate";
  if (kappa <= 0.80) return "substantial";
  return "almost perfect";
}

}  // namespace readlevel
