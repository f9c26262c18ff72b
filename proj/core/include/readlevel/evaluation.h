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

#ifndef READLEVEL_EVALUATION_H_
#define READLEVEL_EVALUATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "readlevel/dataset.h"
#include "readlevel/svm.h"

namespace readlevel {

struct EvalConfig {
  int k = 10;
  uint64_t seed = 0;
  bool stratified = true;
  // Folds evaluated concurrently.
  int jobs = 1;

  bool operator==(const EvalConfig &) const = default;
};

// Square count matrix over an ordered label set; rows are gold labels.
struct ConfusionMatrix {
  std::vector<int> labels;
  std::vector<std::vector<long>> counts;

  static ConfusionMatrix Zero(std::vector<int> labels);
  // Throws when either label is outside `labels`.
  void Add(int gold, int predicted);
  long Total() const;
  long Trace() const;
  std::vector<long> RowSums() const;

  bool operator==(const ConfusionMatrix &) const = default;
};

// Trace over total; throws when the matrix is empty or all zero.
double AccuracyFromConfusion(const ConfusionMatrix &confusion);
double AccuracyFromConfusion(const std::vector<std::vector<long>> &counts);

struct EvaluationReport {
  std::vector<double> per_fold_accuracy;
  std::vector<size_t> fold_sizes;
  double mean_accuracy = 0.0;
  // Population standard deviation of the fold accuracies, and twice it.
  double std_accuracy = 0.0;
  double spread = 0.0;
  // Correct predictions over all instances.
  double pooled_accuracy = 0.0;
  ConfusionMatrix confusion;
  // Held-out prediction for each dataset index.
  std::vector<int> predictions;
  EvalConfig eval_config;
  TrainConfig train_config;
};

// k disjoint index sets covering 0..n-1, each sorted ascending.
std::vector<std::vector<size_t>> MakeFolds(std::span<const int> labels,
                                           const EvalConfig &config);
std::vector<std::vector<size_t>> MakeFolds(const Dataset &dataset,
                                           const EvalConfig &config);

EvaluationReport CrossValidate(const Matrix &raw, std::span<const int> labels,
                               const std::vector<std::string> &feature_names,
                               const TrainConfig &train_config,
                               const EvalConfig &eval_config);
EvaluationReport CrossValidate(const Dataset &dataset,
                               const TrainConfig &train_config,
                               const EvalConfig &eval_config);

struct AgreementReport {
  double kappa = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  std::string band;
  // Expected agreement was 1, so kappa is set by convention.
  bool degenerate = false;
  size_t count = 0;
};

AgreementReport CohenKappa(std::span<const int> a, std::span<const int> b);

// "poor", "slight", "fair", "moderate", "substantial", "almost perfect".
std::string LandisKoch(double kappa);

}  // namespace readlevel

#endif  // READLEVEL_EVALUATION_H_
