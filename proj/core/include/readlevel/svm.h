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

#ifndef READLEVEL_SVM_H_
#define READLEVEL_SVM_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "readlevel/dataset.h"
#include "readlevel/features.h"

namespace readlevel {

// Dense row-major matrix, instances by features.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix FromRows(const std::vector<std::vector<double>> &rows);
  // Feature values of `dataset`, in schema order.
  static Matrix FromDataset(const Dataset &dataset);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Matrix SelectRows(std::span<const size_t> rows) const;

  bool operator==(const Matrix &) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

struct ScalingParams {
  std::vector<double> means;
  std::vector<double> stds;
  // Zero-variance features; they standardize to 0.
  std::vector<bool> constant_mask;

  bool operator==(const ScalingParams &) const = default;
};

// Per-feature population mean and standard deviation.
ScalingParams StandardizeFit(const Matrix &matrix);
Matrix StandardizeApply(const Matrix &matrix, const ScalingParams &params);
std::vector<double> StandardizeRow(std::span<const double> row,
                                   const ScalingParams &params);

// How per-pair hyperplane distances collapse into one uncertainty score.
enum class UncertaintyAggregation {
  kMinDistance,
  kMeanDistance,
  // Winner's votes minus runner-up's votes.
  kVoteMargin,
};

struct TrainConfig {
  double C = 1.0;
  double tolerance = 1e-4;
  long max_iterations = 10000;
  uint64_t seed = 0;
  // Binary models trained concurrently.
  int jobs = 1;
  // kError rejects training sets whose availability masks disagree.
  FillPolicy fill = FillPolicy::kZero;

  bool operator==(const TrainConfig &) const = default;
};

struct BinaryModel {
  std::vector<double> weights;
  double bias = 0.0;
  // Decision values > 0 favour .first, < 0 favour .second.
  std::pair<int, int> label_pair{1, -1};

  double Decision(std::span<const double> standardized) const;
  double WeightNorm() const;

  bool operator==(const BinaryModel &) const = default;
};

// Optional diagnostics of one binary solve.
struct TrainTrace {
  // Dual objective after every pair update.
  std::vector<double> dual_objective;
  std::vector<double> alphas;
  long iterations = 0;
  bool converged = false;
};

// Soft-margin linear SVM with an unregularized bias, solved in the dual by
// two-coordinate (SMO) descent with second-order working-set selection.
// Labels are +1/-1; the visit order is a seeded permutation.
BinaryModel TrainBinary(const Matrix &x, std::span<const int> y,
                        const TrainConfig &config, TrainTrace *trace = nullptr);

// 0.5 * |w|^2 + C * sum hinge(y * (w.x + b)).
double PrimalObjective(const BinaryModel &model, const Matrix &x,
                       std::span<const int> y, double C);

struct MulticlassModel {
  // One per unordered label pair, in (i, j) order with i < j.
  std::vector<BinaryModel> binaries;
  std::vector<int> labels;
  ScalingParams scaling;
  std::vector<std::string> feature_names;
  TrainConfig config;

  bool operator==(const MulticlassModel &) const = default;
};

// One-vs-one training; scaling is fit on the full training matrix.
MulticlassModel TrainMulticlass(const Matrix &raw, std::span<const int> labels,
                                std::vector<std::string> feature_names,
                                const TrainConfig &config);
MulticlassModel TrainMulticlass(const Dataset &dataset,
                                const TrainConfig &config);

// Raw (unstandardized) feature values in model.feature_names order.
std::vector<double> DecisionValues(const MulticlassModel &model,
                                   std::span<const double> raw);
std::vector<double> DecisionValues(const MulticlassModel &model,
                                   const FeatureVector &x);

// |f(x)| / |w| per binary.
std::vector<double> HyperplaneDistances(const MulticlassModel &model,
                                        std::span<const double> raw);

// Majority vote; a zero decision value casts no vote and ties go to the
// smallest label.
int Predict(const MulticlassModel &model, std::span<const double> raw);
int Predict(const MulticlassModel &model, const FeatureVector &x);

// Smaller means less certain.
double Uncertainty(
    const MulticlassModel &model, std::span<const double> raw,
    UncertaintyAggregation aggregation = UncertaintyAggregation::kMinDistance);
double Uncertainty(
    const MulticlassModel &model, const FeatureVector &x,
    UncertaintyAggregation aggregation = UncertaintyAggregation::kMinDistance);

// Values of `x` in model.feature_names order, honouring the fill policy.
std::vector<double> AlignFeatures(const MulticlassModel &model,
                                  const FeatureVector &x);

}  // namespace readlevel

#endif  // READLEVEL_SVM_H_
