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

#include "readlevel/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "readlevel/error.h"
#include "readlevel/parallel.h"
#include "readlevel/random.h"

namespace readlevel {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this many instances kernel rows are computed on demand.
constexpr size_t kMaxCachedGram = 6000;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Linear-kernel rows K(i, .), fully cached for small problems.
class KernelRows {
 public:
  explicit KernelRows(const Matrix &x) : x_(x), n_(x.rows()) {
    if (n_ <= kMaxCachedGram) {
      gram_.assign(n_ * n_, 0.0);
      for (size_t i = 0; i < n_; ++i) {
        for (size_t j = i; j < n_; ++j) {
          double v = Dot(x.row(i), x.row(j));
          gram_[i * n_ + j] = v;
          gram_[j * n_ + i] = v;
        }
      }
    } else {
      for (auto &slot : slots_) slot.values.resize(n_);
    }
    diagonal_.resize(n_);
    for (size_t i = 0; i < n_; ++i) diagonal_[i] = Dot(x.row(i), x.row(i));
  }

  double Diagonal(size_t i) const { return diagonal_[i]; }

  std::span<const double> Row(size_t i) {
    if (!gram_.empty()) return {gram_.data() + i * n_, n_};
    for (auto &slot : slots_) {
      if (slot.index == i) return slot.values;
    }
    Slot &victim = slots_[next_victim_];
    next_victim_ = 1 - next_victim_;
    victim.index = i;
    for (size_t j = 0; j < n_; ++j) victim.values[j] = Dot(x_.row(i), x_.row(j));
    return victim.values;
  }

 private:
  struct Slot {
    size_t index = static_cast<size_t>(-1);
    std::vector<double> values;
  };
  const Matrix &x_;
  size_t n_;
  std::vector<double> gram_;
  std::vector<double> diagonal_;
  Slot slots_[2];
  int next_victim_ = 0;
};

void CheckFinite(const Matrix &x) {
  for (size_t r = 0; r < x.rows(); ++r) {
    for (double v : x.row(r)) {
      if (!std::isfinite(v)) {
        throw Error("non_finite_feature",
                    "non-finite feature value in row " + std::to_string(r));
      }
    }
  }
}

}  // namespace

Matrix Matrix::FromRows(const std::vector<std::vector<double>> &rows) {
  size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw Error("dimension_mismatch", "ragged matrix rows");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::FromDataset(const Dataset &dataset) {
  Matrix m(dataset.size(), dataset.feature_count());
  for (size_t r = 0; r < dataset.size(); ++r) {
    auto values = dataset[r].features.values();
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::SelectRows(std::span<const size_t> rows) const {
  Matrix m(rows.size(), cols_);
  for (size_t r = 0; r < rows.size(); ++r) {
    auto src = row(rows[r]);
    std::copy(src.begin(), src.end(), m.row(r).begin());
  }
  return m;
}

ScalingParams StandardizeFit(const Matrix &matrix) {
  if (matrix.rows() < 2) {
    throw Error("too_few_instances", "scaling needs at least 2 instances");
  }
  const size_t n = matrix.rows();
  const size_t d = matrix.cols();
  ScalingParams p;
  p.means.assign(d, 0.0);
  p.stds.assign(d, 0.0);
  p.constant_mask.assign(d, false);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < d; ++c) p.means[c] += matrix(r, c);
  }
  for (double &m : p.means) m /= double(n);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < d; ++c) {
      double dev = matrix(r, c) - p.means[c];
      p.stds[c] += dev * dev;
    }
  }
  for (size_t c = 0; c < d; ++c) {
    p.stds[c] = std::sqrt(p.stds[c] / double(n));
    double scale = std::max(1.0, std::abs(p.means[c]));
    if (p.stds[c] <= 1e-12 * scale) {
      p.constant_mask[c] = true;
      p.stds[c] = 1.0;
    }
  }
  return p;
}

std::vector<double> StandardizeRow(std::span<const double> row,
                                   const ScalingParams &params) {
  if (row.size() != params.means.size()) {
    throw Error("dimension_mismatch",
                "expected " + std::to_string(params.means.size()) +
                    " features, got " + std::to_string(row.size()));
  }
  std::vector<double> out(row.size());
  for (size_t c = 0; c < row.size(); ++c) {
    out[c] = params.constant_mask[c]
                 ? 0.0
                 : (row[c] - params.means[c]) / params.stds[c];
  }
  return out;
}

Matrix StandardizeApply(const Matrix &matrix, const ScalingParams &params) {
  if (matrix.cols() != params.means.size()) {
    throw Error("dimension_mismatch",
                "expected " + std::to_string(params.means.size()) +
                    " features, got " + std::to_string(matrix.cols()));
  }
  Matrix out(matrix.rows(), matrix.cols());
  for (size_t r = 0; r < matrix.rows(); ++r) {
    std::vector<double> z = StandardizeRow(matrix.row(r), params);
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

double BinaryModel::Decision(std::span<const double> standardized) const {
  return Dot(weights, standardized) + bias;
}

double BinaryModel::WeightNorm() const {
  return std::sqrt(Dot(weights, weights));
}

BinaryModel TrainBinary(const Matrix &x, std::span<const int> y,
                        const TrainConfig &config, TrainTrace *trace) {
  const size_t n = x.rows();
  if (y.size() != n) throw Error("dimension_mismatch", "label count mismatch");
  if (!(config.C > 0)) throw Error("invalid_config", "C must be positive");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw Error("invalid_label", "binary labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw Error("single_class", "binary training needs both classes");
  }
  CheckFinite(x);

  const double C = config.C;
  KernelRows kernel(x);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  const std::vector<size_t> order = SeededPermutation(n, config.seed);

  auto upper = [&](size_t t) { return alpha[t] >= C; };
  auto lower = [&](size_t t) { return alpha[t] <= 0.0; };
  auto dual_objective = [&] {
    double s = 0.0;
    for (size_t t = 0; t < n; ++t) s += alpha[t] * (grad[t] - 1.0);
    return 0.5 * s;
  };

  long iter = 0;
  bool converged = false;
  while (iter < config.max_iterations) {
    // Maximal violating index i, then second-order choice of j.
    double gmax = -kInf;
    long i = -1;
    for (size_t t : order) {
      if (y[t] == 1) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i = static_cast<long>(t);
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i = static_cast<long>(t);
      }
    }
    double gmax2 = -kInf;
    long j = -1;
    double best = kInf;
    std::span<const double> ki;
    if (i >= 0) ki = kernel.Row(static_cast<size_t>(i));
    for (size_t t : order) {
      if (i < 0) break;
      double quad;
      double diff;
      if (y[t] == 1) {
        if (lower(t)) continue;
        diff = gmax + grad[t];
        gmax2 = std::max(gmax2, grad[t]);
        quad = kernel.Diagonal(i) + kernel.Diagonal(t) - 2.0 * y[i] * ki[t];
      } else {
        if (upper(t)) continue;
        diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        quad = kernel.Diagonal(i) + kernel.Diagonal(t) + 2.0 * y[i] * ki[t];
      }
      if (diff > 0) {
        double obj = -(diff * diff) / (quad > 0 ? quad : kTau);
        if (obj <= best) {
          best = obj;
          j = static_cast<long>(t);
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < config.tolerance) {
      converged = true;
      break;
    }
    ++iter;

    const size_t a = static_cast<size_t>(i);
    const size_t b = static_cast<size_t>(j);
    std::vector<double> ka(ki.begin(), ki.end());
    std::span<const double> kb = kernel.Row(b);
    const double qab = y[a] * y[b] * ka[b];
    const double old_a = alpha[a];
    const double old_b = alpha[b];
    if (y[a] != y[b]) {
      double quad = kernel.Diagonal(a) + kernel.Diagonal(b) + 2.0 * qab;
      if (quad <= 0) quad = kTau;
      double delta = (-grad[a] - grad[b]) / quad;
      double diff = alpha[a] - alpha[b];
      alpha[a] += delta;
      alpha[b] += delta;
      if (diff > 0) {
        if (alpha[b] < 0) {
          alpha[b] = 0;
          alpha[a] = diff;
        }
      } else if (alpha[a] < 0) {
        alpha[a] = 0;
        alpha[b] = -diff;
      }
      if (diff > 0) {
        if (alpha[a] > C) {
          alpha[a] = C;
          alpha[b] = C - diff;
        }
      } else if (alpha[b] > C) {
        alpha[b] = C;
        alpha[a] = C + diff;
      }
    } else {
      double quad = kernel.Diagonal(a) + kernel.Diagonal(b) - 2.0 * qab;
      if (quad <= 0) quad = kTau;
      double delta = (grad[a] - grad[b]) / quad;
      double sum = alpha[a] + alpha[b];
      alpha[a] -= delta;
      alpha[b] += delta;
      if (sum > C) {
        if (alpha[a] > C) {
          alpha[a] = C;
          alpha[b] = sum - C;
        }
      } else if (alpha[b] < 0) {
        alpha[b] = 0;
        alpha[a] = sum;
      }
      if (sum > C) {
        if (alpha[b] > C) {
          alpha[b] = C;
          alpha[a] = sum - C;
        }
      } else if (alpha[a] < 0) {
        alpha[a] = 0;
        alpha[b] = sum;
      }
    }
    const double da = (alpha[a] - old_a) * y[a];
    const double db = (alpha[b] - old_b) * y[b];
    for (size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (ka[t] * da + kb[t] * db);
    }
    if (trace) trace->dual_objective.push_back(dual_objective());
  }

  BinaryModel model;
  model.weights.assign(x.cols(), 0.0);
  for (size_t t = 0; t < n; ++t) {
    if (alpha[t] == 0.0) continue;
    auto row = x.row(t);
    for (size_t c = 0; c < x.cols(); ++c) {
      model.weights[c] += alpha[t] * y[t] * row[c];
    }
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  long free = 0;
  for (size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (lower(t)) {
      if (y[t] == 1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++free;
      sum_free += yg;
    }
  }
  double rho = free > 0 ? sum_free / double(free) : (ub + lb) / 2.0;
  model.bias = -rho;

  if (trace) {
    trace->alphas = alpha;
    trace->iterations = iter;
    trace->converged = converged;
  }
  return model;
}

double PrimalObjective(const BinaryModel &model, const Matrix &x,
                       std::span<const int> y, double C) {
  double obj = 0.5 * Dot(model.weights, model.weights);
  for (size_t r = 0; r < x.rows(); ++r) {
    double margin = y[r] * model.Decision(x.row(r));
    obj += C * std::max(0.0, 1.0 - margin);
  }
  return obj;
}

MulticlassModel TrainMulticlass(const Matrix &raw, std::span<const int> labels,
                                std::vector<std::string> feature_names,
                                const TrainConfig &config) {
  if (labels.size() != raw.rows()) {
    throw Error("dimension_mismatch", "label count mismatch");
  }
  if (feature_names.size() != raw.cols()) {
    throw Error("dimension_mismatch", "feature name count mismatch");
  }
  std::vector<int> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    throw Error("too_few_labels", "training needs at least 2 distinct labels");
  }
  CheckFinite(raw);

  MulticlassModel model;
  model.labels = distinct;
  model.feature_names = std::move(feature_names);
  model.config = config;
  model.scaling = StandardizeFit(raw);
  const Matrix z = StandardizeApply(raw, model.scaling);

  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t a = 0; a < distinct.size(); ++a) {
    for (size_t b = a + 1; b < distinct.size(); ++b) pairs.emplace_back(a, b);
  }
  model.binaries.resize(pairs.size());
  ParallelFor(pairs.size(), config.jobs, [&](size_t p) {
    int pos = distinct[pairs[p].first];
    int neg = distinct[pairs[p].second];
    std::vector<size_t> rows;
    std::vector<int> y;
    for (size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == pos || labels[r] == neg) {
        rows.push_back(r);
        y.push_back(labels[r] == pos ? 1 : -1);
      }
    }
    TrainConfig pair_config = config;
    pair_config.seed = config.seed * 1000003ULL + p;
    BinaryModel binary = TrainBinary(z.SelectRows(rows), y, pair_config);
    binary.label_pair = {pos, neg};
    model.binaries[p] = std::move(binary);
  });
  return model;
}

MulticlassModel TrainMulticlass(const Dataset &dataset,
                                const TrainConfig &config) {
  if (dataset.empty()) throw Error("too_few_instances", "empty dataset");
  if (config.fill == FillPolicy::kError) {
    for (size_t c = 0; c < dataset.feature_count(); ++c) {
      bool first = dataset[0].features.available(c);
      for (const Instance &inst : dataset.instances()) {
        if (inst.features.available(c) != first) {
          throw Error("mixed_availability",
                      "feature " + dataset.feature_names()[c] +
                          " is available for some instances only");
        }
      }
    }
  }
  return TrainMulticlass(Matrix::FromDataset(dataset), dataset.Targets(),
                         dataset.feature_names(), config);
}

std::vector<double> AlignFeatures(const MulticlassModel &model,
                                  const FeatureVector &x) {
  std::vector<double> out(model.feature_names.size());
  for (size_t k = 0; k < out.size(); ++k) {
    auto index = x.schema().Find(model.feature_names[k]);
    if (!index) {
      throw Error("missing_feature",
                  "missing feature " + model.feature_names[k]);
    }
    if (!x.available(*index) && model.config.fill == FillPolicy::kError) {
      throw Error("feature_unavailable",
                  "feature " + model.feature_names[k] + " is unavailable");
    }
    out[k] = x.value(*index);
  }
  return out;
}

std::vector<double> DecisionValues(const MulticlassModel &model,
                                   std::span<const double> raw) {
  std::vector<double> z = StandardizeRow(raw, model.scaling);
  std::vector<double> out;
  out.reserve(model.binaries.size());
  for (const BinaryModel &b : model.binaries) out.push_back(b.Decision(z));
  return out;
}

std::vector<double> DecisionValues(const MulticlassModel &model,
                                   const FeatureVector &x) {
  return DecisionValues(model, AlignFeatures(model, x));
}

std::vector<double> HyperplaneDistances(const MulticlassModel &model,
                                        std::span<const double> raw) {
  std::vector<double> values = DecisionValues(model, raw);
  for (size_t p = 0; p < values.size(); ++p) {
    double norm = model.binaries[p].WeightNorm();
    double f = std::abs(values[p]);
    values[p] = norm > 0 ? f / norm : kInf;
  }
  return values;
}

namespace {

std::vector<int> Votes(const MulticlassModel &model,
                       const std::vector<double> &values) {
  std::vector<int> votes(model.labels.size(), 0);
  auto index_of = [&](int label) {
    return std::lower_bound(model.labels.begin(), model.labels.end(), label) -
           model.labels.begin();
  };
  for (size_t p = 0; p < values.size(); ++p) {
    const auto &[pos, neg] = model.binaries[p].label_pair;
    if (values[p] > 0) {
      ++votes[index_of(pos)];
    } else if (values[p] < 0) {
      ++votes[index_of(neg)];
    }
  }
  return votes;
}

}  // namespace

int Predict(const MulticlassModel &model, std::span<const double> raw) {
  std::vector<int> votes = Votes(model, DecisionValues(model, raw));
  size_t best = 0;
  for (size_t k = 1; k < votes.size(); ++k) {
    if (votes[k] > votes[best]) best = k;
  }
  return model.labels[best];
}

int Predict(const MulticlassModel &model, const FeatureVector &x) {
  return Predict(model, AlignFeatures(model, x));
}

double Uncertainty(const MulticlassModel &model, std::span<const double> raw,
                   UncertaintyAggregation aggregation) {
  switch (aggregation) {
    case UncertaintyAggregation::kMinDistance: {
      std::vector<double> d = HyperplaneDistances(model, raw);
      return *std::min_element(d.begin(), d.end());
    }
    case UncertaintyAggregation::kMeanDistance: {
      std::vector<double> d = HyperplaneDistances(model, raw);
      double sum = 0.0;
      long finite = 0;
      for (double v : d) {
        if (std::isfinite(v)) {
          sum += v;
          ++finite;
        }
      }
      return finite > 0 ? sum / double(finite) : kInf;
    }
    case UncertaintyAggregation::kVoteMargin: {
      std::vector<int> votes = Votes(model, DecisionValues(model, raw));
      std::sort(votes.rbegin(), votes.rend());
      return double(votes[0] - (votes.size() > 1 ? votes[1] : 0));
    }
  }
  return 0.0;
}

double Uncertainty(const MulticlassModel &model, const FeatureVector &x,
                   UncertaintyAggregation aggregation) {
  return Uncertainty(model, AlignFeatures(model, x), aggregation);
}

}  // namespace readlevel
