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

#ifndef READLEVEL_LEARNLOOP_H_
#define READLEVEL_LEARNLOOP_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "readlevel/dataset.h"
#include "readlevel/evaluation.h"
#include "readlevel/svm.h"

namespace readlevel {

struct FeatureRanking {
  // Eliminated features, first eliminated first.
  std::vector<std::string> elimination_order;
  // Remaining features, highest final score first.
  std::vector<std::string> survivor_set;
};

// Recursive feature elimination. Each round refits scaling and the model on
// the surviving features, scores feature c by the sum over binary models of
// w_c^2 and drops the `step` lowest (ties: earlier schema position first).
FeatureRanking Rfe(const Dataset &dataset, const TrainConfig &config,
                   size_t target_count, size_t step = 1);

enum class SelectionStrategy { kMostUncertain, kMostConfident };

std::string SelectionStrategyName(SelectionStrategy strategy);
SelectionStrategy ParseSelectionStrategy(const std::string &name);

struct SelectionBatch {
  std::vector<std::string> document_ids;
  std::vector<double> scores;
  SelectionStrategy strategy = SelectionStrategy::kMostUncertain;
  // k was at least the pool size, so the whole pool was returned.
  bool whole_pool = false;
};

// Ranks `pool` by Uncertainty(); ties are broken by ascending id.
SelectionBatch SelectBatch(
    const MulticlassModel &model, const Dataset &pool, size_t k,
    SelectionStrategy strategy,
    UncertaintyAggregation aggregation = UncertaintyAggregation::kMinDistance);

// Same ranking over precomputed scores.
SelectionBatch SelectByScore(const std::vector<std::string> &ids,
                             const std::vector<double> &scores, size_t k,
                             SelectionStrategy strategy);

// Total, contiguous and order-preserving map from grade levels 1..5.
class LevelMapping {
 public:
  // Throws unless the map satisfies the invariants above.
  explicit LevelMapping(std::map<int, int> mapping);
  static LevelMapping Identity();
  // "1:1,2:2,3:2,4:3,5:3".
  static LevelMapping Parse(const std::string &text);

  int Apply(int level) const;
  int merged_count() const;
  const std::map<int, int> &mapping() const { return mapping_; }
  std::string ToString() const;

 private:
  std::map<int, int> mapping_;
};

// Sets merged_level = mapping(level) on every labeled instance. Gold levels
// and features are untouched, so merging twice equals merging once.
Dataset MergeLevels(const Dataset &dataset, const LevelMapping &mapping);

// Returns a label for a pool document, or nullopt when it cannot be
// processed. Throwing aborts the current step.
using LabelOracle = std::function<std::optional<int>(const Instance &)>;

struct ActiveLearningConfig {
  int steps = 4;
  size_t k = 100;
  // Per-step strategies; steps beyond the list use kMostUncertain.
  std::vector<SelectionStrategy> schedule;
  UncertaintyAggregation aggregation = UncertaintyAggregation::kMinDistance;
  // Applied to newly labeled documents when the labeled set is merged.
  std::optional<LevelMapping> mapping;
  TrainConfig train;
  EvalConfig eval;
};

struct ActiveLearningStep {
  size_t dataset_size = 0;
  SelectionStrategy strategy = SelectionStrategy::kMostUncertain;
  std::vector<std::string> selected_ids;
  std::vector<std::string> dropped_ids;
  EvaluationReport evaluation;
};

struct ActiveLearningReport {
  size_t initial_size = 0;
  EvaluationReport initial;
  std::vector<ActiveLearningStep> steps;
  size_t dropped = 0;
  // Set when a step aborted; earlier steps are kept.
  std::optional<std::string> aborted;
};

ActiveLearningReport ActiveLearningRun(Dataset labeled, Dataset pool,
                                       const LabelOracle &oracle,
                                       const ActiveLearningConfig &config);

}  // namespace readlevel

#endif  // READLEVEL_LEARNLOOP_H_
