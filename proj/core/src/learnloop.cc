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

#include "readlevel/learnloop.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "readlevel/error.h"

namespace readlevel {

FeatureRanking Rfe(const Dataset &dataset, const TrainConfig &config,
                   size_t target_count, size_t step) {
  if (target_count == 0) {
    throw Error("invalid_target", "target count must be positive");
  }
  if (step == 0) throw Error("invalid_step", "step must be positive");
  const size_t n = dataset.feature_count();
  if (target_count > n) {
    throw Error("invalid_target", "target count " +
                                      std::to_string(target_count) +
                                      " exceeds " + std::to_string(n) +
                                      " features");
  }
  const Matrix full = Matrix::FromDataset(dataset);
  const std::vector<int> labels = dataset.Targets();
  const auto &names = dataset.feature_names();

  std::vector<size_t> alive(n);
  std::iota(alive.begin(), alive.end(), size_t{0});
  FeatureRanking ranking;
  std::vector<double> scores;

  auto score_round = [&] {
    Matrix sub(full.rows(), alive.size());
    for (size_t r = 0; r < full.rows(); ++r) {
      for (size_t c = 0; c < alive.size(); ++c) sub(r, c) = full(r, alive[c]);
    }
    std::vector<std::string> sub_names;
    for (size_t c : alive) sub_names.push_back(names[c]);
    MulticlassModel model;
    try {
      model = TrainMulticlass(sub, labels, sub_names, config);
    } catch (const Error &e) {
      throw Error("untrainable", std::string("RFE round with ") +
                                     std::to_string(alive.size()) +
                                     " features: " + e.what());
    }
    scores.assign(alive.size(), 0.0);
    for (const BinaryModel &b : model.binaries) {
      for (size_t c = 0; c < alive.size(); ++c) {
        scores[c] += b.weights[c] * b.weights[c];
      }
    }
  };

  while (alive.size() > target_count) {
    score_round();
    std::vector<size_t> order(alive.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return scores[a] < scores[b];
    });
    const size_t drop = std::min(step, alive.size() - target_count);
    std::vector<bool> gone(alive.size(), false);
    for (size_t t = 0; t < drop; ++t) {
      gone[order[t]] = true;
      ranking.elimination_order.push_back(names[alive[order[t]]]);
    }
    std::vector<size_t> next;
    for (size_t c = 0; c < alive.size(); ++c) {
      if (!gone[c]) next.push_back(alive[c]);
    }
    alive = std::move(next);
  }

  if (ranking.elimination_order.empty()) {
    for (size_t c : alive) ranking.survivor_set.push_back(names[c]);
    return ranking;
  }
  score_round();
  std::vector<size_t> order(alive.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });
  for (size_t c : order) ranking.survivor_set.push_back(names[alive[c]]);
  return ranking;
}

std::string SelectionStrategyName(SelectionStrategy strategy) {
  return strategy == SelectionStrategy::kMostUncertain ? "most_uncertain"
                                                       : "most_confident";
}

SelectionStrategy ParseSelectionStrategy(const std::string &name) {
  if (name == "most_uncertain") return SelectionStrategy::kMostUncertain;
  if (name == "most_confident") return SelectionStrategy::kMostConfident;
  throw Error("invalid_strategy", "unknown selection strategy: " + name);
}

SelectionBatch SelectByScore(const std::vector<std::string> &ids,
                             const std::vector<double> &scores, size_t k,
                             SelectionStrategy strategy) {
  if (ids.empty()) throw Error("empty_pool", "pool is empty");
  if (k == 0) throw Error("invalid_k", "k must be positive");
  if (ids.size() != scores.size()) {
    throw Error("dimension_mismatch", "score count mismatch");
  }
  std::vector<size_t> order(ids.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const bool ascending = strategy == SelectionStrategy::kMostUncertain;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) {
      return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
    }
    return ids[a] < ids[b];
  });
  SelectionBatch batch;
  batch.strategy = strategy;
  batch.whole_pool = k >= ids.size();
  const size_t take = std::min(k, ids.size());
  for (size_t t = 0; t < take; ++t) {
    batch.document_ids.push_back(ids[order[t]]);
    batch.scores.push_back(scores[order[t]]);
  }
  return batch;
}

SelectionBatch SelectBatch(const MulticlassModel &model, const Dataset &pool,
                           size_t k, SelectionStrategy strategy,
                           UncertaintyAggregation aggregation) {
  std::vector<std::string> ids;
  std::vector<double> scores;
  for (const Instance &inst : pool.instances()) {
    ids.push_back(inst.id);
    scores.push_back(Uncertainty(model, inst.features, aggregation));
  }
  return SelectByScore(ids, scores, k, strategy);
}

LevelMapping::LevelMapping(std::map<int, int> mapping)
    : mapping_(std::move(mapping)) {
  for (int level = 1; level <= 5; ++level) {
    if (!mapping_.count(level)) {
      throw Error("invalid_mapping",
                  "level " + std::to_string(level) + " is not mapped");
    }
  }
  if (mapping_.size() != 5) {
    throw Error("invalid_mapping", "mapping domain must be levels 1..5");
  }
  int previous = 0;
  for (const auto &[level, merged] : mapping_) {
    if (level == 1 && merged != 1) {
      throw Error("invalid_mapping", "merged labels must start at 1");
    }
    if (merged != previous && merged != previous + 1) {
      throw Error("invalid_mapping",
                  "merged labels must be contiguous and order-preserving");
    }
    previous = merged;
  }
}

LevelMapping LevelMapping::Identity() {
  return LevelMapping({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
}

LevelMapping LevelMapping::Parse(const std::string &text) {
  std::map<int, int> mapping;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error("invalid_mapping", "expected level:merged, got '" + item +
                                         "'");
    }
    auto number = [&](const std::string &part) {
      size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(part, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != part.size()) {
        throw Error("invalid_mapping", "non-numeric entry '" + item + "'");
      }
      return value;
    };
    int level = number(item.substr(0, colon));
    int merged = number(item.substr(colon + 1));
    if (!mapping.emplace(level, merged).second) {
      throw Error("invalid_mapping",
                  "level " + std::to_string(level) + " mapped twice");
    }
  }
  return LevelMapping(std::move(mapping));
}

int LevelMapping::Apply(int level) const {
  auto it = mapping_.find(level);
  if (it == mapping_.end()) {
    throw Error("invalid_level",
                "level " + std::to_string(level) + " outside mapping domain");
  }
  return it->second;
}

int LevelMapping::merged_count() const { return mapping_.rbegin()->second; }

std::string LevelMapping::ToString() const {
  std::string out;
  for (const auto &[level, merged] : mapping_) {
    if (!out.empty()) out += ",";
    out += std::to_string(level) + ":" + std::to_string(merged);
  }
  return out;
}

Dataset MergeLevels(const Dataset &dataset, const LevelMapping &mapping) {
  Dataset out = dataset;
  for (size_t t = 0; t < out.size(); ++t) {
    Instance &inst = out.mutable_instance(t);
    if (inst.level) inst.merged_level = mapping.Apply(*inst.level);
  }
  return out;
}

ActiveLearningReport ActiveLearningRun(Dataset labeled, Dataset pool,
                                       const LabelOracle &oracle,
                                       const ActiveLearningConfig &config) {
  for (const Instance &inst : pool.instances()) {
    if (labeled.Contains(inst.id)) {
      throw Error("pool_overlap",
                  "pool document " + inst.id + " is already labeled");
    }
  }
  if (config.steps < 0) throw Error("invalid_steps", "steps must be >= 0");
  ActiveLearningReport report;
  report.initial_size = labeled.size();
  report.initial = CrossValidate(labeled, config.train, config.eval);

  for (int s = 0; s < config.steps; ++s) {
    if (pool.empty()) {
      report.aborted = "pool exhausted before step " + std::to_string(s + 1);
      break;
    }
    ActiveLearningStep step;
    step.strategy = static_cast<size_t>(s) < config.schedule.size()
                        ? config.schedule[s]
                        : SelectionStrategy::kMostUncertain;
    try {
      MulticlassModel model = TrainMulticlass(labeled, config.train);
      SelectionBatch batch = SelectBatch(model, pool, config.k, step.strategy,
                                         config.aggregation);
      // Collect every answer before mutating, so a failing oracle leaves the
      // labeled set as it was.
      std::vector<std::pair<std::string, std::optional<int>>> answers;
      for (const std::string &id : batch.document_ids) {
        auto it = std::find_if(
            pool.instances().begin(), pool.instances().end(),
            [&](const Instance &inst) { return inst.id == id; });
        answers.emplace_back(id, oracle(*it));
      }
      Dataset next = labeled;
      Dataset next_pool = pool;
      for (const auto &[id, label] : answers) {
        auto it = std::find_if(
            pool.instances().begin(), pool.instances().end(),
            [&](const Instance &inst) { return inst.id == id; });
        Instance inst = *it;
        next_pool.Remove(id);
        if (!label) {
          step.dropped_ids.push_back(id);
          continue;
        }
        if (*label < 1 || *label > 5) {
          throw Error("invalid_level", "oracle returned level " +
                                           std::to_string(*label) + " for " +
                                           id);
        }
        inst.level = *label;
        inst.merged_level.reset();
        if (config.mapping) inst.merged_level = config.mapping->Apply(*label);
        step.selected_ids.push_back(id);
        next.Add(std::move(inst));
      }
      step.evaluation = CrossValidate(next, config.train, config.eval);
      step.dataset_size = next.size();
      labeled = std::move(next);
      pool = std::move(next_pool);
    } catch (const std::exception &e) {
      report.aborted =
          "step " + std::to_string(s + 1) + " aborted: " + e.what();
      break;
    }
    report.dropped += step.dropped_ids.size();
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace readlevel
