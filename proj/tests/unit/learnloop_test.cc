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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
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

// `per_level` instances for each listed level; feature "signal" tracks the
// level, the others are noise.
Dataset LevelData(const std::string &prefix, const std::vector<int> &levels,
                  int per_level, double sigma, uint64_t seed,
                  bool labeled = true) {
  static const auto schema =
      FeatureSchema::Make({"signal", "noise_a", "noise_b"});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::normal_distribution<double> unit(0.0, 1.0);
  Dataset ds(schema);
  int serial = 0;
  for (int rep = 0; rep < per_level; ++rep) {
    for (int level : levels) {
      Instance inst;
      char id[32];
      std::snprintf(id, sizeof(id), "%s%04d", prefix.c_str(), serial++);
      inst.id = id;
      inst.source = "synthetic";
      if (labeled) inst.level = level;
      inst.features = FeatureVector(schema);
      inst.features.Set("signal", 2.0 * level + noise(rng));
      inst.features.Set("noise_a", unit(rng));
      inst.features.Set("noise_b", unit(rng));
      ds.Add(std::move(inst));
    }
  }
  return ds;
}

TEST(RfeTest, ConstantFeatureGoesFirstInEverySeed) {
  auto schema = FeatureSchema::Make({"noise", "perfect", "constant"});
  for (uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    Dataset ds(schema);
    for (int i = 0; i < 60; ++i) {
      Instance inst;
      inst.id = "d" + std::to_string(i);
      inst.level = 1 + i % 3;
      inst.features = FeatureVector(schema);
      inst.features.Set("noise", unit(rng));
      inst.features.Set("perfect", double(*inst.level));
      inst.features.Set("constant", 7.0);
      ds.Add(std::move(inst));
    }
    TrainConfig cfg;
    cfg.seed = seed;
    FeatureRanking r = Rfe(ds, cfg, 1);
    ASSERT_EQ(r.elimination_order.size(), 2u);
    EXPECT_EQ(r.elimination_order[0], "constant") << "seed " << seed;
    EXPECT_EQ(r.survivor_set, std::vector<std::string>{"perfect"});
  }
}

TEST(RfeTest, PartitionsTheSchema) {
  Dataset ds = LevelData("d", {1, 2, 3}, 15, 0.5, 4);
  for (size_t target = 1; target <= 3; ++target) {
    for (size_t step : {1u, 2u, 5u}) {
      FeatureRanking r = Rfe(ds, {}, target, step);
      EXPECT_EQ(r.survivor_set.size(), target);
      std::vector<std::string> all = r.elimination_order;
      all.insert(all.end(), r.survivor_set.begin(), r.survivor_set.end());
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, (std::vector<std::string>{"noise_a", "noise_b", "signal"}));
      if (target < 3) {
        EXPECT_NE(std::find(r.survivor_set.begin(), r.survivor_set.end(),
                            "signal"),
                  r.survivor_set.end());
      }
    }
  }
}

TEST(RfeTest, Errors) {
  Dataset ds = LevelData("d", {1, 2}, 5, 0.5, 1);
  EXPECT_EQ(CodeOf([&] { Rfe(ds, {}, 0); }), "invalid_target");
  EXPECT_EQ(CodeOf([&] { Rfe(ds, {}, 4); }), "invalid_target");
  EXPECT_EQ(CodeOf([&] { Rfe(ds, {}, 1, 0); }), "invalid_step");
  Dataset single = LevelData("d", {2}, 5, 0.5, 1);
  EXPECT_EQ(CodeOf([&] { Rfe(single, {}, 1); }), "untrainable");
}

// Oracle: sort every (score, id) pair and keep the first k.
std::vector<std::string> BruteForceSelect(const std::vector<std::string> &ids,
                                          const std::vector<double> &scores,
                                          size_t k, bool uncertain) {
  std::vector<std::pair<double, std::string>> all;
  for (size_t i = 0; i < ids.size(); ++i) {
    all.emplace_back(uncertain ? scores[i] : -scores[i], ids[i]);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::string> out;
  for (size_t i = 0; i < std::min(k, all.size()); ++i) {
    out.push_back(all[i].second);
  }
  return out;
}

TEST(SelectByScoreTest, AgreesWithBruteForceSortAndSeparatesScores) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 1 + rng() % 1000;
    std::vector<std::string> ids;
    std::vector<double> scores;
    std::set<std::string> used;
    while (ids.size() < n) {
      std::string id = "doc" + std::to_string(rng() % 100000);
      if (!used.insert(id).second) continue;
      ids.push_back(id);
      // Few distinct values so ties are common.
      scores.push_back(double(rng() % 20) / 4.0);
    }
    size_t k = 1 + rng() % (n + 5);
    for (SelectionStrategy strategy :
         {SelectionStrategy::kMostUncertain, SelectionStrategy::kMostConfident}) {
      bool uncertain = strategy == SelectionStrategy::kMostUncertain;
      SelectionBatch batch = SelectByScore(ids, scores, k, strategy);
      ASSERT_EQ(batch.document_ids, BruteForceSelect(ids, scores, k, uncertain));
      EXPECT_EQ(batch.whole_pool, k >= n);
      std::set<std::string> chosen(batch.document_ids.begin(),
                                   batch.document_ids.end());
      double worst_chosen = uncertain ? -1e300 : 1e300;
      for (double s : batch.scores) {
        worst_chosen = uncertain ? std::max(worst_chosen, s)
                                 : std::min(worst_chosen, s);
      }
      for (size_t i = 0; i < n; ++i) {
        if (chosen.count(ids[i])) continue;
        if (uncertain) {
          EXPECT_LE(worst_chosen, scores[i]);
        } else {
          EXPECT_GE(worst_chosen, scores[i]);
        }
      }
    }
  }
}

TEST(SelectByScoreTest, Errors) {
  std::vector<std::string> ids = {"a"};
  std::vector<double> scores = {1.0};
  std::vector<std::string> none;
  std::vector<double> no_scores;
  auto uncertain = SelectionStrategy::kMostUncertain;
  EXPECT_EQ(CodeOf([&] { SelectByScore(none, no_scores, 1, uncertain); }),
            "empty_pool");
  EXPECT_EQ(CodeOf([&] { SelectByScore(ids, scores, 0, uncertain); }),
            "invalid_k");
  EXPECT_EQ(CodeOf([&] { SelectByScore(ids, no_scores, 1, uncertain); }),
            "dimension_mismatch");
}

TEST(SelectBatchTest, MatchesModelUncertaintyRanking) {
  Dataset labeled = LevelData("l", {1, 2, 3, 4, 5}, 10, 1.5, 2);
  Dataset pool = LevelData("p", {1, 2, 3, 4, 5}, 60, 1.5, 3, false);
  MulticlassModel model = TrainMulticlass(labeled, {});
  for (auto aggregation :
       {UncertaintyAggregation::kMinDistance,
        UncertaintyAggregation::kMeanDistance,
        UncertaintyAggregation::kVoteMargin}) {
    std::vector<std::string> ids;
    std::vector<double> scores;
    for (const Instance &inst : pool.instances()) {
      ids.push_back(inst.id);
      scores.push_back(Uncertainty(model, inst.features, aggregation));
    }
    SelectionBatch batch = SelectBatch(
        model, pool, 25, SelectionStrategy::kMostUncertain, aggregation);
    EXPECT_EQ(batch.document_ids, BruteForceSelect(ids, scores, 25, true));
  }
  SelectionBatch all = SelectBatch(model, pool, 10000,
                                   SelectionStrategy::kMostConfident);
  EXPECT_TRUE(all.whole_pool);
  EXPECT_EQ(all.document_ids.size(), pool.size());
}

TEST(SelectionStrategyTest, NamesRoundTrip) {
  for (auto s :
       {SelectionStrategy::kMostUncertain, SelectionStrategy::kMostConfident}) {
    EXPECT_EQ(ParseSelectionStrategy(SelectionStrategyName(s)), s);
  }
  EXPECT_EQ(SelectionStrategyName(SelectionStrategy::kMostUncertain),
            "most_uncertain");
  EXPECT_EQ(CodeOf([] { ParseSelectionStrategy("random"); }),
            "invalid_strategy");
}

TEST(LevelMappingTest, ParseValidateAndApply) {
  LevelMapping m = LevelMapping::Parse("1:1,2:2,3:2,4:3,5:3");
  EXPECT_EQ(m.merged_count(), 3);
  EXPECT_EQ(m.Apply(3), 2);
  EXPECT_EQ(m.ToString(), "1:1,2:2,3:2,4:3,5:3");
  EXPECT_EQ(LevelMapping::Parse(m.ToString()).mapping(), m.mapping());
  EXPECT_EQ(LevelMapping::Identity().merged_count(), 5);
  EXPECT_EQ(CodeOf([&] { m.Apply(6); }), "invalid_level");
  for (const char *bad :
       {"1:1,2:2,3:3,4:4", "1:2,2:2,3:3,4:4,5:5", "1:1,2:3,3:3,4:4,5:4",
        "1:1,2:1,3:2,4:4,5:4", "1:1,2:x,3:2,4:3,5:3", "1:1,2:2,3:2,4:3,5:3x",
        "1:1,2:2,3:2,4:3,5", "1:1,1:1,2:2,3:2,4:3,5:3",
        "1:1,2:2,3:2,4:3,5:3,6:3", "1:1,2:2,3:1,4:2,5:3"}) {
    EXPECT_EQ(CodeOf([&] { LevelMapping::Parse(bad); }), "invalid_mapping")
        << bad;
  }
}

Dataset Distribution(const std::vector<int> &counts) {
  auto schema = FeatureSchema::Make({"x"});
  Dataset ds(schema);
  int serial = 0;
  for (size_t level = 1; level <= counts.size(); ++level) {
    for (int i = 0; i < counts[level - 1]; ++i) {
      Instance inst;
      inst.id = "d" + std::to_string(serial++);
      inst.level = static_cast<int>(level);
      inst.features = FeatureVector(schema);
      ds.Add(std::move(inst));
    }
  }
  return ds;
}

TEST(MergeLevelsTest, GradeDistributionBookkeeping) {
  Dataset ds = Distribution({242, 313, 338, 287, 276});
  LevelMapping mapping = LevelMapping::Parse("1:1,2:2,3:2,4:3,5:3");
  Dataset merged = MergeLevels(ds, mapping);
  EXPECT_EQ(merged.TargetCounts(),
            (std::map<int, size_t>{{1, 242}, {2, 651}, {3, 563}}));
  EXPECT_EQ(merged.size(), ds.size());
  Dataset twice = MergeLevels(merged, mapping);
  EXPECT_EQ(twice.Targets(), merged.Targets());
  for (size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(merged[i].level, ds[i].level);
  }
}

TEST(MergeLevelsTest, RandomMappingsPreserveCounts) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> counts;
    for (int l = 0; l < 5; ++l) counts.push_back(static_cast<int>(rng() % 20));
    std::map<int, int> map{{1, 1}};
    for (int level = 2; level <= 5; ++level) {
      map[level] = map[level - 1] + static_cast<int>(rng() % 2);
    }
    LevelMapping mapping(map);
    Dataset ds = Distribution(counts);
    Dataset merged = MergeLevels(ds, mapping);
    std::map<int, size_t> expected;
    for (int level = 1; level <= 5; ++level) {
      if (counts[level - 1]) expected[map[level]] += counts[level - 1];
    }
    EXPECT_EQ(merged.TargetCounts(), expected);
    EXPECT_EQ(MergeLevels(merged, mapping).Targets(), merged.Targets());
  }
}

ActiveLearningConfig SmallLoop() {
  ActiveLearningConfig cfg;
  cfg.steps = 3;
  cfg.k = 10;
  cfg.eval.k = 3;
  return cfg;
}

// Gold levels of the unlabeled pool LevelData("p", ..., 20, 1.0, seed).
std::map<std::string, int> HiddenLevels(uint64_t seed) {
  Dataset gold = LevelData("p", {1, 2, 3, 4, 5}, 20, 1.0, seed);
  std::map<std::string, int> out;
  for (const Instance &inst : gold.instances()) out[inst.id] = *inst.level;
  return out;
}

TEST(ActiveLearningTest, BookkeepingAcrossSteps) {
  Dataset labeled = LevelData("l", {1, 2, 3, 4, 5}, 4, 1.0, 1);
  Dataset pool = LevelData("p", {1, 2, 3, 4, 5}, 20, 1.0, 9, false);
  auto gold = HiddenLevels(9);
  LabelOracle oracle = [&](const Instance &inst) -> std::optional<int> {
    if (inst.id.back() == '7') return std::nullopt;
    return gold.at(inst.id);
  };
  ActiveLearningConfig cfg = SmallLoop();
  cfg.schedule = {SelectionStrategy::kMostConfident};
  ActiveLearningReport r = ActiveLearningRun(labeled, pool, oracle, cfg);
  EXPECT_FALSE(r.aborted.has_value());
  ASSERT_EQ(r.steps.size(), 3u);
  EXPECT_EQ(r.initial_size, 20u);
  EXPECT_EQ(r.steps[0].strategy, SelectionStrategy::kMostConfident);
  EXPECT_EQ(r.steps[1].strategy, SelectionStrategy::kMostUncertain);
  size_t size = r.initial_size;
  size_t dropped = 0;
  std::set<std::string> seen;
  for (const ActiveLearningStep &step : r.steps) {
    EXPECT_EQ(step.selected_ids.size() + step.dropped_ids.size(), 10u);
    size += step.selected_ids.size();
    dropped += step.dropped_ids.size();
    EXPECT_EQ(step.dataset_size, size);
    EXPECT_EQ(step.evaluation.predictions.size(), size);
    for (const auto &id : step.selected_ids) EXPECT_TRUE(seen.insert(id).second);
    for (const auto &id : step.dropped_ids) {
      EXPECT_TRUE(seen.insert(id).second);
      EXPECT_EQ(id.back(), '7');
    }
  }
  EXPECT_EQ(r.dropped, dropped);
  EXPECT_EQ(size + dropped + (pool.size() - seen.size()),
            labeled.size() + pool.size());
}

TEST(ActiveLearningTest, MappingAppliesToNewLabels) {
  LevelMapping mapping = LevelMapping::Parse("1:1,2:2,3:2,4:3,5:3");
  Dataset labeled = MergeLevels(LevelData("l", {1, 2, 3, 4, 5}, 4, 1.0, 1),
                                mapping);
  Dataset pool = LevelData("p", {1, 2, 3, 4, 5}, 20, 1.0, 9, false);
  auto gold = HiddenLevels(9);
  ActiveLearningConfig cfg = SmallLoop();
  cfg.steps = 1;
  cfg.mapping = mapping;
  ActiveLearningReport r = ActiveLearningRun(
      labeled, pool,
      [&](const Instance &inst) { return std::optional<int>(gold.at(inst.id)); },
      cfg);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0].evaluation.confusion.labels,
            (std::vector<int>{1, 2, 3}));
}

TEST(ActiveLearningTest, OracleFailureAbortsOnlyThatStep) {
  Dataset labeled = LevelData("l", {1, 2, 3}, 4, 1.0, 1);
  Dataset pool = LevelData("p", {1, 2, 3}, 20, 1.0, 2, false);
  int calls = 0;
  LabelOracle oracle = [&](const Instance &) -> std::optional<int> {
    if (++calls > 10) throw std::runtime_error("annotator unavailable");
    return 1 + calls % 3;
  };
  ActiveLearningReport r = ActiveLearningRun(labeled, pool, oracle, SmallLoop());
  ASSERT_EQ(r.steps.size(), 1u);
  ASSERT_TRUE(r.aborted.has_value());
  EXPECT_NE(r.aborted->find("step 2"), std::string::npos);
  EXPECT_NE(r.aborted->find("annotator unavailable"), std::string::npos);

  LabelOracle bad = [](const Instance &) { return std::optional<int>(9); };
  r = ActiveLearningRun(labeled, pool, bad, SmallLoop());
  EXPECT_TRUE(r.steps.empty());
  EXPECT_NE(r.aborted->find("level 9"), std::string::npos);
}

TEST(ActiveLearningTest, PoolExhaustionAndErrors) {
  Dataset labeled = LevelData("l", {1, 2, 3}, 4, 1.0, 1);
  Dataset pool = LevelData("p", {1, 2, 3}, 5, 1.0, 2, false);
  LabelOracle oracle = [](const Instance &) { return std::optional<int>(2); };
  ActiveLearningReport r = ActiveLearningRun(labeled, pool, oracle, SmallLoop());
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(r.steps[1].selected_ids.size(), 5u);
  ASSERT_TRUE(r.aborted.has_value());
  EXPECT_NE(r.aborted->find("pool exhausted"), std::string::npos);

  Dataset overlap = LevelData("l", {1}, 1, 1.0, 3, false);
  EXPECT_EQ(CodeOf([&] { ActiveLearningRun(labeled, overlap, oracle, {}); }),
            "pool_overlap");
  ActiveLearningConfig negative = SmallLoop();
  negative.steps = -1;
  EXPECT_EQ(CodeOf([&] { ActiveLearningRun(labeled, pool, oracle, negative); }),
            "invalid_steps");
}

}  // namespace
}  // namespace readlevel
