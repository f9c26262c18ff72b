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


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "readlevel/dataset.h"
#include "readlevel/features.h"
#include "readlevel/learnloop.h"
#include "readlevel/lexicons.h"
#include "readlevel/svm.h"
#include "readlevel/textmodel.h"
#include "support/synthetic_corpus.h"

namespace readlevel {
namespace {

const ResourceSet &Resources() {
  static const ResourceSet r = ResourceSet::LoadDirectory(READLEVEL_RESOURCES_DIR);
  return r;
}

Dataset RandomDataset(size_t rows, size_t dims, bool labeled, uint64_t seed) {
  std::vector<std::string> names;
  for (size_t f = 0; f < dims; ++f) names.push_back("f" + std::to_string(f));
  auto schema = FeatureSchema::Make(names);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0, 1);
  Dataset ds(schema);
  for (size_t i = 0; i < rows; ++i) {
    Instance inst;
    inst.id = "d" + std::to_string(i);
    const int level = 1 + static_cast<int>(i % 5);
    if (labeled) inst.level = level;
    inst.features = FeatureVector(schema);
    for (size_t f = 0; f < dims; ++f) {
      inst.features.Set(f, noise(rng) + (f < 4 ? level : 0));
    }
    ds.Add(std::move(inst));
  }
  return ds;
}

void BM_BuildDocument(benchmark::State &state) {
  std::mt19937_64 rng(1);
  std::string text = testing::SyntheticText(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildDocument(text, "d", "s"));
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_BuildDocument)->DenseRange(1, 5, 2);

void BM_ExtractAll(benchmark::State &state) {
  std::mt19937_64 rng(2);
  AnnotatedDocument doc = BuildDocument(
      testing::SyntheticText(static_cast<int>(state.range(0)), rng), "d", "s");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExtractAll(doc, Resources()));
  }
}
BENCHMARK(BM_ExtractAll)->DenseRange(1, 5, 2);

void BM_ExtractSimpleStatistics(benchmark::State &state) {
  std::mt19937_64 rng(3);
  AnnotatedDocument doc = BuildDocument(testing::SyntheticText(5, rng), "d", "s");
  const Lexicon &simple = *Resources().Find(LexiconKind::kSimpleWords);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExtractSimpleStatistics(doc, simple));
  }
}
BENCHMARK(BM_ExtractSimpleStatistics);

void BM_TrainMulticlass(benchmark::State &state) {
  Dataset ds = RandomDataset(static_cast<size_t>(state.range(0)),
                             static_cast<size_t>(state.range(1)), true, 4);
  TrainConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainMulticlass(ds, cfg));
  }
}
BENCHMARK(BM_TrainMulticlass)
    ->Args({100, 10})
    ->Args({300, 10})
    ->Args({300, 108})
    ->Unit(benchmark::kMillisecond);

void BM_SelectBatch(benchmark::State &state) {
  Dataset labeled = RandomDataset(100, 20, true, 5);
  Dataset pool = RandomDataset(static_cast<size_t>(state.range(0)), 20, false, 6);
  MulticlassModel model = TrainMulticlass(labeled, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SelectBatch(model, pool, 10, SelectionStrategy::kMostUncertain));
  }
  state.SetItemsProcessed(state.iterations() * pool.size());
}
BENCHMARK(BM_SelectBatch)->RangeMultiplier(10)->Range(100, 10000);

}  // namespace
}  // namespace readlevel

BENCHMARK_MAIN();
