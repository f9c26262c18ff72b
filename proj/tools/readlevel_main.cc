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

// Command-line front end: readlevel <command> [flags].

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "readlevel/corpusio.h"
#include "readlevel/error.h"
#include "readlevel/evaluation.h"
#include "readlevel/features.h"
#include "readlevel/learnloop.h"
#include "readlevel/lexicons.h"
#include "readlevel/service.h"
#include "readlevel/svm.h"

namespace readlevel {
namespace {

struct ResourceFlags {
  std::string dir;
  std::map<LexiconKind, std::string> lexicons;
  std::string word_frequencies;
  std::string sense_inventory;

  void Register(CLI::App *cmd) {
    cmd->add_option("--resources", dir,
                    "Directory holding resources under conventional names");
    for (LexiconKind kind : AllLexiconKinds()) {
      std::string flag = "--" + std::string(LexiconKindName(kind));
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      cmd->add_option(flag, lexicons[kind],
                      "Override the " + std::string(LexiconKindName(kind)) +
                          " lexicon file");
    }
    cmd->add_option("--word-frequencies", word_frequencies,
                    "Override the word frequency list");
    cmd->add_option("--sense-inventory", sense_inventory,
                    "Override the sense inventory");
  }

  ResourceSet Load() const {
    ResourceSet set;
    if (!dir.empty()) set = ResourceSet::LoadDirectory(dir);
    for (const auto &[kind, path] : lexicons) {
      if (path.empty()) continue;
      set.lexicons.erase(kind);
      set.lexicons.emplace(kind, LoadLexicon(path, kind));
    }
    if (!word_frequencies.empty()) {
      set.frequencies = LoadFrequencyList(word_frequencies);
    }
    if (!sense_inventory.empty()) {
      set.senses = LoadSenseInventory(sense_inventory);
    }
    return set;
  }
};

struct MatrixFlags {
  bool allow_subset = false;
  bool no_registry_check = false;

  void Register(CLI::App *cmd) {
    cmd->add_flag("--allow-subset", allow_subset,
                  "Accept matrices with a subset of the registry features");
    cmd->add_flag("--no-registry-check", no_registry_check,
                  "Accept arbitrary feature columns");
  }

  Dataset Read(const std::string &path) const {
    MatrixReadOptions options;
    options.allow_subset = allow_subset;
    options.validate_registry = !no_registry_check;
    return ReadFeatureMatrix(path, options);
  }
};

struct TrainFlags {
  double C = 1.0;
  uint64_t seed = 0;
  double tolerance = 1e-4;
  long max_iterations = 10000;
  std::string fill = "zero";

  void Register(CLI::App *cmd) {
    cmd->add_option("--C", C, "SVM regularization constant")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Solver stopping tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iterations", max_iterations,
                    "Solver iteration cap per binary model")
        ->capture_default_str();
    cmd->add_option("--fill", fill, "Unavailable-feature policy")
        ->check(CLI::IsMember({"zero", "error"}))
        ->capture_default_str();
  }

  TrainConfig Config(int jobs) const {
    TrainConfig c;
    c.C = C;
    c.seed = seed;
    c.tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.jobs = jobs;
    c.fill = fill == "zero" ? FillPolicy::kZero : FillPolicy::kError;
    return c;
  }
};

void Emit(const std::string &out_path, const std::string &content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    WriteFile(out_path, content);
  }
}

std::string CsvQuote(const std::string &field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

Dataset MaybeMerge(Dataset dataset, const std::string &map) {
  if (map.empty()) return dataset;
  return MergeLevels(dataset, LevelMapping::Parse(map));
}

std::string CountsLine(const std::map<int, size_t> &counts) {
  std::string out;
  for (const auto &[label, count] : counts) {
    if (!out.empty()) out += " ";
    out += std::to_string(label) + ":" + std::to_string(count);
  }
  return out;
}

std::vector<int> ReadLabels(const std::string &path) {
  std::istringstream in(ReadFile(path));
  std::vector<int> labels;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      size_t used = 0;
      labels.push_back(std::stoi(line, &used));
      if (line.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(line);
      }
    } catch (const std::exception &) {
      throw Error("malformed_labels", path + " line " +
                                          std::to_string(number) +
                                          ": not an integer label");
    }
  }
  return labels;
}

HttpServer *g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

int Run(int argc, char **argv) {
  CLI::App app{"Readability assessment toolkit", "readlevel"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // extract
  auto *extract = app.add_subcommand("extract", "Extract features from a corpus");
  std::string corpus_path;
  std::string out_path;
  std::string abbreviations;
  bool lenient = false;
  std::string extract_fill = "zero";
  ResourceFlags resources;
  extract->add_option("--corpus", corpus_path, "JSONL corpus")->required();
  extract->add_option("--out", out_path, "Output matrix CSV (default stdout)");
  extract->add_option("--abbreviations", abbreviations,
                      "Abbreviation list replacing the built-in one");
  extract->add_flag("--lenient", lenient, "Skip malformed corpus lines");
  extract->add_option("--fill", extract_fill, "Unavailable-feature policy")
      ->check(CLI::IsMember({"zero", "error"}))
      ->capture_default_str();
  resources.Register(extract);

  // train
  auto *train = app.add_subcommand("train", "Train a one-vs-one linear SVM");
  std::string matrix_path;
  std::string merge_map;
  std::string features_path;
  MatrixFlags matrix_flags;
  TrainFlags train_flags;
  train->add_option("--matrix", matrix_path, "Feature matrix CSV")->required();
  train->add_option("--out", out_path, "Model JSON (default stdout)");
  train->add_option("--merge", merge_map, "Level mapping, e.g. 1:1,2:2,3:2,4:3,5:3");
  train->add_option("--features", features_path,
                    "File listing the feature names to keep, one per line");
  matrix_flags.Register(train);
  train_flags.Register(train);

  // predict
  auto *predict = app.add_subcommand("predict", "Predict grade levels");
  std::string model_path;
  predict->add_option("--model", model_path, "Model JSON")->required();
  predict->add_option("--matrix", matrix_path, "Feature matrix CSV")->required();
  predict->add_option("--out", out_path, "Output CSV (default stdout)");
  matrix_flags.Register(predict);

  // cv
  auto *cv = app.add_subcommand("cv", "Cross-validate");
  int k = 10;
  bool unstratified = false;
  std::string json_path;
  cv->add_option("--matrix", matrix_path, "Feature matrix CSV")->required();
  cv->add_option("--k", k, "Folds")->capture_default_str();
  cv->add_flag("--unstratified", unstratified, "Plain shuffled folds");
  cv->add_option("--merge", merge_map, "Level mapping applied before CV");
  cv->add_option("--json", json_path, "Also write the JSON report here");
  cv->add_option("--features", features_path,
                 "File listing the feature names to keep, one per line");
  matrix_flags.Register(cv);
  train_flags.Register(cv);

  // rfe
  auto *rfe = app.add_subcommand("rfe", "Recursive feature elimination");
  size_t target = 44;
  size_t step = 1;
  rfe->add_option("--matrix", matrix_path, "Feature matrix CSV")->required();
  rfe->add_option("--target", target, "Features to keep")->capture_default_str();
  rfe->add_option("--step", step, "Features dropped per round")
      ->capture_default_str();
  rfe->add_option("--merge", merge_map, "Level mapping applied first");
  rfe->add_option("--out", out_path, "Ranking JSON (default stdout)");
  matrix_flags.Register(rfe);
  train_flags.Register(rfe);

  // select
  auto *select = app.add_subcommand("select", "Select an annotation batch");
  std::string pool_path;
  size_t batch_k = 100;
  std::string strategy = "most_uncertain";
  std::string aggregation = "min";
  select->add_option("--model", model_path, "Model JSON")->required();
  select->add_option("--pool", pool_path, "Pool feature matrix CSV")->required();
  select->add_option("--k", batch_k, "Batch size")->capture_default_str();
  select->add_option("--strategy", strategy, "Selection strategy")
      ->check(CLI::IsMember({"most_uncertain", "most_confident"}))
      ->capture_default_str();
  select->add_option("--aggregation", aggregation,
                     "Per-pair distance aggregation")
      ->check(CLI::IsMember({"min", "mean", "vote"}))
      ->capture_default_str();
  select->add_option("--out", out_path, "Batch JSON (default stdout)");
  matrix_flags.Register(select);

  // merge
  auto *merge = app.add_subcommand("merge", "Merge grade levels");
  merge->add_option("--matrix", matrix_path, "Feature matrix CSV")->required();
  merge->add_option("--map", merge_map, "Level mapping, e.g. 1:1,2:2,3:2,4:3,5:3")
      ->required();
  merge->add_option("--out", out_path, "Merged matrix CSV");
  matrix_flags.Register(merge);

  // kappa
  auto *kappa = app.add_subcommand("kappa", "Cohen's kappa of two annotators");
  std::string a_path;
  std::string b_path;
  kappa->add_option("--a", a_path, "Labels of annotator A, one per line")
      ->required();
  kappa->add_option("--b", b_path, "Labels of annotator B, one per line")
      ->required();
  kappa->add_option("--json", json_path, "Also write the JSON report here");

  // al-run
  auto *al = app.add_subcommand(
      "al-run", "Active-learning run with the pool's level column as oracle");
  std::string labeled_path;
  int steps = 4;
  std::string schedule;
  al->add_option("--labeled", labeled_path, "Initial labeled matrix")
      ->required();
  al->add_option("--pool", pool_path, "Pool matrix; its level column answers")
      ->required();
  al->add_option("--steps", steps, "Steps")->capture_default_str();
  al->add_option("--k", batch_k, "Batch size")->capture_default_str();
  al->add_option("--folds", k, "CV folds")->capture_default_str();
  al->add_option("--schedule", schedule,
                 "Comma-separated strategies per step (default most_uncertain)");
  al->add_option("--merge", merge_map, "Level mapping applied throughout");
  al->add_option("--out", out_path, "Report JSON (default stdout)");
  matrix_flags.Register(al);
  train_flags.Register(al);

  // serve
  auto *serve = app.add_subcommand("serve", "Run the annotation service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string static_dir;
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port (0 picks a free one)")
      ->capture_default_str();
  serve->add_option("--data-dir", data_dir,
                    "Event logs and snapshots (default: in memory)");
  serve->add_option("--static", static_dir, "Workbench assets served at /");
  resources.Register(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  TrainConfig train_config = train_flags.Config(jobs);
  auto keep_features = [&](Dataset d) {
    if (features_path.empty()) return d;
    std::vector<std::string> names;
    std::istringstream in(ReadFile(features_path));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') names.push_back(line);
    }
    return d.Project(names);
  };

  if (*extract) {
    CorpusReadOptions options;
    options.strict = !lenient;
    CorpusReadResult corpus = ReadCorpus(corpus_path, options);
    for (const auto &e : corpus.errors) std::cerr << "skipped: " << e << "\n";
    SegmenterConfig segmenter = SegmenterConfig::PortugueseDefaults();
    if (!abbreviations.empty()) segmenter.LoadAbbreviations(abbreviations);
    FeatureConfig features;
    features.fill = extract_fill == "zero" ? FillPolicy::kZero : FillPolicy::kError;
    ExtractionResult result = ExtractDataset(corpus.records, resources.Load(),
                                             features, segmenter, jobs);
    for (const auto &[id, reason] : result.failures) {
      std::cerr << "dropped: " << id << ": " << reason << "\n";
    }
    Emit(out_path, FormatFeatureMatrix(result.dataset));
    std::cerr << "records: " << corpus.records.size()
              << " extracted: " << result.dataset.size()
              << " dropped: " << result.failures.size()
              << " skipped_lines: " << corpus.errors.size() << "\n";
    return 0;
  }
  if (*train) {
    Dataset d = keep_features(MaybeMerge(matrix_flags.Read(matrix_path), merge_map));
    MulticlassModel model = TrainMulticlass(d, train_config);
    Emit(out_path, FormatModel(model));
    std::cerr << "trained on " << d.size() << " instances, "
              << d.feature_count() << " features, labels "
              << CountsLine(d.TargetCounts()) << ", seed " << train_config.seed
              << "\n";
    return 0;
  }
  if (*predict) {
    MulticlassModel model = LoadModel(model_path);
    Dataset d = matrix_flags.Read(matrix_path);
    std::string out = "id,predicted,uncertainty\n";
    for (const Instance &inst : d.instances()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g",
                    Uncertainty(model, inst.features));
      out += CsvQuote(inst.id) + "," +
             std::to_string(Predict(model, inst.features)) +
             "," + buf + "\n";
    }
    Emit(out_path, out);
    return 0;
  }
  if (*cv) {
    Dataset d = keep_features(MaybeMerge(matrix_flags.Read(matrix_path), merge_map));
    EvalConfig eval;
    eval.k = k;
    eval.seed = train_config.seed;
    eval.stratified = !unstratified;
    eval.jobs = jobs;
    EvaluationReport report = CrossValidate(d, train_config, eval);
    std::cout << "instances: " << d.size() << "\n"
              << "folds: " << k << (eval.stratified ? " (stratified)" : "")
              << "\n"
              << "C: " << train_config.C << "\n"
              << "seed: " << train_config.seed << "\n"
              << "mean accuracy: " << Percent(report.mean_accuracy) << " (+/- "
              << Percent(report.spread) << ")\n"
              << "fold std: " << Percent(report.std_accuracy) << "\n"
              << "pooled accuracy: " << Percent(report.pooled_accuracy) << "\n"
              << FormatConfusionTable(report.confusion);
    if (!json_path.empty()) WriteFile(json_path, EvaluationReportJson(report));
    return 0;
  }
  if (*rfe) {
    Dataset d = MaybeMerge(matrix_flags.Read(matrix_path), merge_map);
    FeatureRanking ranking = Rfe(d, train_config, target, step);
    Emit(out_path, FeatureRankingJson(ranking));
    std::cerr << "kept " << ranking.survivor_set.size() << " of "
              << d.feature_count() << " features, seed " << train_config.seed
              << "\n";
    return 0;
  }
  if (*select) {
    MulticlassModel model = LoadModel(model_path);
    Dataset pool = matrix_flags.Read(pool_path);
    UncertaintyAggregation agg = aggregation == "min"
                                     ? UncertaintyAggregation::kMinDistance
                                 : aggregation == "mean"
                                     ? UncertaintyAggregation::kMeanDistance
                                     : UncertaintyAggregation::kVoteMargin;
    SelectionBatch batch =
        SelectBatch(model, pool, batch_k, ParseSelectionStrategy(strategy), agg);
    Emit(out_path, SelectionBatchJson(batch));
    return 0;
  }
  if (*merge) {
    Dataset d = matrix_flags.Read(matrix_path);
    LevelMapping mapping = LevelMapping::Parse(merge_map);
    std::map<int, size_t> before;
    for (const Instance &inst : d.instances()) {
      if (inst.level) ++before[*inst.level];
    }
    Dataset merged = MergeLevels(d, mapping);
    std::cout << "mapping: " << mapping.ToString() << "\n"
              << "before: " << CountsLine(before) << "\n"
              << "after: " << CountsLine(merged.TargetCounts()) << "\n";
    if (!out_path.empty()) WriteFeatureMatrix(merged, out_path);
    return 0;
  }
  if (*kappa) {
    std::vector<int> a = ReadLabels(a_path);
    std::vector<int> b = ReadLabels(b_path);
    AgreementReport report = CohenKappa(a, b);
    std::printf("kappa: %.6f\nobserved: %.6f\nexpected: %.6f\nband: %s\n",
                report.kappa, report.observed_agreement,
                report.expected_agreement, report.band.c_str());
    if (report.degenerate) std::printf("degenerate: true\n");
    if (!json_path.empty()) WriteFile(json_path, AgreementReportJson(report));
    return 0;
  }
  if (*al) {
    Dataset labeled = matrix_flags.Read(labeled_path);
    Dataset pool = matrix_flags.Read(pool_path);
    ActiveLearningConfig config;
    config.steps = steps;
    config.k = batch_k;
    config.train = train_config;
    config.eval.k = k;
    config.eval.seed = train_config.seed;
    config.eval.jobs = jobs;
    if (!merge_map.empty()) {
      config.mapping = LevelMapping::Parse(merge_map);
      labeled = MergeLevels(labeled, *config.mapping);
    }
    std::stringstream in(schedule);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) config.schedule.push_back(ParseSelectionStrategy(item));
    }
    // Oracle answers come from the pool's own level column; the pool passed
    // to the run is stripped of them.
    std::map<std::string, std::optional<int>> answers;
    Dataset hidden(pool.schema_ptr());
    for (const Instance &inst : pool.instances()) {
      answers[inst.id] = inst.level;
      Instance copy = inst;
      copy.level.reset();
      copy.merged_level.reset();
      hidden.Add(std::move(copy));
    }
    ActiveLearningReport report = ActiveLearningRun(
        labeled, hidden,
        [&](const Instance &inst) { return answers.at(inst.id); }, config);
    Emit(out_path, ActiveLearningReportJson(report));
    std::cerr << "initial " << report.initial_size << ": "
              << Percent(report.initial.mean_accuracy) << " (+/- "
              << Percent(report.initial.spread) << ")\n";
    for (const auto &s : report.steps) {
      std::cerr << "step " << SelectionStrategyName(s.strategy) << " "
                << s.dataset_size << ": "
                << Percent(s.evaluation.mean_accuracy) << " (+/- "
                << Percent(s.evaluation.spread) << ")\n";
    }
    std::cerr << "dropped: " << report.dropped << ", seed "
              << train_config.seed << "\n";
    if (report.aborted) {
      throw Error("step_aborted", *report.aborted);
    }
    return 0;
  }
  if (*serve) {
    ServiceConfig config;
    config.data_dir = data_dir;
    config.resources = resources.Load();
    config.jobs = jobs;
    AnnotationService service(std::move(config));
    HttpServer server(service, static_dir);
    int bound = port;
    if (port == 0) {
      bound = server.BindToAnyPort(host);
      if (bound < 0) throw Error("bind_failed", "cannot bind " + host);
    } else if (!server.Bind(host, port)) {
      throw Error("bind_failed",
                  "cannot bind " + host + ":" + std::to_string(port));
    }
    g_server = &server;
    std::signal(SIGINT, HandleSignal);
    std::signal(SIGTERM, HandleSignal);
    std::cout << "listening on http://" << host << ":" << bound << "\n"
              << std::flush;
    server.ListenAfterBind();
    g_server = nullptr;
    return 0;
  }
  return 2;
}

}  // namespace
}  // namespace readlevel

int main(int argc, char **argv) {
  try {
    return readlevel::Run(argc, argv);
  } catch (const readlevel::Error &e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::cerr << "error: " << e.code() << ": " << message << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
