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

#include "readlevel/corpusio.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "readlevel/error.h"
#include "readlevel/parallel.h"

namespace readlevel {
namespace {

using Json = nlohmann::ordered_json;

std::string LineError(int line, const std::string &message) {
  return "line " + std::to_string(line) + ": " + message;
}

std::optional<std::string> OptionalString(const Json &obj, const char *key,
                                          int line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error("malformed_record",
                LineError(line, std::string("'") + key + "' must be a string"));
  }
  return it->get<std::string>();
}

std::optional<int> OptionalInt(const Json &obj, const char *key, int line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw Error("malformed_record", LineError(line, std::string("'") + key +
                                                        "' must be an integer"));
  }
  return it->get<int>();
}

TokenRecord ParseTokenRecord(const Json &j, int line) {
  if (!j.is_object()) {
    throw Error("malformed_record", LineError(line, "token must be an object"));
  }
  TokenRecord t;
  t.line = line;
  auto surface = OptionalString(j, "surface", line);
  if (!surface || surface->empty()) {
    throw Error("malformed_record", LineError(line, "token without surface"));
  }
  t.surface = *surface;
  t.lemma = OptionalString(j, "lemma", line);
  t.pos = OptionalString(j, "pos", line);
  if (auto it = j.find("morph"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw Error("malformed_record",
                  LineError(line, "'morph' must be an object"));
    }
    for (const auto &[key, value] : it->items()) {
      if (!value.is_string()) {
        throw Error("malformed_record",
                    LineError(line, "morph value for '" + key +
                                        "' must be a string"));
      }
      t.morph[key] = value.get<std::string>();
    }
  }
  if (auto ne = OptionalString(j, "ne", line)) {
    auto parsed = ParseNamedEntity(*ne);
    if (!parsed) {
      throw Error("malformed_record",
                  LineError(line, "unknown named-entity class '" + *ne + "'"));
    }
    t.ne = *parsed;
  }
  t.paragraph = OptionalInt(j, "paragraph", line).value_or(0);
  t.sentence = OptionalInt(j, "sentence", line).value_or(0);
  t.clause_count = OptionalInt(j, "clause_count", line);
  if (auto it = j.find("clauses"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw Error("malformed_record",
                  LineError(line, "'clauses' must be an array"));
    }
    for (const auto &c : *it) {
      if (!c.is_string()) {
        throw Error("malformed_record",
                    LineError(line, "clause tags must be strings"));
      }
      t.clauses.push_back(c.get<std::string>());
    }
  }
  return t;
}

Json TokenRecordJson(const TokenRecord &t) {
  Json j;
  j["surface"] = t.surface;
  if (t.lemma) j["lemma"] = *t.lemma;
  if (t.pos) j["pos"] = *t.pos;
  if (!t.morph.empty()) j["morph"] = t.morph;
  if (t.ne != NamedEntity::kNone) j["ne"] = std::string(NamedEntityName(t.ne));
  j["paragraph"] = t.paragraph;
  j["sentence"] = t.sentence;
  if (t.clause_count) j["clause_count"] = *t.clause_count;
  if (!t.clauses.empty()) j["clauses"] = t.clauses;
  return j;
}

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvField(const std::string &field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits CSV content into rows of fields; quoted fields may span lines.
// Each row carries its starting line number.
std::vector<std::pair<int, std::vector<std::string>>> ParseCsv(
    std::string_view content) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  int line = 1;
  int row_line = 1;
  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(field);
      rows.emplace_back(row_line, std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };
  for (size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) {
    throw Error("malformed_matrix", LineError(row_line, "unterminated quote"));
  }
  end_row();
  return rows;
}

std::string JoinNames(const std::vector<std::string> &names,
                      const char *separator) {
  std::string out;
  for (const auto &n : names) {
    if (!out.empty()) out += separator;
    out += n;
  }
  return out;
}

Json EvaluationJson(const EvaluationReport &r) {
  Json j;
  j["mean_accuracy"] = r.mean_accuracy;
  j["spread"] = r.spread;
  j["std_accuracy"] = r.std_accuracy;
  j["pooled_accuracy"] = r.pooled_accuracy;
  j["per_fold_accuracy"] = r.per_fold_accuracy;
  j["fold_sizes"] = r.fold_sizes;
  j["labels"] = r.confusion.labels;
  j["confusion"] = r.confusion.counts;
  j["eval_config"] = {{"k", r.eval_config.k},
                      {"seed", r.eval_config.seed},
                      {"stratified", r.eval_config.stratified}};
  j["train_config"] = {{"C", r.train_config.C},
                       {"tolerance", r.train_config.tolerance},
                       {"max_iterations", r.train_config.max_iterations},
                       {"seed", r.train_config.seed}};
  return j;
}

}  // namespace

AnnotatedDocument CorpusRecord::ToDocument(
    const SegmenterConfig &config) const {
  if (tokens) return BuildDocument(*tokens, id, source);
  return BuildDocument(text.value_or(""), id, source, config);
}

CorpusRecord ParseCorpusRecord(std::string_view json_line, int line) {
  Json j;
  try {
    j = Json::parse(json_line);
  } catch (const Json::parse_error &e) {
    throw Error("malformed_record", LineError(line, "invalid JSON"));
  }
  if (!j.is_object()) {
    throw Error("malformed_record", LineError(line, "record must be an object"));
  }
  CorpusRecord r;
  r.line = line;
  auto id = OptionalString(j, "id", line);
  if (!id || id->empty()) {
    throw Error("malformed_record", LineError(line, "missing id"));
  }
  r.id = *id;
  r.source = OptionalString(j, "source", line).value_or("");
  r.level = OptionalInt(j, "level", line);
  if (r.level && (*r.level < 1 || *r.level > 5)) {
    throw Error("invalid_level",
                LineError(line, "level " + std::to_string(*r.level) +
                                    " outside 1..5"));
  }
  const bool has_text = j.contains("text") && !j["text"].is_null();
  const bool has_tokens = j.contains("tokens") && !j["tokens"].is_null();
  if (has_text && has_tokens) {
    throw Error("ambiguous_record",
                LineError(line, "ambiguous record: both text and tokens"));
  }
  if (!has_text && !has_tokens) {
    throw Error("malformed_record", LineError(line, "neither text nor tokens"));
  }
  if (has_text) {
    r.text = OptionalString(j, "text", line);
  } else {
    const Json &tokens = j["tokens"];
    if (!tokens.is_array() || tokens.empty()) {
      throw Error("malformed_record",
                  LineError(line, "'tokens' must be a non-empty array"));
    }
    r.tokens.emplace();
    for (const Json &t : tokens) r.tokens->push_back(ParseTokenRecord(t, line));
  }
  return r;
}

std::string SerializeCorpusRecord(const CorpusRecord &record) {
  Json j;
  j["id"] = record.id;
  j["source"] = record.source;
  if (record.level) j["level"] = *record.level;
  if (record.tokens) {
    Json tokens = Json::array();
    for (const auto &t : *record.tokens) tokens.push_back(TokenRecordJson(t));
    j["tokens"] = std::move(tokens);
  } else {
    j["text"] = record.text.value_or("");
  }
  return j.dump();
}

CorpusReadResult ParseCorpus(std::string_view content,
                             const CorpusReadOptions &options) {
  CorpusReadResult result;
  std::set<std::string> seen;
  int line = 0;
  for (std::string_view text : SplitLines(content)) {
    ++line;
    if (text.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      CorpusRecord r = ParseCorpusRecord(text, line);
      if (!seen.insert(r.id).second) {
        throw Error("duplicate_id", LineError(line, "duplicate id " + r.id));
      }
      result.records.push_back(std::move(r));
    } catch (const Error &e) {
      if (options.strict) throw;
      result.errors.push_back(e.what());
    }
  }
  if (result.records.empty()) {
    throw Error("empty_corpus", "no valid records");
  }
  return result;
}

CorpusReadResult ReadCorpus(const std::string &path,
                            const CorpusReadOptions &options) {
  return ParseCorpus(ReadFile(path), options);
}

void WriteCorpus(const std::vector<CorpusRecord> &records,
                 const std::string &path) {
  std::string out;
  for (const auto &r : records) out += SerializeCorpusRecord(r) + "\n";
  WriteFile(path, out);
}

ExtractionResult ExtractDataset(const std::vector<CorpusRecord> &records,
                                const ResourceSet &resources,
                                const FeatureConfig &config,
                                const SegmenterConfig &segmenter, int jobs) {
  std::vector<std::optional<FeatureVector>> vectors(records.size());
  std::vector<std::string> reasons(records.size());
  ParallelFor(records.size(), jobs, [&](size_t i) {
    try {
      vectors[i] = ExtractAll(records[i].ToDocument(segmenter), resources,
                              config);
    } catch (const Error &e) {
      reasons[i] = e.what();
    }
  });
  ExtractionResult result;
  result.dataset = Dataset(FeatureSchema::Registry());
  for (size_t i = 0; i < records.size(); ++i) {
    if (!vectors[i]) {
      result.failures.emplace_back(records[i].id, reasons[i]);
      continue;
    }
    Instance inst;
    inst.id = records[i].id;
    inst.source = records[i].source;
    inst.level = records[i].level;
    inst.features = std::move(*vectors[i]);
    result.dataset.Add(std::move(inst));
  }
  return result;
}

std::string FormatFeatureMatrix(const Dataset &dataset) {
  bool merged = false;
  for (const auto &inst : dataset.instances()) merged |= inst.merged_level.has_value();
  std::string out = "id,level,source";
  if (merged) out += ",merged_level";
  for (const auto &name : dataset.feature_names()) out += "," + CsvField(name);
  out += ",unavailable\n";
  for (const auto &inst : dataset.instances()) {
    out += CsvField(inst.id) + ",";
    if (inst.level) out += std::to_string(*inst.level);
    out += "," + CsvField(inst.source);
    if (merged) {
      out += ",";
      if (inst.merged_level) out += std::to_string(*inst.merged_level);
    }
    std::vector<std::string> unavailable;
    for (size_t c = 0; c < inst.features.size(); ++c) {
      out += "," + FormatDouble(inst.features.value(c));
      if (!inst.features.available(c)) {
        unavailable.push_back(dataset.feature_names()[c]);
      }
    }
    out += "," + CsvField(JoinNames(unavailable, ";")) + "\n";
  }
  return out;
}

Dataset ParseFeatureMatrix(std::string_view content,
                           const MatrixReadOptions &options) {
  auto rows = ParseCsv(content);
  if (rows.empty()) throw Error("malformed_matrix", "empty matrix file");
  const std::vector<std::string> &header = rows.front().second;
  if (header.size() < 3 || header[0] != "id" || header[1] != "level" ||
      header[2] != "source") {
    throw Error("malformed_matrix",
                "header must start with id,level,source");
  }
  size_t first_feature = 3;
  const bool merged = header.size() > 3 && header[3] == "merged_level";
  if (merged) ++first_feature;
  size_t end_feature = header.size();
  const bool has_unavailable = header.back() == "unavailable";
  if (has_unavailable) --end_feature;
  if (end_feature < first_feature) {
    throw Error("malformed_matrix", "header has no feature columns");
  }
  std::vector<std::string> names(header.begin() + first_feature,
                                 header.begin() + end_feature);
  {
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) {
      throw Error("malformed_matrix", "duplicate feature column");
    }
  }
  std::shared_ptr<const FeatureSchema> schema;
  if (options.validate_registry) {
    std::vector<std::string> unknown;
    for (const auto &n : names) {
      if (!FindFeature(n)) unknown.push_back(n);
    }
    if (!unknown.empty()) {
      throw Error("unknown_feature",
                  "unknown feature column(s): " + JoinNames(unknown, ", "));
    }
    const auto registry = FeatureSchema::Registry();
    if (names == registry->names()) {
      schema = registry;
    } else if (!options.allow_subset) {
      std::set<std::string> present(names.begin(), names.end());
      std::vector<std::string> missing;
      for (const auto &n : registry->names()) {
        if (!present.count(n)) missing.push_back(n);
      }
      if (!missing.empty()) {
        throw Error("missing_feature",
                    "missing feature column(s): " + JoinNames(missing, ", "));
      }
    }
  }
  if (!schema) schema = FeatureSchema::Make(names);

  Dataset dataset(schema);
  for (size_t r = 1; r < rows.size(); ++r) {
    const int line = rows[r].first;
    const auto &row = rows[r].second;
    if (row.size() != header.size()) {
      throw Error("malformed_matrix",
                  LineError(line, "expected " + std::to_string(header.size()) +
                                      " fields, got " +
                                      std::to_string(row.size())));
    }
    auto parse_level = [&](const std::string &field,
                           const char *column) -> std::optional<int> {
      if (field.empty()) return std::nullopt;
      char *end = nullptr;
      long v = std::strtol(field.c_str(), &end, 10);
      if (*end != '\0' || v < 1 || v > 5) {
        throw Error("malformed_matrix",
                    LineError(line, std::string("invalid ") + column + " '" +
                                        field + "'"));
      }
      return static_cast<int>(v);
    };
    Instance inst;
    inst.id = row[0];
    if (inst.id.empty()) {
      throw Error("malformed_matrix", LineError(line, "empty id"));
    }
    inst.level = parse_level(row[1], "level");
    inst.source = row[2];
    if (merged) inst.merged_level = parse_level(row[3], "merged_level");
    inst.features = FeatureVector(schema);
    std::set<std::string> unavailable;
    if (has_unavailable && !row.back().empty()) {
      std::stringstream in(row.back());
      std::string name;
      while (std::getline(in, name, ';')) {
        if (!schema->Find(name)) {
          throw Error("malformed_matrix",
                      LineError(line, "unknown unavailable feature " + name));
        }
        unavailable.insert(name);
      }
    }
    for (size_t c = 0; c < names.size(); ++c) {
      const std::string &field = row[first_feature + c];
      char *end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (field.empty() || *end != '\0' || !std::isfinite(v)) {
        throw Error("malformed_matrix",
                    LineError(line, "invalid value '" + field +
                                        "' for " + names[c]));
      }
      inst.features.Set(c, v, !unavailable.count(names[c]));
    }
    try {
      dataset.Add(std::move(inst));
    } catch (const Error &e) {
      throw Error(e.code(), LineError(line, e.what()));
    }
  }
  return dataset;
}

void WriteFeatureMatrix(const Dataset &dataset, const std::string &path) {
  WriteFile(path, FormatFeatureMatrix(dataset));
}

Dataset ReadFeatureMatrix(const std::string &path,
                          const MatrixReadOptions &options) {
  return ParseFeatureMatrix(ReadFile(path), options);
}

std::string FormatModel(const MulticlassModel &model) {
  Json j;
  j["format"] = "readlevel-model";
  j["version"] = kModelFormatVersion;
  j["labels"] = model.labels;
  j["feature_names"] = model.feature_names;
  std::vector<bool> constant(model.scaling.constant_mask.begin(),
                             model.scaling.constant_mask.end());
  j["scaling"] = {{"means", model.scaling.means},
                  {"stds", model.scaling.stds},
                  {"constant", constant}};
  Json binaries = Json::array();
  for (const auto &b : model.binaries) {
    binaries.push_back({{"pair", {b.label_pair.first, b.label_pair.second}},
                        {"weights", b.weights},
                        {"bias", b.bias}});
  }
  j["binaries"] = std::move(binaries);
  const TrainConfig &c = model.config;
  j["train_config"] = {
      {"C", c.C},
      {"tolerance", c.tolerance},
      {"max_iterations", c.max_iterations},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"fill", c.fill == FillPolicy::kZero ? "zero" : "error"}};
  return j.dump(2) + "\n";
}

MulticlassModel ParseModel(std::string_view content) {
  Json j;
  try {
    j = Json::parse(content);
  } catch (const Json::parse_error &e) {
    throw Error("corrupt_model", "corrupt model: unparsable content");
  }
  MulticlassModel model;
  try {
    if (j.at("format").get<std::string>() != "readlevel-model") {
      throw Error("corrupt_model", "corrupt model: wrong format tag");
    }
    int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error("model_version",
                  "model version " + std::to_string(version) +
                      ", expected " + std::to_string(kModelFormatVersion));
    }
    model.labels = j.at("labels").get<std::vector<int>>();
    model.feature_names =
        j.at("feature_names").get<std::vector<std::string>>();
    const Json &s = j.at("scaling");
    model.scaling.means = s.at("means").get<std::vector<double>>();
    model.scaling.stds = s.at("stds").get<std::vector<double>>();
    model.scaling.constant_mask = s.at("constant").get<std::vector<bool>>();
    for (const Json &b : j.at("binaries")) {
      BinaryModel binary;
      auto pair = b.at("pair").get<std::vector<int>>();
      if (pair.size() != 2) {
        throw Error("model_dimension", "label pair must have 2 entries");
      }
      binary.label_pair = {pair[0], pair[1]};
      binary.weights = b.at("weights").get<std::vector<double>>();
      binary.bias = b.at("bias").get<double>();
      model.binaries.push_back(std::move(binary));
    }
    const Json &c = j.at("train_config");
    model.config.C = c.at("C").get<double>();
    model.config.tolerance = c.at("tolerance").get<double>();
    model.config.max_iterations = c.at("max_iterations").get<long>();
    model.config.seed = c.at("seed").get<uint64_t>();
    model.config.jobs = c.at("jobs").get<int>();
    std::string fill = c.at("fill").get<std::string>();
    if (fill != "zero" && fill != "error") {
      throw Error("corrupt_model", "corrupt model: unknown fill policy");
    }
    model.config.fill = fill == "zero" ? FillPolicy::kZero : FillPolicy::kError;
  } catch (const Json::exception &e) {
    throw Error("corrupt_model", std::string("corrupt model: ") + e.what());
  }

  const size_t d = model.feature_names.size();
  const size_t l = model.labels.size();
  if (l < 2 || !std::is_sorted(model.labels.begin(), model.labels.end()) ||
      std::adjacent_find(model.labels.begin(), model.labels.end()) !=
          model.labels.end()) {
    throw Error("model_dimension", "labels must be >= 2 sorted distinct values");
  }
  if (model.scaling.means.size() != d || model.scaling.stds.size() != d ||
      model.scaling.constant_mask.size() != d) {
    throw Error("model_dimension", "scaling size differs from feature count");
  }
  if (model.binaries.size() != l * (l - 1) / 2) {
    throw Error("model_dimension", "expected " +
                                       std::to_string(l * (l - 1) / 2) +
                                       " binary models, got " +
                                       std::to_string(model.binaries.size()));
  }
  size_t p = 0;
  for (size_t a = 0; a < l; ++a) {
    for (size_t b = a + 1; b < l; ++b, ++p) {
      const BinaryModel &bin = model.binaries[p];
      if (bin.weights.size() != d) {
        throw Error("model_dimension", "binary " + std::to_string(p) +
                                           " has " +
                                           std::to_string(bin.weights.size()) +
                                           " weights, expected " +
                                           std::to_string(d));
      }
      if (bin.label_pair != std::make_pair(model.labels[a], model.labels[b])) {
        throw Error("model_dimension",
                    "binary " + std::to_string(p) + " has unexpected labels");
      }
    }
  }
  return model;
}

void SaveModel(const MulticlassModel &model, const std::string &path) {
  WriteFile(path, FormatModel(model));
}

MulticlassModel LoadModel(const std::string &path) {
  return ParseModel(ReadFile(path));
}

std::string EvaluationReportJson(const EvaluationReport &report) {
  return EvaluationJson(report).dump(2) + "\n";
}

std::string AgreementReportJson(const AgreementReport &report) {
  Json j;
  j["kappa"] = report.kappa;
  j["observed_agreement"] = report.observed_agreement;
  j["expected_agreement"] = report.expected_agreement;
  j["band"] = report.band;
  j["degenerate"] = report.degenerate;
  j["count"] = report.count;
  return j.dump(2) + "\n";
}

std::string FeatureRankingJson(const FeatureRanking &ranking) {
  Json j;
  j["elimination_order"] = ranking.elimination_order;
  j["survivor_set"] = ranking.survivor_set;
  return j.dump(2) + "\n";
}

std::string SelectionBatchJson(const SelectionBatch &batch) {
  Json j;
  j["strategy"] = SelectionStrategyName(batch.strategy);
  j["whole_pool"] = batch.whole_pool;
  j["document_ids"] = batch.document_ids;
  j["scores"] = Json::array();
  for (double s : batch.scores) {
    // Infinite distances (all-zero weights) have no JSON number.
    if (std::isfinite(s)) {
      j["scores"].push_back(s);
    } else {
      j["scores"].push_back(nullptr);
    }
  }
  return j.dump(2) + "\n";
}

std::string ActiveLearningReportJson(const ActiveLearningReport &report) {
  Json j;
  j["initial_size"] = report.initial_size;
  j["initial"] = EvaluationJson(report.initial);
  Json steps = Json::array();
  for (const auto &s : report.steps) {
    steps.push_back({{"dataset_size", s.dataset_size},
                     {"strategy", SelectionStrategyName(s.strategy)},
                     {"mean_accuracy", s.evaluation.mean_accuracy},
                     {"spread", s.evaluation.spread},
                     {"selected_ids", s.selected_ids},
                     {"dropped_ids", s.dropped_ids},
                     {"evaluation", EvaluationJson(s.evaluation)}});
  }
  j["steps"] = std::move(steps);
  j["dropped"] = report.dropped;
  if (report.aborted) j["aborted"] = *report.aborted;
  return j.dump(2) + "\n";
}

std::string FormatConfusionTable(const ConfusionMatrix &confusion) {
  std::ostringstream out;
  out << std::setw(9) << "gold\\pred";
  for (int label : confusion.labels) out << std::setw(7) << label;
  out << std::setw(8) << "total" << "\n";
  auto sums = confusion.RowSums();
  for (size_t i = 0; i < confusion.labels.size(); ++i) {
    out << std::setw(9) << confusion.labels[i];
    for (long c : confusion.counts[i]) out << std::setw(7) << c;
    out << std::setw(8) << sums[i] << "\n";
  }
  return out.str();
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_file", "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("unwritable_file", "cannot write " + path);
  out << content;
  if (!out) throw Error("unwritable_file", "failed writing " + path);
}

}  // namespace readlevel
