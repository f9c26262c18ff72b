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

#ifndef READLEVEL_CORPUSIO_H_
#define READLEVEL_CORPUSIO_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "readlevel/dataset.h"
#include "readlevel/evaluation.h"
#include "readlevel/features.h"
#include "readlevel/learnloop.h"
#include "readlevel/svm.h"
#include "readlevel/textmodel.h"

namespace readlevel {

// One corpus line: {"id", "source", "level", "text"} or with "tokens"
// instead of "text".
struct CorpusRecord {
  std::string id;
  std::string source;
  std::optional<int> level;
  std::optional<std::string> text;
  std::optional<std::vector<TokenRecord>> tokens;
  int line = 0;

  AnnotatedDocument ToDocument(
      const SegmenterConfig &config = SegmenterConfig::PortugueseDefaults())
      const;
};

struct CorpusReadOptions {
  // Strict reading throws on the first malformed line; lenient reading
  // skips it and records the error.
  bool strict = true;
};

struct CorpusReadResult {
  std::vector<CorpusRecord> records;
  // "line N: message" for every skipped line.
  std::vector<std::string> errors;
};

// Parses one JSON line; throws Error("malformed_record", ...) naming `line`.
CorpusRecord ParseCorpusRecord(std::string_view json_line, int line);
std::string SerializeCorpusRecord(const CorpusRecord &record);

CorpusReadResult ParseCorpus(std::string_view content,
                             const CorpusReadOptions &options = {});
CorpusReadResult ReadCorpus(const std::string &path,
                            const CorpusReadOptions &options = {});
void WriteCorpus(const std::vector<CorpusRecord> &records,
                 const std::string &path);

struct ExtractionResult {
  Dataset dataset;
  // (id, reason) for records that could not be processed.
  std::vector<std::pair<std::string, std::string>> failures;
};

// ExtractAll over every record; failing records are dropped and listed.
ExtractionResult ExtractDataset(
    const std::vector<CorpusRecord> &records, const ResourceSet &resources,
    const FeatureConfig &config = {},
    const SegmenterConfig &segmenter = SegmenterConfig::PortugueseDefaults(),
    int jobs = 1);

struct MatrixReadOptions {
  // Accept a column subset of the registry.
  bool allow_subset = false;
  // Check columns against the feature registry at all.
  bool validate_registry = true;
};

// CSV: id,level,source[,merged_level],<features...>,unavailable. The last
// column lists unavailable feature names joined by ';'.
std::string FormatFeatureMatrix(const Dataset &dataset);
Dataset ParseFeatureMatrix(std::string_view content,
                           const MatrixReadOptions &options = {});
void WriteFeatureMatrix(const Dataset &dataset, const std::string &path);
Dataset ReadFeatureMatrix(const std::string &path,
                          const MatrixReadOptions &options = {});

inline constexpr int kModelFormatVersion = 1;

std::string FormatModel(const MulticlassModel &model);
// Throws Error("corrupt_model", ...) on unparsable input and
// Error("model_version", ...) / Error("model_dimension", ...) on
// inconsistent content.
MulticlassModel ParseModel(std::string_view content);
void SaveModel(const MulticlassModel &model, const std::string &path);
MulticlassModel LoadModel(const std::string &path);

// Pretty-printed JSON reports.
std::string EvaluationReportJson(const EvaluationReport &report);
std::string AgreementReportJson(const AgreementReport &report);
std::string FeatureRankingJson(const FeatureRanking &ranking);
std::string SelectionBatchJson(const SelectionBatch &batch);
std::string ActiveLearningReportJson(const ActiveLearningReport &report);

// Aligned terminal rendering of a confusion matrix.
std::string FormatConfusionTable(const ConfusionMatrix &confusion);

std::string ReadFile(const std::string &path);
// Truncates or creates `path`.
void WriteFile(const std::string &path, std::string_view content);

}  // namespace readlevel

#endif  // READLEVEL_CORPUSIO_H_
