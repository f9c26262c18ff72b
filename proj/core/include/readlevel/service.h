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

#ifndef READLEVEL_SERVICE_H_
#define READLEVEL_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "readlevel/corpusio.h"
#include "readlevel/dataset.h"
#include "readlevel/evaluation.h"
#include "readlevel/features.h"
#include "readlevel/learnloop.h"
#include "readlevel/lexicons.h"
#include "readlevel/svm.h"

namespace readlevel {

struct ServiceConfig {
  // Event logs and retrain snapshots live under <data_dir>/sessions/<id>/.
  // Empty keeps everything in memory.
  std::string data_dir;
  ResourceSet resources;
  FeatureConfig features;
  int jobs = 1;
};

struct SessionSettings {
  size_t k = 10;
  SelectionStrategy strategy = SelectionStrategy::kMostUncertain;
  uint64_t seed = 0;
  int folds = 10;
  double C = 1.0;
};

// POST /sessions. Exactly one of records / matrix_csv supplies documents;
// labeled documents seed the training set, unlabeled ones form the pool.
struct CreateSessionRequest {
  std::optional<std::string> session_id;
  std::vector<CorpusRecord> records;
  std::optional<std::string> matrix_csv;
  SessionSettings settings;
};

struct BatchItem {
  std::string id;
  std::string text;
  // Absent for cold-start batches.
  std::optional<double> score;
};

struct BatchView {
  std::vector<BatchItem> items;
  SelectionStrategy strategy = SelectionStrategy::kMostUncertain;
  bool cold_start = false;
};

struct LabelSubmission {
  std::string document_id;
  int level = 0;
  std::string annotator;
  // Filled with the server clock when empty.
  std::string timestamp;
};

struct LabelAck {
  size_t moved = 0;
  size_t overwritten = 0;
  size_t second_opinions = 0;
  size_t batch_remaining = 0;
};

struct HistoryRow {
  int step = 0;
  size_t dataset_size = 0;
  double mean_accuracy = 0.0;
  double spread = 0.0;
  double std_accuracy = 0.0;
  double pooled_accuracy = 0.0;
  std::string snapshot;

  bool operator==(const HistoryRow &) const = default;
};

struct AuditEntry {
  std::string document_id;
  std::string annotator;
  int level = 0;
  std::string timestamp;
  // "label", "overwrite" or "second_opinion".
  std::string action;

  bool operator==(const AuditEntry &) const = default;
};

struct SessionStatus {
  std::string session_id;
  SessionSettings settings;
  std::vector<HistoryRow> history;
  std::map<int, size_t> label_counts;
  size_t labeled_size = 0;
  size_t pool_size = 0;
  size_t dropped = 0;
  std::vector<std::string> batch_in_flight;
  bool cold_start = false;
  bool model_trained = false;
  size_t double_labeled = 0;
};

// Full copy of a session's state, for inspection and replay checks.
struct SessionSnapshot {
  Dataset labeled;
  Dataset pool;
  std::vector<std::string> dropped_ids;
  std::optional<MulticlassModel> model;
  std::vector<HistoryRow> history;
  std::vector<AuditEntry> audit;
  std::vector<std::string> batch_in_flight;
  // document id -> (annotator, level) of the later annotators.
  std::map<std::string, std::vector<std::pair<std::string, int>>> second;
};

struct ApiResponse {
  int status = 200;
  std::string body;
};

// Human-in-the-loop annotation sessions. Errors are readlevel::Error with
// codes mapped onto HTTP statuses by HttpStatusForCode().
class AnnotationService {
 public:
  // Replays every session found under config.data_dir.
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();
  AnnotationService(const AnnotationService &) = delete;
  AnnotationService &operator=(const AnnotationService &) = delete;

  std::string CreateSession(const CreateSessionRequest &request);
  std::vector<std::string> SessionIds() const;

  // Re-serves the batch in flight until labels clear it.
  BatchView NextBatch(const std::string &session_id,
                      std::optional<size_t> k = std::nullopt,
                      std::optional<SelectionStrategy> strategy = std::nullopt);
  LabelAck SubmitLabels(const std::string &session_id,
                        const std::vector<LabelSubmission> &labels);
  HistoryRow Retrain(const std::string &session_id);
  SessionStatus Status(const std::string &session_id) const;
  AgreementReport Agreement(const std::string &session_id) const;
  // Text and label state of one document.
  std::string DocumentJson(const std::string &session_id,
                           const std::string &document_id) const;
  SessionSnapshot Snapshot(const std::string &session_id) const;

  // Routes an /api/v1 request; `path` excludes the query string.
  ApiResponse Handle(const std::string &method, const std::string &path,
                     const std::multimap<std::string, std::string> &query,
                     const std::string &body);

 private:
  struct Session;
  std::shared_ptr<Session> Find(const std::string &session_id) const;
  std::shared_ptr<Session> Build(const std::string &id,
                                 const std::string &create_event);
  void Replay(const std::string &session_dir);

  ServiceConfig config_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

int HttpStatusForCode(const std::string &code);

std::string SessionStatusJson(const SessionStatus &status);
std::string BatchViewJson(const BatchView &batch);
std::string HistoryRowJson(const HistoryRow &row);

// Blocking HTTP front end over an AnnotationService.
class HttpServer {
 public:
  // `static_dir` is served at "/" when non-empty and present.
  HttpServer(AnnotationService &service, std::string static_dir = "");
  ~HttpServer();

  // Binds to an ephemeral port and returns it, or -1.
  int BindToAnyPort(const std::string &host);
  bool Bind(const std::string &host, int port);
  // Serves until Stop().
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace readlevel

#endif  // READLEVEL_SERVICE_H_
