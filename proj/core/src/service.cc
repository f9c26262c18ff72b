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

#include "readlevel/service.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "readlevel/error.h"
#include "readlevel/random.h"

namespace readlevel {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string NowUtc() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool ValidSessionId(const std::string &id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      return false;
    }
  }
  return true;
}

Json SettingsJson(const SessionSettings &s) {
  return {{"k", s.k},
          {"strategy", SelectionStrategyName(s.strategy)},
          {"seed", s.seed},
          {"folds", s.folds},
          {"C", s.C}};
}

SessionSettings ParseSettings(const Json &j) {
  SessionSettings s;
  try {
    if (j.contains("k")) s.k = j.at("k").get<size_t>();
    if (j.contains("strategy")) {
      s.strategy = ParseSelectionStrategy(j.at("strategy").get<std::string>());
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
    if (j.contains("folds")) s.folds = j.at("folds").get<int>();
    if (j.contains("C")) s.C = j.at("C").get<double>();
  } catch (const Json::exception &e) {
    throw Error("invalid_settings", std::string("bad session settings: ") +
                                        e.what());
  }
  if (s.k == 0) throw Error("invalid_settings", "k must be positive");
  if (s.folds < 2) throw Error("invalid_settings", "folds must be >= 2");
  if (!(s.C > 0)) throw Error("invalid_settings", "C must be positive");
  return s;
}

Json HistoryJson(const HistoryRow &row) {
  return {{"step", row.step},
          {"dataset_size", row.dataset_size},
          {"mean_accuracy", row.mean_accuracy},
          {"spread", row.spread},
          {"std_accuracy", row.std_accuracy},
          {"pooled_accuracy", row.pooled_accuracy},
          {"snapshot", row.snapshot}};
}

Json ErrorBody(const std::string &code, const std::string &message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int HttpStatusForCode(const std::string &code) {
  static const std::map<std::string, int> kStatus = {
      {"unknown_session", 404},   {"unknown_document", 404},
      {"not_found", 404},         {"method_not_allowed", 405},
      {"session_exists", 409},    {"pool_exhausted", 409},
      {"untrainable", 409},       {"no_pairs", 409},
      {"invalid_level", 422},     {"not_in_flight", 422},
      {"invalid_submission", 422}, {"internal", 500},
  };
  auto it = kStatus.find(code);
  return it == kStatus.end() ? 400 : it->second;
}

struct AnnotationService::Session {
  std::string id;
  SessionSettings settings;
  // Empty when not persisted.
  std::string dir;

  // Held by the single writer for the whole of a mutation.
  std::mutex writer;
  // Exclusive only while a computed mutation is committed.
  mutable std::shared_mutex state;

  Dataset labeled;
  Dataset pool;
  std::map<std::string, std::string> texts;
  std::vector<std::string> dropped_ids;
  size_t total = 0;
  std::optional<MulticlassModel> model;
  std::vector<HistoryRow> history;
  std::vector<AuditEntry> audit;
  // Annotator of the label used for training; "" for corpus labels.
  std::map<std::string, std::string> primary;
  std::map<std::string, std::vector<std::pair<std::string, int>>> second;

  struct InFlight {
    std::vector<std::string> ids;
    std::vector<std::optional<double>> scores;
    SelectionStrategy strategy = SelectionStrategy::kMostUncertain;
    bool cold_start = false;
  };
  std::optional<InFlight> in_flight;
  long batches_served = 0;

  void Append(const Json &event) const {
    if (dir.empty()) return;
    std::ofstream out(fs::path(dir) / "events.jsonl", std::ios::app);
    out << event.dump() << "\n";
    out.flush();
    if (!out) throw Error("internal", "cannot append to event log of " + id);
  }

  void CheckInvariants() const {
    for (const Instance &inst : pool.instances()) {
      if (labeled.Contains(inst.id)) {
        throw Error("internal", "document " + inst.id +
                                    " is both labeled and in the pool");
      }
    }
    if (labeled.size() + pool.size() + dropped_ids.size() != total) {
      throw Error("internal", "document count not conserved");
    }
    if (in_flight) {
      for (const auto &doc : in_flight->ids) {
        if (!pool.Contains(doc)) {
          throw Error("internal", "in-flight document " + doc +
                                      " is not in the pool");
        }
      }
    }
  }

  const Instance *FindIn(const Dataset &d, const std::string &doc) const {
    for (const Instance &inst : d.instances()) {
      if (inst.id == doc) return &inst;
    }
    return nullptr;
  }

  bool InFlightContains(const std::string &doc) const {
    return in_flight && std::find(in_flight->ids.begin(), in_flight->ids.end(),
                                  doc) != in_flight->ids.end();
  }

  void ApplyBatch(InFlight batch) {
    in_flight = std::move(batch);
    ++batches_served;
  }

  LabelAck ApplyLabels(const std::vector<LabelSubmission> &labels) {
    LabelAck ack;
    for (const LabelSubmission &s : labels) {
      AuditEntry entry{s.document_id, s.annotator, s.level, s.timestamp, ""};
      if (labeled.Contains(s.document_id)) {
        if (primary[s.document_id] == s.annotator) {
          for (size_t i = 0; i < labeled.size(); ++i) {
            if (labeled[i].id == s.document_id) {
              labeled.mutable_instance(i).level = s.level;
            }
          }
          entry.action = "overwrite";
          ++ack.overwritten;
        } else {
          auto &opinions = second[s.document_id];
          auto it = std::find_if(opinions.begin(), opinions.end(),
                                 [&](const auto &p) {
                                   return p.first == s.annotator;
                                 });
          if (it == opinions.end()) {
            opinions.emplace_back(s.annotator, s.level);
          } else {
            it->second = s.level;
          }
          entry.action = "second_opinion";
          ++ack.second_opinions;
        }
      } else {
        Instance inst = *FindIn(pool, s.document_id);
        inst.level = s.level;
        pool.Remove(s.document_id);
        labeled.Add(std::move(inst));
        primary[s.document_id] = s.annotator;
        auto pos = std::find(in_flight->ids.begin(), in_flight->ids.end(),
                             s.document_id);
        in_flight->scores.erase(in_flight->scores.begin() +
                                (pos - in_flight->ids.begin()));
        in_flight->ids.erase(pos);
        entry.action = "label";
        ++ack.moved;
      }
      audit.push_back(std::move(entry));
    }
    if (in_flight && in_flight->ids.empty()) in_flight.reset();
    ack.batch_remaining = in_flight ? in_flight->ids.size() : 0;
    return ack;
  }

  void Validate(const std::vector<LabelSubmission> &labels) const {
    if (labels.empty()) {
      throw Error("invalid_submission", "no labels submitted");
    }
    for (const LabelSubmission &s : labels) {
      if (s.level < 1 || s.level > 5) {
        throw Error("invalid_level", "level " + std::to_string(s.level) +
                                         " for " + s.document_id +
                                         " outside 1..5");
      }
      if (!labeled.Contains(s.document_id) && !InFlightContains(s.document_id)) {
        throw Error("not_in_flight",
                    "document " + s.document_id + " is not in the batch in "
                    "flight");
      }
    }
  }

  // Trains and cross-validates on the current labeled set.
  std::pair<MulticlassModel, EvaluationReport> ComputeRetrain(int jobs) const {
    std::map<int, size_t> counts;
    for (const Instance &inst : labeled.instances()) ++counts[*inst.level];
    if (counts.size() < 2) {
      throw Error("untrainable", "labeled set has fewer than 2 levels");
    }
    for (const auto &[level, count] : counts) {
      if (count < static_cast<size_t>(settings.folds)) {
        throw Error("untrainable",
                    "level " + std::to_string(level) + " has " +
                        std::to_string(count) + " documents, fewer than " +
                        std::to_string(settings.folds) + " folds");
      }
    }
    TrainConfig train;
    train.C = settings.C;
    train.seed = settings.seed;
    train.jobs = jobs;
    EvalConfig eval;
    eval.k = settings.folds;
    eval.seed = settings.seed;
    eval.jobs = jobs;
    return {TrainMulticlass(labeled, train),
            CrossValidate(labeled, train, eval)};
  }

  HistoryRow ApplyRetrain(MulticlassModel trained,
                          const EvaluationReport &report) {
    HistoryRow row;
    row.step = static_cast<int>(history.size()) + 1;
    row.dataset_size = labeled.size();
    row.mean_accuracy = report.mean_accuracy;
    row.spread = report.spread;
    row.std_accuracy = report.std_accuracy;
    row.pooled_accuracy = report.pooled_accuracy;
    if (!dir.empty()) {
      row.snapshot = (fs::path(dir) / ("snapshot-" + std::to_string(row.step) +
                                       ".csv"))
                         .string();
    }
    model = std::move(trained);
    history.push_back(row);
    return row;
  }
};

AnnotationService::AnnotationService(ServiceConfig config)
    : config_(std::move(config)) {
  if (config_.data_dir.empty()) return;
  fs::path root = fs::path(config_.data_dir) / "sessions";
  fs::create_directories(root);
  std::vector<fs::path> dirs;
  for (const auto &entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "events.jsonl")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto &dir : dirs) Replay(dir.string());
}

AnnotationService::~AnnotationService() = default;

std::shared_ptr<AnnotationService::Session> AnnotationService::Find(
    const std::string &session_id) const {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error("unknown_session", "no session " + session_id);
  }
  return it->second;
}

std::vector<std::string> AnnotationService::SessionIds() const {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto &[id, session] : sessions_) ids.push_back(id);
  return ids;
}

std::shared_ptr<AnnotationService::Session> AnnotationService::Build(
    const std::string &id, const std::string &create_event) {
  const Json event = Json::parse(create_event);
  auto session = std::make_shared<Session>();
  session->id = id;
  session->settings = ParseSettings(event.at("settings"));

  Dataset all;
  if (event.contains("matrix")) {
    MatrixReadOptions options;
    options.allow_subset = true;
    options.validate_registry = false;
    all = ParseFeatureMatrix(event.at("matrix").get<std::string>(), options);
  } else {
    std::vector<CorpusRecord> records;
    int line = 0;
    for (const Json &r : event.at("records")) {
      records.push_back(ParseCorpusRecord(r.dump(), ++line));
    }
    ExtractionResult extracted =
        ExtractDataset(records, config_.resources, config_.features,
                       SegmenterConfig::PortugueseDefaults(), config_.jobs);
    for (const auto &[doc, reason] : extracted.failures) {
      session->dropped_ids.push_back(doc);
    }
    for (const auto &r : records) {
      if (r.text) {
        session->texts[r.id] = *r.text;
      } else {
        try {
          session->texts[r.id] = r.ToDocument().Text();
        } catch (const Error &) {
          session->texts[r.id] = "";
        }
      }
    }
    all = std::move(extracted.dataset);
  }
  session->labeled = Dataset(all.schema_ptr());
  session->pool = Dataset(all.schema_ptr());
  for (const Instance &inst : all.instances()) {
    if (inst.level) {
      Instance copy = inst;
      copy.merged_level.reset();
      session->primary[inst.id] = "";
      session->labeled.Add(std::move(copy));
    } else {
      session->pool.Add(inst);
    }
  }
  session->total = session->labeled.size() + session->pool.size() +
                   session->dropped_ids.size();
  if (session->total == 0) throw Error("empty_corpus", "session has no documents");
  return session;
}

std::string AnnotationService::CreateSession(
    const CreateSessionRequest &request) {
  Json event;
  event["type"] = "create";
  event["settings"] = SettingsJson(request.settings);
  ParseSettings(event["settings"]);
  if (request.matrix_csv && !request.records.empty()) {
    throw Error("bad_request", "give either records or a matrix, not both");
  }
  if (request.matrix_csv) {
    event["matrix"] = *request.matrix_csv;
  } else {
    if (request.records.empty()) {
      throw Error("empty_corpus", "session needs at least one document");
    }
    Json records = Json::array();
    for (const auto &r : request.records) {
      records.push_back(Json::parse(SerializeCorpusRecord(r)));
    }
    event["records"] = std::move(records);
  }

  std::lock_guard<std::mutex> lock(sessions_mutex_);
  std::string id;
  if (request.session_id) {
    id = *request.session_id;
    if (!ValidSessionId(id)) {
      throw Error("bad_request", "session id must match [A-Za-z0-9_-]{1,64}");
    }
    if (sessions_.count(id)) {
      throw Error("session_exists", "session " + id + " already exists");
    }
  } else {
    for (size_t n = sessions_.size() + 1;; ++n) {
      id = "session-" + std::to_string(n);
      if (!sessions_.count(id)) break;
    }
  }
  event["session_id"] = id;
  auto session = Build(id, event.dump());
  if (!config_.data_dir.empty()) {
    fs::path dir = fs::path(config_.data_dir) / "sessions" / id;
    fs::create_directories(dir);
    std::ofstream(dir / "events.jsonl", std::ios::trunc).close();
    session->dir = dir.string();
    session->Append(event);
  }
  session->CheckInvariants();
  sessions_[id] = session;
  return id;
}

BatchView AnnotationService::NextBatch(
    const std::string &session_id, std::optional<size_t> k,
    std::optional<SelectionStrategy> strategy) {
  auto session = Find(session_id);
  std::lock_guard<std::mutex> writer(session->writer);
  if (!session->in_flight) {
    if (session->pool.empty()) {
      throw Error("pool_exhausted", "pool exhausted");
    }
    const size_t want = k.value_or(session->settings.k);
    if (want == 0) throw Error("bad_request", "k must be positive");
    Session::InFlight batch;
    batch.strategy = strategy.value_or(session->settings.strategy);
    if (session->model) {
      SelectionBatch selected =
          SelectBatch(*session->model, session->pool, want, batch.strategy);
      batch.ids = selected.document_ids;
      for (double s : selected.scores) batch.scores.emplace_back(s);
    } else {
      batch.cold_start = true;
      auto perm = SeededPermutation(
          session->pool.size(),
          session->settings.seed + static_cast<uint64_t>(session->batches_served));
      for (size_t t = 0; t < std::min(want, perm.size()); ++t) {
        batch.ids.push_back(session->pool[perm[t]].id);
        batch.scores.emplace_back(std::nullopt);
      }
    }
    Json event;
    event["type"] = "batch";
    event["ids"] = batch.ids;
    Json scores = Json::array();
    for (const auto &s : batch.scores) {
      if (s && std::isfinite(*s)) {
        scores.push_back(*s);
      } else {
        scores.push_back(nullptr);
      }
    }
    event["scores"] = std::move(scores);
    event["strategy"] = SelectionStrategyName(batch.strategy);
    event["cold_start"] = batch.cold_start;
    session->Append(event);
    std::unique_lock<std::shared_mutex> lock(session->state);
    session->ApplyBatch(std::move(batch));
    session->CheckInvariants();
  }
  std::shared_lock<std::shared_mutex> lock(session->state);
  BatchView view;
  view.strategy = session->in_flight->strategy;
  view.cold_start = session->in_flight->cold_start;
  for (size_t t = 0; t < session->in_flight->ids.size(); ++t) {
    const std::string &doc = session->in_flight->ids[t];
    auto text = session->texts.find(doc);
    view.items.push_back({doc, text == session->texts.end() ? "" : text->second,
                          session->in_flight->scores[t]});
  }
  return view;
}

LabelAck AnnotationService::SubmitLabels(
    const std::string &session_id, const std::vector<LabelSubmission> &labels) {
  auto session = Find(session_id);
  std::lock_guard<std::mutex> writer(session->writer);
  session->Validate(labels);
  std::vector<LabelSubmission> stamped = labels;
  Json items = Json::array();
  for (LabelSubmission &s : stamped) {
    if (s.timestamp.empty()) s.timestamp = NowUtc();
    items.push_back({{"document_id", s.document_id},
                     {"level", s.level},
                     {"annotator", s.annotator},
                     {"timestamp", s.timestamp}});
  }
  session->Append({{"type", "labels"}, {"labels", items}});
  std::unique_lock<std::shared_mutex> lock(session->state);
  LabelAck ack = session->ApplyLabels(stamped);
  session->CheckInvariants();
  return ack;
}

HistoryRow AnnotationService::Retrain(const std::string &session_id) {
  auto session = Find(session_id);
  std::lock_guard<std::mutex> writer(session->writer);
  // Readers keep going while training runs; only the commit is exclusive.
  auto [model, report] = session->ComputeRetrain(config_.jobs);
  const int step = static_cast<int>(session->history.size()) + 1;
  if (!session->dir.empty()) {
    WriteFeatureMatrix(session->labeled,
                       (fs::path(session->dir) /
                        ("snapshot-" + std::to_string(step) + ".csv"))
                           .string());
  }
  session->Append({{"type", "retrain"},
                   {"step", step},
                   {"mean_accuracy", report.mean_accuracy},
                   {"spread", report.spread}});
  std::unique_lock<std::shared_mutex> lock(session->state);
  return session->ApplyRetrain(std::move(model), report);
}

SessionStatus AnnotationService::Status(const std::string &session_id) const {
  auto session = Find(session_id);
  std::shared_lock<std::shared_mutex> lock(session->state);
  SessionStatus status;
  status.session_id = session->id;
  status.settings = session->settings;
  status.history = session->history;
  for (const Instance &inst : session->labeled.instances()) {
    ++status.label_counts[*inst.level];
  }
  status.labeled_size = session->labeled.size();
  status.pool_size = session->pool.size();
  status.dropped = session->dropped_ids.size();
  if (session->in_flight) {
    status.batch_in_flight = session->in_flight->ids;
    status.cold_start = session->in_flight->cold_start;
  }
  status.model_trained = session->model.has_value();
  for (const auto &[doc, opinions] : session->second) {
    if (!opinions.empty()) ++status.double_labeled;
  }
  return status;
}

AgreementReport AnnotationService::Agreement(
    const std::string &session_id) const {
  auto session = Find(session_id);
  std::shared_lock<std::shared_mutex> lock(session->state);
  std::vector<int> a;
  std::vector<int> b;
  for (const auto &[doc, opinions] : session->second) {
    const Instance *inst = session->FindIn(session->labeled, doc);
    if (!inst || opinions.empty()) continue;
    a.push_back(*inst->level);
    b.push_back(opinions.front().second);
  }
  if (a.empty()) throw Error("no_pairs", "no doubly-labeled documents");
  return CohenKappa(a, b);
}

std::string AnnotationService::DocumentJson(
    const std::string &session_id, const std::string &document_id) const {
  auto session = Find(session_id);
  std::shared_lock<std::shared_mutex> lock(session->state);
  Json j;
  j["id"] = document_id;
  if (const Instance *inst = session->FindIn(session->labeled, document_id)) {
    j["state"] = "labeled";
    j["level"] = *inst->level;
    j["annotator"] = session->primary.at(document_id);
  } else if (session->pool.Contains(document_id)) {
    j["state"] = session->InFlightContains(document_id) ? "in_flight" : "pool";
  } else if (std::count(session->dropped_ids.begin(),
                        session->dropped_ids.end(), document_id)) {
    j["state"] = "dropped";
  } else {
    throw Error("unknown_document", "no document " + document_id);
  }
  auto text = session->texts.find(document_id);
  j["text"] = text == session->texts.end() ? "" : text->second;
  return j.dump(2) + "\n";
}

SessionSnapshot AnnotationService::Snapshot(
    const std::string &session_id) const {
  auto session = Find(session_id);
  std::shared_lock<std::shared_mutex> lock(session->state);
  SessionSnapshot snap;
  snap.labeled = session->labeled;
  snap.pool = session->pool;
  snap.dropped_ids = session->dropped_ids;
  snap.model = session->model;
  snap.history = session->history;
  snap.audit = session->audit;
  if (session->in_flight) snap.batch_in_flight = session->in_flight->ids;
  snap.second = session->second;
  return snap;
}

void AnnotationService::Replay(const std::string &session_dir) {
  const fs::path log = fs::path(session_dir) / "events.jsonl";
  const std::string content = ReadFile(log.string());
  std::shared_ptr<Session> session;
  size_t offset = 0;
  while (offset < content.size()) {
    const size_t end = content.find('\n', offset);
    // A final line without its newline is a torn write from a crash. Cut it
    // off so that later appends start on a fresh line.
    if (end == std::string::npos) {
      fs::resize_file(log, offset);
      break;
    }
    const std::string line = content.substr(offset, end - offset);
    if (line.empty()) {
      offset = end + 1;
      continue;
    }
    Json event;
    try {
      event = Json::parse(line);
    } catch (const Json::parse_error &) {
      if (content.find('\n', end + 1) != std::string::npos) {
        throw Error("corrupt_log", "unparsable event inside " + log.string());
      }
      fs::resize_file(log, offset);
      break;
    }
    offset = end + 1;
    const std::string type = event.value("type", "");
    if (!session) {
      if (type != "create") {
        throw Error("corrupt_log", "event log of " + session_dir +
                                       " does not start with create");
      }
      session = Build(event.at("session_id").get<std::string>(), line);
      session->dir = session_dir;
      continue;
    }
    if (type == "batch") {
      Session::InFlight batch;
      batch.ids = event.at("ids").get<std::vector<std::string>>();
      for (const Json &s : event.at("scores")) {
        if (s.is_null()) {
          batch.scores.emplace_back(std::nullopt);
        } else {
          batch.scores.emplace_back(s.get<double>());
        }
      }
      batch.strategy =
          ParseSelectionStrategy(event.at("strategy").get<std::string>());
      batch.cold_start = event.at("cold_start").get<bool>();
      session->ApplyBatch(std::move(batch));
    } else if (type == "labels") {
      std::vector<LabelSubmission> labels;
      for (const Json &s : event.at("labels")) {
        labels.push_back({s.at("document_id").get<std::string>(),
                          s.at("level").get<int>(),
                          s.at("annotator").get<std::string>(),
                          s.at("timestamp").get<std::string>()});
      }
      session->Validate(labels);
      session->ApplyLabels(labels);
    } else if (type == "retrain") {
      auto [model, report] = session->ComputeRetrain(config_.jobs);
      if (report.mean_accuracy != event.at("mean_accuracy").get<double>()) {
        throw Error("corrupt_log",
                    "retrain step " + std::to_string(event.value("step", 0)) +
                        " of " + session_dir + " does not reproduce");
      }
      session->ApplyRetrain(std::move(model), report);
    } else {
      throw Error("corrupt_log", "unknown event type '" + type + "'");
    }
    session->CheckInvariants();
  }
  if (session) sessions_[session->id] = session;
}

namespace {

std::vector<std::string> SplitPath(const std::string &path) {
  std::vector<std::string> parts;
  std::stringstream in(path);
  std::string part;
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

Json StatusJsonObject(const SessionStatus &s) {
  Json j;
  j["session_id"] = s.session_id;
  j["settings"] = SettingsJson(s.settings);
  j["history"] = Json::array();
  for (const auto &row : s.history) j["history"].push_back(HistoryJson(row));
  Json counts = Json::object();
  for (int level = 1; level <= 5; ++level) {
    auto it = s.label_counts.find(level);
    counts[std::to_string(level)] = it == s.label_counts.end() ? 0 : it->second;
  }
  j["label_counts"] = std::move(counts);
  j["labeled_size"] = s.labeled_size;
  j["pool_size"] = s.pool_size;
  j["dropped"] = s.dropped;
  j["strategy"] = SelectionStrategyName(s.settings.strategy);
  j["batch_in_flight"] = s.batch_in_flight;
  j["cold_start"] = s.cold_start;
  j["model_trained"] = s.model_trained;
  j["double_labeled"] = s.double_labeled;
  return j;
}

std::optional<std::string> QueryValue(
    const std::multimap<std::string, std::string> &query,
    const std::string &key) {
  auto it = query.find(key);
  if (it == query.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::string SessionStatusJson(const SessionStatus &status) {
  return StatusJsonObject(status).dump(2) + "\n";
}

std::string BatchViewJson(const BatchView &batch) {
  Json j;
  j["strategy"] = SelectionStrategyName(batch.strategy);
  j["cold_start"] = batch.cold_start;
  j["documents"] = Json::array();
  for (const auto &item : batch.items) {
    Json d = {{"id", item.id}, {"text", item.text}};
    if (item.score && std::isfinite(*item.score)) {
      d["score"] = *item.score;
    } else {
      d["score"] = nullptr;
    }
    j["documents"].push_back(std::move(d));
  }
  return j.dump(2) + "\n";
}

std::string HistoryRowJson(const HistoryRow &row) {
  return HistoryJson(row).dump(2) + "\n";
}

ApiResponse AnnotationService::Handle(
    const std::string &method, const std::string &path,
    const std::multimap<std::string, std::string> &query,
    const std::string &body) {
  auto ok = [](const Json &j, int status = 200) {
    return ApiResponse{status, j.dump(2) + "\n"};
  };
  auto raw = [](const std::string &text, int status = 200) {
    return ApiResponse{status, text};
  };
  auto parse_body = [&]() -> Json {
    if (body.empty()) return Json::object();
    try {
      return Json::parse(body);
    } catch (const Json::parse_error &) {
      throw Error("bad_request", "request body is not valid JSON");
    }
  };
  try {
    std::vector<std::string> parts = SplitPath(path);
    if (parts.size() >= 2 && parts[0] == "api" && parts[1] == "v1") {
      parts.erase(parts.begin(), parts.begin() + 2);
    }
    if (parts.empty() || parts[0] != "sessions") {
      throw Error("not_found", "no route for " + path);
    }
    auto require = [&](const char *want) {
      if (method != want) {
        throw Error("method_not_allowed", method + " not allowed on " + path);
      }
    };
    if (parts.size() == 1) {
      if (method == "GET") return ok({{"sessions", SessionIds()}});
      require("POST");
      Json j = parse_body();
      if (!j.is_object()) throw Error("bad_request", "body must be an object");
      CreateSessionRequest request;
      if (j.contains("session_id")) {
        request.session_id = j.at("session_id").get<std::string>();
      }
      request.settings = ParseSettings(j);
      if (j.contains("records")) {
        if (!j.at("records").is_array()) {
          throw Error("bad_request", "'records' must be an array");
        }
        int line = 0;
        for (const Json &r : j.at("records")) {
          request.records.push_back(ParseCorpusRecord(r.dump(), ++line));
        }
      }
      if (j.contains("corpus_path")) {
        request.records =
            ReadCorpus(j.at("corpus_path").get<std::string>()).records;
      }
      if (j.contains("matrix")) {
        request.matrix_csv = j.at("matrix").get<std::string>();
      }
      if (j.contains("matrix_path")) {
        request.matrix_csv = ReadFile(j.at("matrix_path").get<std::string>());
      }
      std::string id = CreateSession(request);
      Json out = StatusJsonObject(Status(id));
      return ok(out, 201);
    }
    const std::string &id = parts[1];
    if (parts.size() == 2) {
      require("GET");
      return raw(SessionStatusJson(Status(id)));
    }
    const std::string &action = parts[2];
    if (action == "documents" && parts.size() == 4) {
      require("GET");
      return raw(DocumentJson(id, parts[3]));
    }
    if (parts.size() != 3) throw Error("not_found", "no route for " + path);
    if (action == "batch") {
      require("GET");
      std::optional<size_t> k;
      if (auto v = QueryValue(query, "k")) {
        try {
          long parsed = std::stol(*v);
          if (parsed <= 0) throw std::invalid_argument("k");
          k = static_cast<size_t>(parsed);
        } catch (const std::exception &) {
          throw Error("bad_request", "k must be a positive integer");
        }
      }
      std::optional<SelectionStrategy> strategy;
      if (auto v = QueryValue(query, "strategy")) {
        strategy = ParseSelectionStrategy(*v);
      }
      return raw(BatchViewJson(NextBatch(id, k, strategy)));
    }
    if (action == "labels") {
      require("POST");
      Json j = parse_body();
      const Json &items = j.is_array() ? j : j.value("labels", Json::array());
      std::vector<LabelSubmission> labels;
      try {
        for (const Json &s : items) {
          LabelSubmission sub;
          sub.document_id = s.at("document_id").get<std::string>();
          sub.level = s.at("level").get<int>();
          sub.annotator = s.value("annotator", std::string("annotator"));
          sub.timestamp = s.value("timestamp", std::string());
          labels.push_back(std::move(sub));
        }
      } catch (const Json::exception &e) {
        throw Error("invalid_submission",
                    std::string("malformed label submission: ") + e.what());
      }
      LabelAck ack = SubmitLabels(id, labels);
      return ok({{"moved", ack.moved},
                 {"overwritten", ack.overwritten},
                 {"second_opinions", ack.second_opinions},
                 {"batch_remaining", ack.batch_remaining}});
    }
    if (action == "retrain") {
      require("POST");
      HistoryRow row = Retrain(id);
      Json j = HistoryJson(row);
      j["history_length"] = row.step;
      return ok(j);
    }
    if (action == "status") {
      require("GET");
      return raw(SessionStatusJson(Status(id)));
    }
    if (action == "agreement") {
      require("GET");
      return raw(AgreementReportJson(Agreement(id)));
    }
    throw Error("not_found", "no route for " + path);
  } catch (const Error &e) {
    return ok(ErrorBody(e.code(), e.what()), HttpStatusForCode(e.code()));
  } catch (const Json::exception &e) {
    return ok(ErrorBody("bad_request", e.what()), 400);
  } catch (const std::exception &e) {
    return ok(ErrorBody("internal", e.what()), 500);
  }
}

}  // namespace readlevel
