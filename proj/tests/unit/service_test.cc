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

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "readlevel/error.h"
#include "support/synthetic_corpus.h"

namespace readlevel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "none";
}

ServiceConfig Config(const std::string &data_dir = "") {
  ServiceConfig cfg;
  cfg.data_dir = data_dir;
  cfg.resources = ResourceSet::LoadDirectory(READLEVEL_RESOURCES_DIR);
  return cfg;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("readlevel_service_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

CreateSessionRequest Request(int per_level, int pool, uint64_t seed,
                             int folds = 3) {
  CreateSessionRequest req;
  req.records = testing::MakeSyntheticCorpus(per_level, pool, seed).records;
  req.settings.k = 5;
  req.settings.folds = folds;
  req.settings.seed = seed;
  return req;
}

std::map<std::string, int> Hidden(int per_level, int pool, uint64_t seed) {
  return testing::MakeSyntheticCorpus(per_level, pool, seed).hidden;
}

std::vector<LabelSubmission> Answer(const BatchView &batch,
                                    const std::map<std::string, int> &hidden,
                                    const std::string &annotator = "ana") {
  std::vector<LabelSubmission> out;
  for (const BatchItem &item : batch.items) {
    out.push_back({item.id, hidden.at(item.id), annotator, ""});
  }
  return out;
}

TEST(SessionTest, CreateAssignsIdsAndSplitsDocuments) {
  AnnotationService service(Config());
  std::string id = service.CreateSession(Request(3, 20, 1));
  EXPECT_EQ(id, "session-1");
  SessionStatus st = service.Status(id);
  EXPECT_EQ(st.labeled_size, 15u);
  EXPECT_EQ(st.pool_size, 20u);
  EXPECT_EQ(st.label_counts.at(4), 3u);
  EXPECT_FALSE(st.model_trained);

  CreateSessionRequest named = Request(3, 5, 2);
  named.session_id = "class_7-b";
  EXPECT_EQ(service.CreateSession(named), "class_7-b");
  EXPECT_EQ(CodeOf([&] { service.CreateSession(named); }), "session_exists");
  named.session_id = "bad id!";
  EXPECT_EQ(CodeOf([&] { service.CreateSession(named); }), "bad_request");
  EXPECT_EQ(service.SessionIds(),
            (std::vector<std::string>{"class_7-b", "session-1"}));
  EXPECT_EQ(CodeOf([&] { service.Status("nope"); }), "unknown_session");
  EXPECT_EQ(CodeOf([&] { service.CreateSession({}); }), "empty_corpus");
}

TEST(SessionTest, ColdStartBatchIsSeededAndReserved) {
  AnnotationService a(Config());
  AnnotationService b(Config());
  std::string ida = a.CreateSession(Request(3, 20, 4));
  std::string idb = b.CreateSession(Request(3, 20, 4));
  BatchView first = a.NextBatch(ida);
  EXPECT_TRUE(first.cold_start);
  ASSERT_EQ(first.items.size(), 5u);
  for (const BatchItem &item : first.items) {
    EXPECT_FALSE(item.score.has_value());
    EXPECT_FALSE(item.text.empty());
  }
  std::vector<std::string> ids_a, ids_b;
  for (const auto &i : first.items) ids_a.push_back(i.id);
  for (const auto &i : b.NextBatch(idb).items) ids_b.push_back(i.id);
  EXPECT_EQ(ids_a, ids_b);
  // The batch in flight is served again, whatever k asks for.
  BatchView again = a.NextBatch(ida, 2);
  ASSERT_EQ(again.items.size(), 5u);
  EXPECT_EQ(again.items[0].id, first.items[0].id);
}

TEST(SessionTest, LabelsMoveDocumentsAndAreValidated) {
  AnnotationService service(Config());
  std::string id = service.CreateSession(Request(3, 20, 5));
  auto hidden = Hidden(3, 20, 5);
  BatchView batch = service.NextBatch(id);
  std::vector<LabelSubmission> answers = Answer(batch, hidden);

  EXPECT_EQ(CodeOf([&] { service.SubmitLabels(id, {}); }), "invalid_submission");
  EXPECT_EQ(CodeOf([&] {
              service.SubmitLabels(id, {{answers[0].document_id, 6, "ana", ""}});
            }),
            "invalid_level");
  std::string outside;
  for (const auto &[doc, level] : hidden) {
    bool in_batch = false;
    for (const auto &item : batch.items) in_batch |= item.id == doc;
    if (!in_batch) outside = doc;
  }
  EXPECT_EQ(CodeOf([&] { service.SubmitLabels(id, {{outside, 2, "ana", ""}}); }),
            "not_in_flight");
  // A rejected submission changes nothing.
  EXPECT_EQ(service.Status(id).labeled_size, 15u);

  LabelAck ack = service.SubmitLabels(id, {answers[0], answers[1]});
  EXPECT_EQ(ack.moved, 2u);
  EXPECT_EQ(ack.batch_remaining, 3u);
  EXPECT_EQ(service.NextBatch(id).items.size(), 3u);
  ack = service.SubmitLabels(
      id, std::vector<LabelSubmission>(answers.begin() + 2, answers.end()));
  EXPECT_EQ(ack.batch_remaining, 0u);
  SessionStatus st = service.Status(id);
  EXPECT_EQ(st.labeled_size, 20u);
  EXPECT_EQ(st.pool_size, 15u);
  EXPECT_TRUE(st.batch_in_flight.empty());

  auto doc = json::parse(service.DocumentJson(id, answers[0].document_id));
  EXPECT_EQ(doc["state"], "labeled");
  EXPECT_EQ(doc["annotator"], "ana");
  EXPECT_EQ(CodeOf([&] { service.DocumentJson(id, "missing"); }),
            "unknown_document");
}

TEST(SessionTest, OverwritesSecondOpinionsAndAgreement) {
  AnnotationService service(Config());
  std::string id = service.CreateSession(Request(3, 10, 6));
  auto hidden = Hidden(3, 10, 6);
  EXPECT_EQ(CodeOf([&] { service.Agreement(id); }), "no_pairs");
  BatchView batch = service.NextBatch(id);
  service.SubmitLabels(id, Answer(batch, hidden, "ana"));

  const std::string doc = batch.items[0].id;
  LabelAck ack = service.SubmitLabels(id, {{doc, 1, "ana", "t1"}});
  EXPECT_EQ(ack.overwritten, 1u);
  ack = service.SubmitLabels(id, {{doc, 1, "bia", "t2"}});
  EXPECT_EQ(ack.second_opinions, 1u);
  ack = service.SubmitLabels(id, {{"doc-0000", 1, "bia", "t3"}});
  EXPECT_EQ(ack.second_opinions, 1u);

  SessionSnapshot snap = service.Snapshot(id);
  ASSERT_EQ(snap.audit.size(), 8u);
  EXPECT_EQ(snap.audit[5].action, "overwrite");
  EXPECT_EQ(snap.audit[6].action, "second_opinion");
  EXPECT_EQ(service.Status(id).double_labeled, 2u);

  AgreementReport k = service.Agreement(id);
  EXPECT_EQ(k.count, 2u);
  // doc-0000 is a level-1 corpus document; both pairs agree.
  EXPECT_DOUBLE_EQ(k.observed_agreement, 1.0);
}

TEST(SessionTest, RetrainGatesAndHistory) {
  AnnotationService service(Config());
  CreateSessionRequest small = Request(2, 10, 7);
  EXPECT_EQ(CodeOf([&] {
              service.Retrain(service.CreateSession(small));
            }),
            "untrainable");

  std::string id = service.CreateSession(Request(4, 30, 8));
  auto hidden = Hidden(4, 30, 8);
  HistoryRow first = service.Retrain(id);
  EXPECT_EQ(first.step, 1);
  EXPECT_EQ(first.dataset_size, 20u);
  EXPECT_TRUE(service.Status(id).model_trained);

  BatchView batch = service.NextBatch(id);
  EXPECT_FALSE(batch.cold_start);
  for (size_t i = 1; i < batch.items.size(); ++i) {
    EXPECT_LE(*batch.items[i - 1].score, *batch.items[i].score);
  }
  service.SubmitLabels(id, Answer(batch, hidden));
  HistoryRow second = service.Retrain(id);
  EXPECT_EQ(second.step, 2);
  EXPECT_EQ(second.dataset_size, 25u);
  EXPECT_EQ(service.Status(id).history.size(), 2u);
}

TEST(SessionTest, PoolExhaustion) {
  AnnotationService service(Config());
  std::string id = service.CreateSession(Request(3, 7, 9));
  auto hidden = Hidden(3, 7, 9);
  service.SubmitLabels(id, Answer(service.NextBatch(id), hidden));
  BatchView rest = service.NextBatch(id, 100);
  EXPECT_EQ(rest.items.size(), 2u);
  service.SubmitLabels(id, Answer(rest, hidden));
  EXPECT_EQ(CodeOf([&] { service.NextBatch(id); }), "pool_exhausted");
}

TEST(SessionTest, MatrixSessions) {
  ServiceConfig cfg = Config();
  std::vector<CorpusRecord> records =
      testing::MakeSyntheticCorpus(3, 6, 10).records;
  Dataset ds = ExtractDataset(records, cfg.resources).dataset;
  AnnotationService service(cfg);
  CreateSessionRequest req;
  req.matrix_csv = FormatFeatureMatrix(ds);
  req.settings.folds = 3;
  std::string id = service.CreateSession(req);
  SessionStatus st = service.Status(id);
  EXPECT_EQ(st.labeled_size, 15u);
  EXPECT_EQ(st.pool_size, 6u);
  req.records = records;
  EXPECT_EQ(CodeOf([&] { service.CreateSession(req); }), "bad_request");
}

void ExpectSameState(const SessionSnapshot &a, const SessionSnapshot &b) {
  ASSERT_EQ(a.labeled.size(), b.labeled.size());
  for (size_t i = 0; i < a.labeled.size(); ++i) {
    EXPECT_EQ(a.labeled[i].id, b.labeled[i].id);
    EXPECT_EQ(a.labeled[i].level, b.labeled[i].level);
    EXPECT_EQ(a.labeled[i].features, b.labeled[i].features);
  }
  ASSERT_EQ(a.pool.size(), b.pool.size());
  for (size_t i = 0; i < a.pool.size(); ++i) {
    EXPECT_EQ(a.pool[i].id, b.pool[i].id);
  }
  EXPECT_EQ(a.dropped_ids, b.dropped_ids);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.audit, b.audit);
  EXPECT_EQ(a.batch_in_flight, b.batch_in_flight);
  EXPECT_EQ(a.second, b.second);
}

TEST(PersistenceTest, ReplayRestoresEverySession) {
  TempDir dir;
  auto hidden = Hidden(4, 30, 11);
  SessionSnapshot before;
  {
    AnnotationService service(Config(dir.path()));
    std::string id = service.CreateSession(Request(4, 30, 11));
    for (int round = 0; round < 3; ++round) {
      service.SubmitLabels(id, Answer(service.NextBatch(id), hidden));
      service.Retrain(id);
    }
    service.SubmitLabels(id, {{"doc-0001", 2, "bia", "t"}});
    service.NextBatch(id);
    EXPECT_TRUE(fs::exists(fs::path(dir.path()) / "sessions" / id /
                           "snapshot-3.csv"));
    before = service.Snapshot(id);
  }
  AnnotationService restored(Config(dir.path()));
  ASSERT_EQ(restored.SessionIds(), std::vector<std::string>{"session-1"});
  ExpectSameState(before, restored.Snapshot("session-1"));
}

TEST(PersistenceTest, TornFinalLineIsDroppedAndLogStaysAppendable) {
  TempDir dir;
  auto hidden = Hidden(3, 20, 12);
  SessionSnapshot before;
  std::string log;
  {
    AnnotationService service(Config(dir.path()));
    std::string id = service.CreateSession(Request(3, 20, 12));
    service.SubmitLabels(id, Answer(service.NextBatch(id), hidden));
    before = service.Snapshot(id);
    log = (fs::path(dir.path()) / "sessions" / id / "events.jsonl").string();
  }
  std::ofstream(log, std::ios::app) << R"({"type":"labels","labels":[{"docu)";
  {
    AnnotationService restored(Config(dir.path()));
    ExpectSameState(before, restored.Snapshot("session-1"));
    BatchView next = restored.NextBatch("session-1");
    restored.SubmitLabels("session-1", Answer(next, hidden));
    before = restored.Snapshot("session-1");
  }
  AnnotationService again(Config(dir.path()));
  ExpectSameState(before, again.Snapshot("session-1"));
}

TEST(ConcurrencyTest, ReadersRunBesideAWriter) {
  AnnotationService service(Config());
  std::string id = service.CreateSession(Request(4, 60, 13));
  auto hidden = Hidden(4, 60, 13);
  std::atomic<bool> done{false};
  std::atomic<int> reads{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 3; ++t) {
    readers.emplace_back([&] {
      while (!done) {
        SessionStatus st = service.Status(id);
        EXPECT_EQ(st.labeled_size + st.pool_size + st.dropped, 80u);
        ++reads;
      }
    });
  }
  for (int round = 0; round < 4; ++round) {
    service.SubmitLabels(id, Answer(service.NextBatch(id), hidden));
    service.Retrain(id);
  }
  done = true;
  for (auto &t : readers) t.join();
  EXPECT_GT(reads.load(), 0);
  EXPECT_EQ(service.Status(id).history.size(), 4u);
}

TEST(HandleTest, StatusCodesFollowErrorCodes) {
  EXPECT_EQ(HttpStatusForCode("unknown_session"), 404);
  EXPECT_EQ(HttpStatusForCode("session_exists"), 409);
  EXPECT_EQ(HttpStatusForCode("invalid_level"), 422);
  EXPECT_EQ(HttpStatusForCode("method_not_allowed"), 405);
  EXPECT_EQ(HttpStatusForCode("anything_else"), 400);

  AnnotationService service(Config());
  std::multimap<std::string, std::string> none;
  auto error_code = [](const ApiResponse &r) {
    return json::parse(r.body)["error"]["code"].get<std::string>();
  };
  ApiResponse r = service.Handle("GET", "/api/v1/sessions/x/status", none, "");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(error_code(r), "unknown_session");
  r = service.Handle("POST", "/api/v1/sessions", none, "{oops");
  EXPECT_EQ(r.status, 400);
  r = service.Handle("DELETE", "/api/v1/sessions", none, "");
  EXPECT_EQ(r.status, 405);
  r = service.Handle("GET", "/api/v1/elsewhere", none, "");
  EXPECT_EQ(r.status, 404);
  r = service.Handle("POST", "/api/v1/sessions", none, R"({"k":0,"records":[]})");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_code(r), "invalid_settings");
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<AnnotationService>(Config());
    server_ = std::make_unique<HttpServer>(*service_);
    port_ = server_->BindToAnyPort("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->ListenAfterBind(); });
    server_->WaitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->Stop();
    if (thread_.joinable()) thread_.join();
  }

  std::unique_ptr<AnnotationService> service_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpTest, LabelingRoundOverHttp) {
  testing::SyntheticCorpus corpus = testing::MakeSyntheticCorpus(3, 12, 14);
  json create = {{"session_id", "web"}, {"k", 4}, {"folds", 3}, {"seed", 14}};
  create["records"] = json::array();
  for (const auto &r : corpus.records) {
    create["records"].push_back(json::parse(SerializeCorpusRecord(r)));
  }
  auto res = client_->Post("/api/v1/sessions", create.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  EXPECT_EQ(json::parse(res->body)["pool_size"], 12);
  res = client_->Post("/api/v1/sessions", create.dump(), "application/json");
  EXPECT_EQ(res->status, 409);

  res = client_->Get("/api/v1/sessions/web/batch?k=4");
  ASSERT_EQ(res->status, 200);
  json batch = json::parse(res->body);
  ASSERT_EQ(batch["documents"].size(), 4u);
  EXPECT_TRUE(batch["cold_start"].get<bool>());

  json labels = {{"labels", json::array()}};
  for (const auto &d : batch["documents"]) {
    std::string doc = d["id"];
    labels["labels"].push_back(
        {{"document_id", doc}, {"level", corpus.hidden.at(doc)}, {"annotator", "ana"}});
  }
  json bad = {{"labels", {{{"document_id", "doc-0000"}, {"level", 9}}}}};
  res = client_->Post("/api/v1/sessions/web/labels", bad.dump(), "application/json");
  EXPECT_EQ(res->status, 422);
  res = client_->Post("/api/v1/sessions/web/labels", labels.dump(), "application/json");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["moved"], 4);

  res = client_->Post("/api/v1/sessions/web/retrain", "", "application/json");
  ASSERT_EQ(res->status, 200);
  json row = json::parse(res->body);
  EXPECT_EQ(row["history_length"], 1);
  EXPECT_EQ(row["dataset_size"], 19);

  res = client_->Get("/api/v1/sessions/web/status");
  json status = json::parse(res->body);
  EXPECT_EQ(status["history"].size(), 1u);
  EXPECT_EQ(status["labeled_size"].get<int>() + status["pool_size"].get<int>(),
            27);
  EXPECT_DOUBLE_EQ(status["history"][0]["mean_accuracy"].get<double>(),
                   row["mean_accuracy"].get<double>());

  res = client_->Get("/api/v1/sessions/web/batch?k=zero");
  EXPECT_EQ(res->status, 400);
  res = client_->Get("/api/v1/sessions/missing/batch");
  EXPECT_EQ(res->status, 404);
  res = client_->Get("/api/v1/sessions");
  EXPECT_EQ(json::parse(res->body)["sessions"], json::array({"web"}));
}

}  // namespace
}  // namespace readlevel
