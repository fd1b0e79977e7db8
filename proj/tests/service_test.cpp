#include <gtest/gtest.h>

#include <httplib.h>

#include <cmath>
#include <thread>

#include "signgram/error.hpp"
#include "signgram/service.hpp"
#include "test_support.hpp"

using namespace signgram;
using nlohmann::json;

namespace {

NgramModel coupled_model() {
  std::vector<std::vector<std::uint32_t>> texts;
  for (int i = 0; i < 30; ++i) texts.push_back({1, 2, 5});
  for (int i = 0; i < 20; ++i) texts.push_back({3, 4, 5});
  for (int i = 0; i < 10; ++i) texts.push_back({1, 4});
  Corpus c = make_corpus(6, texts, "coupled");
  return NgramModel::train(c, ModelConfig{});
}

void expect_sorted_probabilities(const json& list) {
  double sum = 0.0;
  double prev = 2.0;
  for (const auto& item : list) {
    const double p = item["probability"].get<double>();
    EXPECT_LE(p, prev);
    prev = p;
    sum += p;
  }
  EXPECT_LE(sum, 1.0 + 1e-6);
}

}  // namespace

TEST(Service, Meta) {
  RestorationService svc(coupled_model());
  const auto r = svc.meta();
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["vocabulary_size"], 6);
  EXPECT_EQ(r.body["order"], 2);
  EXPECT_EQ(r.body["smoothing"], "witten_bell");
  EXPECT_EQ(r.body["label"], "coupled");
  EXPECT_EQ(r.body["api_version"], kApiVersion);
}

TEST(Service, RequiresSmoothedModel) {
  ModelConfig cfg;
  cfg.smoothing = Smoothing::mle;
  EXPECT_THROW(RestorationService(NgramModel::train(make_corpus(3, {{1, 2}}), cfg)), DataError);
}

TEST(Service, RestoreRanksAssignments) {
  RestorationService svc(coupled_model());
  const auto r = svc.restore(R"({"text":[1,"?",5],"top_k":3})");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["gaps"], json::array({1}));
  EXPECT_EQ(r.body["method"], "viterbi");
  ASSERT_EQ(r.body["assignments"].size(), 3u);
  EXPECT_EQ(r.body["assignments"][0]["signs"], json::array({2}));
  expect_sorted_probabilities(r.body["assignments"]);

  const auto same = svc.restore(R"({"text":[1,"?",5],"top_k":3})");
  EXPECT_EQ(same.body.dump(), r.body.dump());
  const TransitionTable table(svc.model());
  EXPECT_EQ(restore_json(svc.model(), &table, parse_text("1 ? 5", 6), 3).dump(), r.body.dump());
}

TEST(Service, ErrorsCarryCodes) {
  RestorationService svc(coupled_model());
  auto r = svc.restore("{not json");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["code"], "malformed_request");
  r = svc.restore(R"({"text":"1 ? 5"})");
  EXPECT_EQ(r.status, 400);
  r = svc.restore(R"({"text":[1,"?",99]})");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["error"]["code"], "unknown_sign");
  r = svc.restore(R"({"text":[]})");
  EXPECT_EQ(r.status, 422);
  r = svc.restore(R"({"text":[1,2]})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "no_gaps");
  r = svc.restore(R"({"text":[1,"?"],"top_k":0})");
  EXPECT_EQ(r.status, 400);
  r = svc.marginals(R"({"text":[1,"?"],"committed":{"0":2}})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "not_a_gap");
  r = svc.score(R"({"text":[1,"?"]})");
  EXPECT_EQ(r.status, 422);
  r = svc.row({{"context", "77"}});
  EXPECT_EQ(r.status, 404);
  r = svc.row({});
  EXPECT_EQ(r.status, 400);
  r = svc.generate({{"max_len", "3"}});
  EXPECT_EQ(r.status, 400);
}

TEST(Service, MarginalsAndCommitments) {
  RestorationService svc(coupled_model());
  auto r = svc.marginals(R"({"text":[1,2,5]})");
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(r.body["marginals"].empty());

  r = svc.marginals(R"({"text":["?","?",5],"coverage":0.9})");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["gaps"], json::array({0, 1}));
  expect_sorted_probabilities(r.body["marginals"]["0"]);
  expect_sorted_probabilities(r.body["marginals"]["1"]);
  EXPECT_EQ(r.body["marginals"]["1"][0]["sign"], 2);

  const auto committed = svc.marginals(R"({"text":["?","?",5],"committed":{"0":3}})");
  ASSERT_EQ(committed.status, 200);
  EXPECT_EQ(committed.body["gaps"], json::array({1}));
  EXPECT_EQ(committed.body["marginals"]["1"][0]["sign"], 4);

  // Coverage set equals the evaluation criterion set.
  const auto table = TransitionTable(svc.model());
  const auto post = gap_marginals(table, parse_text("? ? 5", 6));
  json expected = json::array();
  for (Sign s : coverage_set(post[1], 0.9)) expected.push_back(s.id);
  EXPECT_EQ(r.body["coverage_sets"]["1"], expected);
}

TEST(Service, RowScoreGenerate) {
  RestorationService svc(coupled_model());
  auto r = svc.row({{"context", "1"}, {"top_k", "2"}});
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["followers"].size(), 2u);
  EXPECT_EQ(r.body["followers"][0]["follower"], 2);
  expect_sorted_probabilities(r.body["followers"]);
  r = svc.row({{"context", "<s>"}});
  EXPECT_EQ(r.body["followers"].size(), 7u);
  r = svc.row({{"context", "6"}});  // unseen sign: smoothed row, not an error
  EXPECT_EQ(r.status, 200);

  r = svc.score(R"({"text":[1,2,5]})");
  ASSERT_EQ(r.status, 200);
  const double lp = r.body["log_prob"].get<double>();
  EXPECT_LT(lp, 0.0);
  EXPECT_TRUE(std::isfinite(lp));
  EXPECT_EQ(lp, sequence_log_prob(svc.model(), parse_text("1 2 5", 6)));

  r = svc.generate({{"seed", "11"}, {"max_len", "5"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_LE(r.body["text"].size(), 5u);
  EXPECT_EQ(svc.generate({{"seed", "11"}, {"max_len", "5"}}).body, r.body);
}

TEST(Service, SessionsCommitAndUndo) {
  RestorationService svc(coupled_model());
  const auto created = svc.create_session(R"({"text":["?","?",5]})");
  ASSERT_EQ(created.status, 200);
  const std::string id = created.body["session"];
  EXPECT_EQ(created.body["marginals"]["1"][0]["sign"], 2);

  const auto committed = svc.commit(id, R"({"position":0,"sign":3})");
  ASSERT_EQ(committed.status, 200) << committed.body.dump();
  EXPECT_EQ(committed.body["marginals"]["1"][0]["sign"], 4);
  EXPECT_EQ(committed.body["committed"]["0"], 3);

  EXPECT_EQ(svc.commit(id, R"({"position":2,"sign":1})").status, 422);
  EXPECT_EQ(svc.commit(id, R"({"position":0,"sign":1})").status, 422);
  EXPECT_EQ(svc.commit("nope", R"({"position":0,"sign":1})").status, 404);

  const auto undone = svc.undo(id);
  ASSERT_EQ(undone.status, 200);
  EXPECT_EQ(undone.body, created.body);
  EXPECT_EQ(svc.undo(id).status, 422);

  const auto full = svc.commit(id, R"({"position":1,"sign":2})");
  ASSERT_EQ(full.status, 200);
  const auto done = svc.commit(id, R"({"position":0,"sign":1})");
  ASSERT_EQ(done.status, 200);
  EXPECT_TRUE(done.body["marginals"].empty());
  EXPECT_EQ(done.body["best"]["text"], json::array({1, 2, 5}));

  // Sessions are isolated.
  const auto other = svc.create_session(R"({"text":["?",4]})");
  EXPECT_NE(other.body["session"], id);
  EXPECT_EQ(svc.get_session(id).body, done.body);
  EXPECT_EQ(svc.delete_session(id).status, 200);
  EXPECT_EQ(svc.get_session(id).status, 404);
}

TEST(Service, LiveHttpRoundTrip) {
  RestorationService svc(coupled_model());
  httplib::Server server;
  svc.install_routes(server, {"http://localhost:5173", std::nullopt});
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const std::string body = R"({"text":[1,"?",5],"top_k":4})";
  auto res = client.Post("/api/restore", body, "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, svc.restore(body).body.dump());
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");

  res = client.Get("/api/meta");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["order"], 2);

  res = client.Get("/api/row?context=1&top_k=1");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["followers"].size(), 1u);

  res = client.Post("/api/score", R"({"text":[1,99]})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  res = client.Post("/api/session", R"({"text":["?",4]})", "application/json");
  ASSERT_TRUE(res);
  const std::string id = json::parse(res->body)["session"];
  res = client.Post("/api/session/" + id + "/commit", R"({"position":0,"sign":1})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Post("/api/session/" + id + "/undo", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Delete("/api/session/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  res = client.Options("/api/restore");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);

  server.stop();
  worker.join();
}
