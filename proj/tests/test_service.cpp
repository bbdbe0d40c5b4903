#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "boolrules/service.hpp"
#include "support/fixtures.hpp"

using namespace boolrules;
using service::Api;
using json = nlohmann::json;

namespace {

service::SessionConfig planted_config(bool with_exception = true) {
  PatternTable p = fixtures::planted_patterns(with_exception);
  return {p, MonomialOrder::standard(p.vars()), fixtures::planted_records(with_exception),
          fixtures::planted_thresholds()};
}

json decision(const char *kind, std::vector<std::string> ids, std::uint64_t seq) {
  return {{"kind", kind}, {"ids", ids}, {"sequence", seq}};
}

// Plays the default policy through the API.
void drive_policy(Api &api) {
  PolicyProvider policy({}, {});
  for (int guard = 0; guard < 100; ++guard) {
    json st = api.state().body;
    std::uint64_t seq = st["sequence"];
    if (st["phase"] == "terminated")
      return;
    std::vector<std::string> ids;
    if (st["phase"] == "insight") {
      for (const json &c : api.candidates("insights").body["candidates"]) {
        bool relevant = false;
        for (const json &r : c["rules"])
          relevant |= r["support"].get<std::size_t>() >= 20;
        if (relevant)
          ids.push_back(c["id"]);
      }
      REQUIRE(api.decide(decision("insight", ids, seq)).status == 200);
    } else {
      for (const json &c : api.candidates("exceptions").body["candidates"])
        if (c["monomials"].get<std::size_t>() <= 2 && c["multiplicity"].get<std::size_t>() <= 2)
          ids.push_back(c["id"]);
      REQUIRE(api.decide(decision("exception", ids, seq)).status == 200);
    }
  }
  FAIL("session did not terminate");
}

} // namespace

TEST_CASE("no session means 404 everywhere") {
  Api api;
  CHECK_FALSE(api.has_session());
  CHECK(api.state().status == 404);
  CHECK(api.candidates("insights").status == 404);
  CHECK(api.decide(decision("insight", {}, 0)).status == 404);
  CHECK(api.report().status == 404);
  CHECK(api.trace().status == 404);
  CHECK(api.pattern("0000").status == 404);
}

TEST_CASE("phases, sequence numbers and validation") {
  Api api(planted_config());
  json st = api.state().body;
  CHECK(st["schema"] == service::kStateSchema);
  CHECK(st["cycle"] == 1);
  CHECK(st["phase"] == "insight");
  CHECK(st["sequence"] == 0);
  CHECK(st["patterns"]["total"] == 17);
  CHECK(st["generators"]["J"] == 0);

  auto ins = api.candidates("insights");
  CHECK(ins.status == 200);
  CHECK(ins.body["candidates"][0]["id"] == "i1");
  CHECK(api.candidates("exceptions").status == 409);
  CHECK(api.candidates("bogus").status == 400);
  CHECK(api.report().status == 409);

  CHECK(api.decide(decision("insight", {"i999"}, 0)).status == 400);
  CHECK(api.decide(decision("exception", {}, 0)).status == 409);
  CHECK(api.decide(json{{"kind", "insight"}}).status == 400);
  CHECK(api.state().body["sequence"] == 0);

  auto ok = api.decide(decision("insight", {"i1"}, 0));
  CHECK(ok.status == 200);
  CHECK(ok.body["sequence"] == 1);
  CHECK(ok.body["generators"]["J"] == 1);
  // Double submit with the old sequence is rejected and changes nothing.
  CHECK(api.decide(decision("insight", {"i1"}, 0)).status == 409);
  CHECK(api.state().body == ok.body);

  auto flip = api.decide(decision("insight", {}, 1));
  CHECK(flip.body["phase"] == "exception");
  auto exc = api.candidates("exceptions").body["candidates"];
  REQUIRE_FALSE(exc.empty());
  CHECK(api.decide(decision("exception", {"99999"}, 2)).status == 400);
}

TEST_CASE("accepting an exception starts the next cycle") {
  Api api(planted_config());
  api.decide(decision("insight", {}, 0));
  auto exc = api.candidates("exceptions").body["candidates"];
  std::string key;
  for (const json &c : exc)
    if (c["record_ids"] == json::array({"x999"}))
      key = c["id"];
  REQUIRE_FALSE(key.empty());
  auto st = api.decide(decision("exception", {key}, 1));
  CHECK(st.status == 200);
  CHECK(st.body["cycle"] == 2);
  CHECK(st.body["records"]["excised"] == json::array({"x999"}));

  json drill = api.pattern(key).body;
  CHECK(drill["multiplicity"] == 1);
  CHECK(drill["active_multiplicity"] == 0);
  CHECK(drill["records"][0]["excised"] == true);
  CHECK(drill["records"][0]["values"]["Alpha"] == 15.0);
  CHECK(api.pattern("00001").status == 404); // all low yet positive: never observed
  CHECK(api.pattern("0101").status == 400);
}

TEST_CASE("terminated session reports what a replay of its trace reports") {
  Api api(planted_config());
  drive_policy(api);
  CHECK(api.state().body["phase"] == "terminated");
  auto rep = api.report();
  REQUIRE(rep.status == 200);

  auto cfg = planted_config();
  const VariableTable &v = cfg.patterns.vars();
  DecisionTrace trace = docs::trace_from_json(api.trace().body, v);
  SessionState done = replay(start_session(cfg.patterns, cfg.order), trace);
  Report direct = final_report(done, {service::kRecordedDecisions, cfg.thresholds});
  CHECK(docs::dump(docs::report_to_json(direct)) == docs::dump(rep.body));
}

TEST_CASE("mid-session trace is a replayable prefix") {
  Api api(planted_config());
  api.decide(decision("insight", {"i1", "i2"}, 0));
  auto cfg = planted_config();
  DecisionTrace prefix = docs::trace_from_json(api.trace().body, cfg.patterns.vars());
  SessionState s = start_session(cfg.patterns, cfg.order);
  s = decide_insights(s, prefix.cycles[0].insight_rounds[0]);
  CHECK(s.insight_ideal.generators().size() == 2);
}

TEST_CASE("concurrent submissions with one sequence number: exactly one wins") {
  Api api(planted_config());
  std::atomic<int> ok{0}, conflict{0};
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i)
    ts.emplace_back([&] {
      int status = api.decide(decision("insight", {"i1"}, 0)).status;
      (status == 200 ? ok : conflict)++;
    });
  for (auto &t : ts)
    t.join();
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(api.state().body["sequence"] == 1);
}

TEST_CASE("endpoints over HTTP") {
  Api api(planted_config());
  httplib::Server server;
  api.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto st = client.Get("/state");
  REQUIRE(st);
  CHECK(st->status == 200);
  CHECK(json::parse(st->body)["phase"] == "insight");
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  auto bad = client.Post("/decisions", "not json", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto post = client.Post("/decisions", decision("insight", {}, 0).dump(), "application/json");
  REQUIRE(post);
  CHECK(post->status == 200);
  CHECK(json::parse(post->body)["phase"] == "exception");
  auto conflict = client.Get("/candidates/insights");
  REQUIRE(conflict);
  CHECK(conflict->status == 409);
  auto trace = client.Get("/trace");
  REQUIRE(trace);
  CHECK(json::parse(trace->body)["schema"] == docs::kTraceSchema);
  auto missing = client.Get("/patterns/11111111");
  REQUIRE(missing);
  CHECK(missing->status == 400);

  server.stop();
  t.join();
}
