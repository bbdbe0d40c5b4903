#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "support/fixtures.hpp"

using json = nlohmann::json;
using fixtures::slurp;
using fixtures::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout and stderr together.
Run cli(const std::string &args, const std::string &env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + BOOLRULES_CLI + std::string(" ") + args + " 2>&1";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
    out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Binds a listening loopback socket on an ephemeral port; returns the fd and port.
std::pair<int, int> listen_loopback() {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  REQUIRE(bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof addr) == 0);
  REQUIRE(listen(fd, 4) == 0);
  socklen_t len = sizeof addr;
  getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
  return {fd, ntohs(addr.sin_port)};
}

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("binarize writes patterns, thresholds and a summary") {
  TempDir d("bin");
  std::string csv = d.file("r.csv", "id,Apple,Berry,Cherry,label\nr1,5,1,9,1\nr2,4,2,8,1\nr3,3,6,7,0\n"
                                    "r4,2,5,1,0\nr5,1,4,2,0\nr6,0,3,3,0\n");
  Run r = cli("binarize --records " + csv + " --out " + (d / "out"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "6 records, 2 positive, 3 patterns, 2^13 empty criteria"));
  json p = json::parse(slurp(d / "out/patterns.json"));
  CHECK(p["schema"] == "boolrules.patterns/1");
  REQUIRE(p["patterns"].size() == 3);
  CHECK(p["patterns"][2]["bits"] == "1011");
  CHECK(p["patterns"][2]["record_ids"] == json::array({"r1", "r2"}));
  json t = json::parse(slurp(d / "out/thresholds.json"));
  CHECK(t["cuts"]["Cherry"] == 7.0);

  Run s = cli("binarize --patterns " + (d / "out/patterns.json"));
  CHECK(s.code == 0);
  CHECK(contains(s.out, "2^13 empty criteria"));
}

TEST_CASE("input errors exit with code 3") {
  TempDir d("err");
  std::string dup = d.file("dup.csv", "id,A,c\nr1,1,1\nr1,2,0\n");
  Run r = cli("binarize --records " + dup + " --out " + d.path.string());
  CHECK(r.code == 3);
  CHECK(contains(r.out, "row 3"));
  CHECK(contains(r.out, "duplicate"));
  CHECK(cli("binarize --records /nonexistent.csv").code == 3);
  CHECK(cli("frobnicate").code == 3);
  std::string wrong = d.file("wrong.json", R"({"schema": "boolrules.patterns/9"})");
  Run w = cli("analyze --patterns " + wrong + " --out " + d.path.string());
  CHECK(w.code == 3);
  CHECK(contains(w.out, "schema"));
}

TEST_CASE("analyze recovers the planted rule and verifies it") {
  TempDir d("plant");
  std::string csv = d.file("p.csv", fixtures::planted_csv());
  std::string thr = d.file("t.json", fixtures::planted_thresholds_json());
  Run r = cli("analyze --records " + csv + " --thresholds " + thr + " --out " + (d / "out"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "pos 50(50) A (B + 1)"));
  CHECK(contains(r.out, "0 mismatches"));
  json rep = json::parse(slurp(d / "out/report.json"));
  CHECK(rep["schema"] == "boolrules.report/1");
  CHECK(contains(slurp(d / "out/report.md"), "| pos | 50(50) | A (B + 1) |"));

  Run again = cli("report --report " + (d / "out/report.json"));
  CHECK(again.code == 0);
  CHECK(again.out == slurp(d / "out/report.md"));

  Run v = cli("verify --report " + (d / "out/report.json") + " --records " + csv);
  CHECK(v.code == 0);
  rep["rules"][0]["support"] = rep["rules"][0]["support"].get<int>() + 1;
  std::string tampered = d.file("bad.json", rep.dump());
  Run bad = cli("verify --report " + tampered + " --records " + csv);
  CHECK(bad.code == 2);
  CHECK(contains(bad.out, "recomputed"));
}

TEST_CASE("trace replay is byte-identical across runs") {
  TempDir d("det");
  std::string csv = d.file("p.csv", fixtures::planted_csv(true));
  std::string thr = d.file("t.json", fixtures::planted_thresholds_json());
  REQUIRE(cli("binarize --records " + csv + " --thresholds " + thr + " --out " + (d / "b")).code == 0);
  REQUIRE(cli("analyze --patterns " + (d / "b/patterns.json") + " --out " + (d / "policy")).code == 0);
  std::string trace = d / "policy/trace.json";
  REQUIRE(cli("analyze --patterns " + (d / "b/patterns.json") + " --trace " + trace + " --out " + (d / "r1")).code == 0);
  REQUIRE(cli("analyze --patterns " + (d / "b/patterns.json") + " --trace " + trace + " --out " + (d / "r2")).code == 0);
  CHECK(slurp(d / "r1/report.json") == slurp(d / "r2/report.json"));
  CHECK(slurp(d / "r1/trace.json") == slurp(trace));
  json a = json::parse(slurp(d / "policy/report.json")), b = json::parse(slurp(d / "r1/report.json"));
  a.erase("decision_source");
  b.erase("decision_source");
  CHECK(a == b);
}

TEST_CASE("analyze option conflicts and policies") {
  TempDir d("pol");
  std::string csv = d.file("p.csv", fixtures::planted_csv());
  std::string thr = d.file("t.json", fixtures::planted_thresholds_json());
  std::string base = "analyze --records " + csv + " --thresholds " + thr;
  CHECK(cli(base + " --trace x.json --policy min_support=3 --out " + (d / "o")).code == 3);
  CHECK(cli(base + " --policy nonsense=1 --out " + (d / "o")).code == 3);
  Run strict = cli(base + " --policy min_support=1000 --out " + (d / "o"));
  CHECK(strict.code == 0);
  CHECK(json::parse(slurp(d / "o/report.json"))["rules"].empty());

  std::string bad = d.file("trace.json", R"({"schema": "boolrules.trace/1", "cycles": [
      {"cycle": 1, "insight_rounds": [["AGD"]], "exceptions": []}]})");
  Run mism = cli(base + " --trace " + bad + " --out " + (d / "o"));
  CHECK(mism.code == 3);
  CHECK(contains(mism.out, "cycle 1"));
  CHECK(contains(mism.out, "insight"));
}

TEST_CASE("output directory defaults to the environment") {
  TempDir d("env");
  std::string csv = d.file("p.csv", fixtures::planted_csv());
  Run r = cli("binarize --records " + csv, "BOOLRULES_OUT=" + (d / "envout"));
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(d / "envout/patterns.json"));
}

TEST_CASE("serve answers on loopback and reports a busy port") {
  TempDir d("srv");
  std::string csv = d.file("p.csv", fixtures::planted_csv());
  auto [blocker, port] = listen_loopback();
  Run busy = cli("serve --records " + csv + " --port " + std::to_string(port), "timeout 20");
  CHECK(busy.code == 3);
  close(blocker);

  // Pick a free port, release it, and start the CLI server on it.
  auto [probe, free_port] = listen_loopback();
  close(probe);
  std::string pidfile = d / "pid";
  std::string cmd = std::string(BOOLRULES_CLI) + " serve --records " + csv + " --port " + std::to_string(free_port) +
                    " > " + (d / "log") + " 2>&1 & echo $! > " + pidfile;
  REQUIRE(std::system(cmd.c_str()) == 0);
  httplib::Client client("127.0.0.1", free_port);
  client.set_read_timeout(5);
  httplib::Result res;
  for (int i = 0; i < 100 && !(res = client.Get("/health")); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["cycle"] == 1);
  std::system(("kill $(cat " + pidfile + ")").c_str());
  CHECK(contains(slurp(d / "log"), "serving the API only"));
}
