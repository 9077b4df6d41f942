#include "confluent/cli.hpp"
#include "confluent/instances.hpp"
#include "confluent/io.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

using namespace confluent;
using namespace confluent::testing;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "confluent");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("confluent_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string put(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  write_file(p.string(), text);
  return p.string();
}

Json result_of(const Run& r) {
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}

}  // namespace

TEST_CASE("gen half-grid then solve quickest reports a checked claim") {
  const fs::path dir = scratch("pipeline");
  const Run g = cli({"gen", "half-grid", "--n", "3", "--m", "4", "--gadget", "yes"});
  REQUIRE(g.code == 0);
  const std::string net = put(dir, "hg.json", g.out);
  CHECK(read_network(g.out).n() == gen_half_grid(3, 4, Gadget::Yes).net.n());

  const Json doc = result_of(cli({"solve", "quickest", net, "--seed", "7"}));
  CHECK(doc["config"]["seed"] == 7);
  CHECK(doc["config"]["command"] == "solve quickest");
  CHECK(doc["config"].contains("trials"));
  CHECK(doc["config"].contains("calibration"));
  CHECK(doc["result"]["claimed_time"].get<std::int64_t>() > 0);
  CHECK(doc["certificate"]["claim_matches"] == true);
  CHECK(doc["certificate"]["confluent"] == true);
  CHECK(doc["certificate"]["complete"] == true);

  // The oracle on a smaller instance never beats the claim.
  const std::string small = put(dir, "small.json", cli({"gen", "half-grid", "--n", "2", "--m", "2"}).out);
  const Json o = result_of(cli({"oracle", "quickest", small, "--time-expanded"}));
  const Json s = result_of(cli({"solve", "quickest", small, "--seed", "1"}));
  CHECK(o["result"]["best_time"] == o["result"]["time_expanded_time"]);
  CHECK(o["result"]["best_time"].get<std::int64_t>() <= s["result"]["claimed_time"].get<std::int64_t>());
}

TEST_CASE("identical config and seed give byte-identical output") {
  const fs::path dir = scratch("determinism");
  const std::string net = put(dir, "net.json", cli({"gen", "random", "--seed", "5", "--n-max", "9"}).out);
  for (const char* problem : {"quickest", "demandmax"}) {
    const Run a = cli({"solve", problem, net, "--seed", "7"});
    const Run b = cli({"solve", problem, net, "--seed", "7", "--jobs", "3"});
    REQUIRE(a.code == b.code);
    Json ja = Json::parse(a.out), jb = Json::parse(b.out);
    CHECK(ja["config"]["jobs"] == 1);
    ja["config"].erase("jobs");
    jb["config"].erase("jobs");
    CHECK(ja.dump() == jb.dump());
    CHECK(a.out == cli({"solve", problem, net, "--seed", "7"}).out);
  }
  CHECK(cli({"gen", "rounding", "--seed", "3"}).out == cli({"gen", "rounding", "--seed", "3"}).out);
}

TEST_CASE("missing seed is generated and reported") {
  const fs::path dir = scratch("seed");
  const std::string net = put(dir, "e.json", write_network(single_edge("4", "2", 1)));
  const Run r = cli({"solve", "quickest", net});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("seed ") != std::string::npos);
  CHECK(Json::parse(r.out)["config"]["seed"].is_number_unsigned());
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  const std::string cut = put(dir, "cut.json", write_network(make_net({"s", "a", "t"}, {{"s", "a", "1", 1}}, {{"s", "1"}})));
  CHECK(cli({"solve", "quickest", cut, "--seed", "1"}).code == kExitInfeasible);
  CHECK(cli({"oracle", "quickest", cut}).code == kExitInfeasible);
  CHECK(cli({"solve", "quickest", (dir / "absent.json").string(), "--seed", "1"}).code == kExitError);
  const std::string bad = put(dir, "bad.json", "{\"nodes\": [");
  const Run parse = cli({"solve", "quickest", bad, "--seed", "1"});
  CHECK(parse.code == kExitError);
  CHECK(parse.err.find("error:") != std::string::npos);
  CHECK(cli({"solve", "sideways", cut}).code == kExitError);
  CHECK(cli({"frobnicate"}).code == kExitError);
  CHECK(cli({}).code == kExitError);
  CHECK(cli({"solve", "maxtime", cut, "--seed", "1"}).code == kExitError);
  CHECK(cli({"solve", "quickest", cut, "--seed", "1", "--base", "1"}).code == kExitError);
  CHECK(cli({"solve", "quickest", cut, "--seed", "1", "--base", "x"}).code == kExitError);
  CHECK(cli({"solve", "quickest", cut, "--seed", "1", "--budget-multiplier", "1/2"}).code == kExitError);
  CHECK(cli({"gen", "half-grid", "--n", "0"}).code == kExitError);
  CHECK(cli({"gen", "bo3dm", "--n", "2", "--triples", "0,0"}).code == kExitError);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("solve maxtime and demandmax certificates") {
  const fs::path dir = scratch("solvers");
  const std::string net = put(dir, "e.json", write_network(single_edge("100", "1", 1)));
  const Json m = result_of(cli({"solve", "maxtime", net, "--T", "10", "--seed", "2"}));
  CHECK(m["config"]["T"] == 10);
  CHECK(m["certificate"]["claim_matches"] == true);
  CHECK(Rat::parse(m["result"]["delivered"].get<std::string>()) > 0);

  const std::string pair = put(dir, "p.json", write_network(make_net({"a", "b", "h", "t"},
      {{"a", "h", "1", 1}, {"b", "h", "1", 1}, {"h", "t", "1", 1}}, {{"a", "1"}, {"b", "1"}})));
  const Json d = result_of(cli({"solve", "demandmax", pair, "--seed", "2"}));
  CHECK(d["certificate"]["feasible"] == true);
  CHECK(d["certificate"]["confluent"] == true);
  CHECK(d["result"]["value"] == d["certificate"]["value"]);
  const Json od = result_of(cli({"oracle", "demandmax", pair}));
  CHECK(od["result"]["best_value"] == "1");
}

TEST_CASE("eval accepts solve output and emits the trace CSV") {
  const fs::path dir = scratch("eval");
  const std::string net = put(dir, "e.json", write_network(single_edge("3", "2", 1)));
  const Run s = cli({"solve", "quickest", net, "--seed", "4", "--out", (dir / "res.json").string()});
  REQUIRE(s.code == 0);
  CHECK(s.out.empty());
  const Json e = result_of(cli({"eval", net, "--routing", (dir / "res.json").string(), "--T", "1"}));
  const Json claim = Json::parse(read_file((dir / "res.json").string()));
  CHECK(e["result"]["makespan"] == claim["result"]["claimed_time"]);
  CHECK(e["result"]["delivered"] == "3");
  CHECK(e["result"]["confluent"] == true);

  // A bare tree is released greedily at time 0.
  const std::string tree = put(dir, "tree.json", "[{\"node\": \"s\", \"to\": \"t\"}]");
  const Json et = result_of(cli({"eval", net, "--routing", tree, "--T", "1"}));
  CHECK(et["result"]["makespan"] == 2);
  CHECK(et["result"]["delivered_by_T"] == "2");
  const Run csv = cli({"eval", net, "--routing", tree, "--emit", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out == "t,edge,load,queue,delivered_cum\n0,s->t,2,1,0\n1,s->t,1,0,2\n");
}

TEST_CASE("gen dimacs export and corpus directories") {
  const fs::path dir = scratch("gen");
  const Run d = cli({"gen", "half-grid", "--n", "1", "--m", "2", "--emit", "dimacs"});
  REQUIRE(d.code == 0);
  CHECK(d.out.rfind("c ", 0) == 0);
  CHECK(d.out.find("p max 5 4") != std::string::npos);
  CHECK(cli({"gen", "random", "--seed", "1", "--count", "3"}).code == kExitError);
  const Run many = cli({"gen", "random", "--seed", "1", "--count", "3", "--out", (dir / "c").string()});
  REQUIRE(many.code == 0);
  CHECK(Json::parse(many.out)["files"].size() == 3);
  const Run b = cli({"bench", "--corpus", (dir / "c").string(), "--seed", "1", "--trials", "2"});
  REQUIRE(b.code == 0);
  CHECK(b.out.rfind("instance,opt_lower_bound,claimed_time,congestion,length_factor,wall_ms\n", 0) == 0);
  CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 4);
  const Run ab = cli({"gen", "alphabeta", "--alpha", "1", "--m", "10", "--no"});
  CHECK(read_network(ab.out).total_supply() == 30);
}

TEST_CASE("cutcheck") {
  const Run r = cli({"cutcheck", "--n", "5", "--seed", "3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["result"]["within_bound"] == true);
  CHECK(j["result"]["separates"] == true);
  CHECK(j["config"]["seed"] == 3);
  CHECK(cli({"cutcheck", "--n", "1", "--family", "canonical"}).code == kExitOk);
  // Canonical families on N >= 2 cross, which the cut construction rejects.
  CHECK(cli({"cutcheck", "--n", "4", "--family", "canonical"}).code == kExitError);
}

TEST_CASE("calibration file from the environment") {
  const fs::path dir = scratch("calibration");
  const std::string net = put(dir, "e.json", write_network(single_edge("4", "2", 1)));
  const std::string cal = put(dir, "cal.json", "{\"trials_c\": 3, \"budget_multiplier\": \"5/2\"}");
  ::setenv("CONFLUENT_CALIBRATION", cal.c_str(), 1);
  const Json j = result_of(cli({"solve", "quickest", net, "--seed", "1"}));
  CHECK(j["config"]["budget_multiplier"] == "5/2");
  CHECK(j["config"]["calibration"]["trials_c"] == 3);
  CHECK(j["config"]["calibration"]["source"] == cal);
  ::setenv("CONFLUENT_CALIBRATION", (dir / "nope.json").string().c_str(), 1);
  CHECK(cli({"solve", "quickest", net, "--seed", "1"}).code == kExitError);
  const std::string broken = put(dir, "broken.json", "{\"rounding_c\": -1}");
  ::setenv("CONFLUENT_CALIBRATION", broken.c_str(), 1);
  CHECK(cli({"solve", "quickest", net, "--seed", "1"}).code == kExitError);
  ::unsetenv("CONFLUENT_CALIBRATION");
  const Json k = result_of(cli({"solve", "quickest", net, "--seed", "1", "--calibration", cal}));
  CHECK(k["config"]["calibration"]["trials_c"] == 3);
}

TEST_CASE("installed binary exit codes") {
  const char* bin = std::getenv("CONFLUENT_BIN");
  if (bin == nullptr) return;
  const fs::path dir = scratch("binary");
  const std::string cut = put(dir, "cut.json", write_network(make_net({"s", "a", "t"}, {{"s", "a", "1", 1}}, {{"s", "1"}})));
  auto status = [&](const std::string& args) {
    const int raw = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("gen half-grid --n 2 --m 3") == 0);
  CHECK(status("solve quickest " + cut + " --seed 1") == 2);
  CHECK(status("solve quickest " + (dir / "absent.json").string() + " --seed 1") == 1);
}
