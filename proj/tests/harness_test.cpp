#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "osdf/bench.hpp"
#include "osdf/session.hpp"

using namespace osdf;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("bench closed forms with default costs") {
  SECTION("osdf(5) = 1100") {
    auto rows = bench_response_time(ControllerMode::Osdf, 5, 5, 3);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].response_time_us == 1100);
    CHECK(rows[0].packet_in_count == 1);
  }
  SECTION("reactive(5) = 2750") {
    auto rows = bench_response_time(ControllerMode::ReactiveBaseline, 5, 5, 3);
    CHECK(rows[0].response_time_us == 2750);
    CHECK(rows[0].packet_in_count == 5);
  }
  SECTION("osdf beats reactive for every n in [2,10]") {
    auto osdf_rows = bench_response_time(ControllerMode::Osdf, 2, 10, 1);
    auto reactive_rows = bench_response_time(ControllerMode::ReactiveBaseline, 2, 10, 1);
    for (size_t i = 0; i < osdf_rows.size(); ++i) {
      int n = osdf_rows[i].n;
      CHECK(osdf_rows[i].response_time_us == 600 + 100 * n);
      CHECK(reactive_rows[i].response_time_us == 550 * n);
      CHECK(osdf_rows[i].response_time_us < reactive_rows[i].response_time_us);
    }
  }
  SECTION("both trends are affine and strictly increasing") {
    auto rows = bench_response_time(ControllerMode::Osdf, 2, 8, 1);
    for (size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].response_time_us > rows[i - 1].response_time_us);
      CHECK(rows[i].response_time_us - rows[i - 1].response_time_us == 100);
    }
  }
  SECTION("custom cost model flows through") {
    CostConfig costs{1000, 10, 5};
    auto rows = bench_response_time(ControllerMode::Osdf, 3, 3, 1, costs);
    CHECK(rows[0].response_time_us == 1000 + 5 + 2 * 3 * 10);
  }
  SECTION("invalid ranges rejected") {
    CHECK_THROWS_AS(bench_response_time(ControllerMode::Osdf, 0, 5, 1), ValidationError);
    CHECK_THROWS_AS(bench_response_time(ControllerMode::Osdf, 5, 2, 1), ValidationError);
    CHECK_THROWS_AS(bench_response_time(ControllerMode::Osdf, 2, 5, 0), ValidationError);
  }
}

TEST_CASE("bench CSV is byte-identical across runs") {
  auto run = [] {
    auto rows = bench_response_time(ControllerMode::Osdf, 2, 10, 5);
    auto r2 = bench_response_time(ControllerMode::ReactiveBaseline, 2, 10, 5);
    rows.insert(rows.end(), r2.begin(), r2.end());
    return bench_csv(rows);
  };
  std::string a = run(), b = run();
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) == "n,mode,response_time_us,packet_in_count,trials");
  CHECK(std::count(a.begin(), a.end(), '\n') == 19);  // header + 18 rows
}

TEST_CASE("session command surface") {
  std::ostringstream out;
  Session session(out);
  SECTION("policy add on the three-region fixture") {
    REQUIRE(session.execute("topo three-region"));
    REQUIRE(session.execute("policy add \"inter web from A to B priority 100\""));
    CHECK(out.str().find("policy 1 added") != std::string::npos);
  }
  SECTION("inject then stats reports the flow setup") {
    REQUIRE(session.execute("topo three-region"));
    REQUIRE(session.execute("policy add \"inter web from A to B priority 100\""));
    REQUIRE(session.execute("inject --src hA1 --dst hB1 --app web"));
    REQUIRE(session.execute("stats"));
    std::string s = out.str();
    CHECK(s.find("DELIVERED hB1") != std::string::npos);
    CHECK(s.find("packet_ins=1") != std::string::npos);
    CHECK(s.find("rules=6") != std::string::npos);
  }
  SECTION("policy list and remove") {
    REQUIRE(session.execute("topo three-region"));
    REQUIRE(session.execute("policy add \"intra video region A,C priority 300\""));
    REQUIRE(session.execute("policy list"));
    CHECK(out.str().find("intra video region A,C priority 300") != std::string::npos);
    REQUIRE(session.execute("policy remove 1"));
    CHECK(out.str().find("policy 1 removed") != std::string::npos);
  }
  SECTION("profile add extends classification") {
    REQUIRE(session.execute("topo three-region"));
    REQUIRE(session.execute("profile add \"profile game proto udp ports 9999\""));
    REQUIRE(session.execute("policy add \"inter game from A to B priority 40\""));
    REQUIRE(session.execute("inject --src hA1 --dst hB1 --app game"));
    CHECK(out.str().find("DELIVERED hB1") != std::string::npos);
  }
  SECTION("mode switch changes controller behavior") {
    REQUIRE(session.execute("topo linear 4"));
    REQUIRE(session.execute("mode reactive"));
    REQUIRE(session.execute("inject --src h1 --dst h2 --app any"));
    CHECK(out.str().find("packet_ins=4") != std::string::npos);
  }
  SECTION("unknown commands fail with usage") {
    CHECK_FALSE(session.execute("frobnicate"));
    CHECK(out.str().find("commands:") != std::string::npos);
  }
  SECTION("inject without topology fails cleanly") {
    CHECK_FALSE(session.execute("inject --src h1 --dst h2 --app any"));
  }
}

TEST_CASE("session trace dump and bench files") {
  std::ostringstream out;
  Session session(out);
  REQUIRE(session.execute("topo linear 3"));
  REQUIRE(session.execute("policy add \"intra any region R\""));
  REQUIRE(session.execute("inject --src h1 --dst h2 --app any"));
  std::string trace_path = "harness_trace_test.txt";
  REQUIRE(session.execute("trace dump " + trace_path));
  std::string trace = slurp(trace_path);
  CHECK(trace.find("PACKET_IN s1") != std::string::npos);
  CHECK(trace.find("DELIVERED h2") != std::string::npos);
  std::remove(trace_path.c_str());

  std::string csv_path = "harness_bench_test.csv";
  REQUIRE(session.execute("bench --mode both --max-len 4 --trials 2 --out " + csv_path));
  std::string csv = slurp(csv_path);
  CHECK(csv.rfind("n,mode,response_time_us,packet_in_count,trials\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 3 n-values x 2 modes
  std::remove(csv_path.c_str());
}

TEST_CASE("replaying a session script reproduces the same trace bytes") {
  auto run_script = [](const std::string& trace_path) {
    std::ostringstream out;
    Session session(out);
    std::istringstream script("topo three-region\n"
                              "policy add \"inter web from A to B priority 100\"\n"
                              "inject --src hA1 --dst hB1 --app web\n"
                              "trace dump " + trace_path + "\n");
    REQUIRE(session.run_script(script, true));
    return slurp(trace_path);
  };
  std::string a = run_script("harness_replay_a.txt");
  std::string b = run_script("harness_replay_b.txt");
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  std::remove("harness_replay_a.txt");
  std::remove("harness_replay_b.txt");
}
