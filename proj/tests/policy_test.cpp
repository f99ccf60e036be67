#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "osdf/policy.hpp"
#include "test_util.hpp"

using namespace osdf;

TEST_CASE("parse_policy on the example policies") {
  SECTION("inter with explicit priority") {
    Policy p = parse_policy("inter web from A to B priority 100");
    CHECK(p.function == NetworkFunction::InterSiteRoute);
    CHECK(p.profile == "web");
    CHECK(p.regions == std::vector<std::string>{"A", "B"});
    CHECK(p.priority == 100);
    CHECK(p.bidirectional);
  }
  SECTION("inter with default priority") {
    Policy p = parse_policy("inter ping from B to C");
    CHECK(p.priority == 10);
    CHECK(p.bidirectional);
  }
  SECTION("intra over a region set") {
    Policy p = parse_policy("intra video region A,C priority 300");
    CHECK(p.function == NetworkFunction::IntraSiteRoute);
    CHECK(p.regions == std::vector<std::string>{"A", "C"});
    CHECK(p.priority == 300);
  }
  SECTION("keywords are case-insensitive") {
    Policy p = parse_policy("INTER web FROM A TO B PRIORITY 50 ONEWAY");
    CHECK(p.priority == 50);
    CHECK_FALSE(p.bidirectional);
  }
}

TEST_CASE("parse_policy errors") {
  CHECK_THROWS_AS(parse_policy("inter web from A to A"), ParseError);
  CHECK_THROWS_AS(parse_policy("route web from A to B"), ParseError);
  CHECK_THROWS_AS(parse_policy("inter web from A to B priority 1"), ParseError);
  CHECK_THROWS_AS(parse_policy("inter web from A to B priority 65536"), ParseError);
  CHECK_THROWS_AS(parse_policy("inter web from A"), ParseError);
  CHECK_THROWS_AS(parse_policy("intra web region A oneway"), ParseError);
  CHECK_THROWS_AS(parse_policy("intra web region A bogus"), ParseError);
}

static PolicyStore store_with_demo_policies(const Topology& t, const ProfileRegistry& reg) {
  PolicyStore store;
  store.add(parse_policy("inter web from A to B priority 100"), t, reg);
  store.add(parse_policy("inter ping from B to C"), t, reg);
  store.add(parse_policy("intra video region A,C priority 300"), t, reg);
  return store;
}

TEST_CASE("add_policy") {
  Topology t = gen_three_region();
  ProfileRegistry reg;
  SECTION("the three example policies iterate by priority") {
    PolicyStore store = store_with_demo_policies(t, reg);
    auto all = store.list();
    REQUIRE(all.size() == 3);
    CHECK(all[0].profile == "video");
    CHECK(all[0].id == 3);
    CHECK(all[1].profile == "web");
    CHECK(all[2].profile == "ping");
  }
  SECTION("unresolved references are named") {
    PolicyStore store;
    CHECK_THROWS_WITH(store.add(parse_policy("inter web from A to B via zz9"), t, reg),
                      Catch::Matchers::ContainsSubstring("zz9"));
    CHECK_THROWS_WITH(store.add(parse_policy("inter web from A to Z"), t, reg),
                      Catch::Matchers::ContainsSubstring("Z"));
    CHECK_THROWS_WITH(store.add(parse_policy("inter ftp from A to B"), t, reg),
                      Catch::Matchers::ContainsSubstring("ftp"));
  }
  SECTION("identical policies get distinct ids, earlier insert wins ties") {
    PolicyStore store;
    int id1 = store.add(parse_policy("inter web from A to B priority 100"), t, reg);
    int id2 = store.add(parse_policy("inter web from A to B priority 100"), t, reg);
    CHECK(id1 == 1);
    CHECK(id2 == 2);
    auto hits = store.match(NetworkFunction::InterSiteRoute, "A", "B", "web");
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].id == id1);
  }
}

TEST_CASE("remove_policy") {
  Topology t = gen_three_region();
  ProfileRegistry reg;
  PolicyStore store = store_with_demo_policies(t, reg);
  SECTION("removed policies stop matching") {
    store.remove(1);
    CHECK(store.match(NetworkFunction::InterSiteRoute, "A", "B", "web").empty());
  }
  SECTION("unknown id") {
    CHECK_THROWS_AS(store.remove(99), ValidationError);
  }
  SECTION("ids are never reused") {
    Policy removed = store.remove(2);
    removed.id = 0;
    int fresh = store.add(removed, t, reg);
    CHECK(fresh == 4);
  }
}

TEST_CASE("match_policies") {
  Topology t = gen_three_region();
  ProfileRegistry reg;
  PolicyStore store = store_with_demo_policies(t, reg);
  SECTION("matches the web policy forward") {
    auto hits = store.match(NetworkFunction::InterSiteRoute, "A", "B", "web");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].priority == 100);
  }
  SECTION("bidirectional reversal") {
    auto hits = store.match(NetworkFunction::InterSiteRoute, "B", "A", "web");
    REQUIRE(hits.size() == 1);
  }
  SECTION("intra scope by exclusion") {
    CHECK(store.match(NetworkFunction::IntraSiteRoute, "B", "B", "video").empty());
    CHECK(store.match(NetworkFunction::IntraSiteRoute, "A", "A", "video").size() == 1);
  }
  SECTION("oneway suppresses the reverse direction") {
    store.add(parse_policy("inter voip from A to C oneway"), t, reg);
    CHECK(store.match(NetworkFunction::InterSiteRoute, "A", "C", "voip").size() == 1);
    CHECK(store.match(NetworkFunction::InterSiteRoute, "C", "A", "voip").empty());
  }
  SECTION("function isolation") {
    CHECK(store.match(NetworkFunction::IntraSiteRoute, "A", "A", "web").empty());
  }
}

TEST_CASE("match output is sorted by priority desc then id asc") {
  Topology t = gen_three_region();
  ProfileRegistry reg;
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    PolicyStore store;
    int count = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int i = 0; i < count; ++i) {
      Policy p;
      p.function = NetworkFunction::InterSiteRoute;
      p.profile = "web";
      p.regions = {"A", "B"};
      p.priority = std::uniform_int_distribution<int>(2, 5)(rng);  // force ties
      store.add(p, t, reg);
    }
    auto hits = store.match(NetworkFunction::InterSiteRoute, "A", "B", "web");
    REQUIRE(hits.size() == static_cast<size_t>(count));
    for (size_t i = 1; i < hits.size(); ++i) {
      bool ordered = hits[i - 1].priority > hits[i].priority ||
                     (hits[i - 1].priority == hits[i].priority && hits[i - 1].id < hits[i].id);
      REQUIRE(ordered);
    }
  }
}

TEST_CASE("policy parse/format round-trip") {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    Policy p = testutil::random_policy(rng);
    Policy reparsed = parse_policy(format_policy(p));
    REQUIRE(reparsed == p);
  }
}

// model-based: the store behaves like a plain list under add/remove
TEST_CASE("store linearity against a list model") {
  Topology t = gen_three_region();
  ProfileRegistry reg;
  std::mt19937 rng(31);
  PolicyStore store;
  std::vector<Policy> model;
  for (int step = 0; step < 300; ++step) {
    bool do_add = model.empty() || std::uniform_int_distribution<int>(0, 2)(rng) > 0;
    if (do_add) {
      Policy p;
      p.function = std::uniform_int_distribution<int>(0, 1)(rng)
                       ? NetworkFunction::InterSiteRoute
                       : NetworkFunction::IntraSiteRoute;
      p.profile = std::uniform_int_distribution<int>(0, 1)(rng) ? "web" : "ping";
      if (p.function == NetworkFunction::InterSiteRoute) {
        p.regions = {"A", "B"};
        p.bidirectional = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
      } else {
        p.regions = {"A"};
      }
      p.priority = std::uniform_int_distribution<int>(2, 6)(rng);
      int id = store.add(p, t, reg);
      p.id = id;
      model.push_back(p);
    } else {
      size_t victim = std::uniform_int_distribution<size_t>(0, model.size() - 1)(rng);
      store.remove(model[victim].id);
      model.erase(model.begin() + static_cast<long>(victim));
    }
    // compare matchable sets for a few queries against the naive model
    auto model_match = [&](NetworkFunction fn, const std::string& src, const std::string& dst,
                           const std::string& prof) {
      std::vector<Policy> out;
      for (const Policy& p : model) {
        if (p.function != fn || p.profile != prof) continue;
        if (fn == NetworkFunction::IntraSiteRoute) {
          if (src != dst || !std::count(p.regions.begin(), p.regions.end(), src)) continue;
        } else {
          bool fwd = p.regions[0] == src && p.regions[1] == dst;
          bool rev = p.bidirectional && p.regions[0] == dst && p.regions[1] == src;
          if (!fwd && !rev) continue;
        }
        out.push_back(p);
      }
      std::sort(out.begin(), out.end(), [](const Policy& a, const Policy& b) {
        return a.priority != b.priority ? a.priority > b.priority : a.id < b.id;
      });
      return out;
    };
    REQUIRE(store.match(NetworkFunction::InterSiteRoute, "A", "B", "web") ==
            model_match(NetworkFunction::InterSiteRoute, "A", "B", "web"));
    REQUIRE(store.match(NetworkFunction::InterSiteRoute, "B", "A", "web") ==
            model_match(NetworkFunction::InterSiteRoute, "B", "A", "web"));
    REQUIRE(store.match(NetworkFunction::IntraSiteRoute, "A", "A", "ping") ==
            model_match(NetworkFunction::IntraSiteRoute, "A", "A", "ping"));
  }
}
