#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kwc/config.hpp"
#include "kwc/errors.hpp"

using namespace kwc;

TEST_CASE("defaults") {
  const auto c = parse_config("{}");
  CHECK(c.run.grid.dimension == 2);
  CHECK(c.run.grid.extents[0] == 32);
  CHECK(c.run.delta_alpha == 0.5);
  CHECK(c.run.family == RegularizerFamily::hyperbola);
  CHECK(c.run.nu == 0.05);
  CHECK(c.run.h == 0.05);
  CHECK(c.run.steps == 200);
  CHECK(c.run.initial.preset == "jump");
  CHECK(c.refine.pairs.size() == 3);
  CHECK(c.gamma.nus.size() == 3);
  CHECK_FALSE(c.audit.omega);
}

TEST_CASE("merging and overrides") {
  const auto c = parse_config(R"({"grid": {"dimension": 1, "extents": [12], "dx": 0.125},
                                  "regularizer": {"family": "tanh"}, "time": {"steps": 7}})",
                              {"regularizer.nu=0.2", "initial.preset=random", "initial.seed=9",
                               "refine.pairs=[[0.2,0.1]]"});
  CHECK(c.run.grid.dimension == 1);
  CHECK(c.run.grid.extents[0] == 12);
  CHECK(c.run.grid.dx == 0.125);
  CHECK(c.run.family == RegularizerFamily::tanh);
  CHECK(c.run.nu == 0.2);
  CHECK(c.run.steps == 7);
  CHECK(c.run.h == 0.05);
  CHECK(c.run.initial.preset == "random");
  CHECK(c.run.initial.seed == 9u);
  REQUIRE(c.refine.pairs.size() == 1);
  CHECK(c.refine.pairs[0].h == 0.1);
}

TEST_CASE("round trip through json") {
  auto c = parse_config("{}", {"time.h=0.01", "regularizer.family=pgrowth", "output.snapshot_every=5"});
  const auto again = parse_config(to_json(c));
  CHECK(again.run.h == 0.01);
  CHECK(again.run.family == RegularizerFamily::pgrowth);
  CHECK(again.output.snapshot_every == 5);
  CHECK(to_json(again) == to_json(c));
  CHECK(default_config_json() == to_json(parse_config("{}")));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"cells": 4}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"mesh": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"time": {"h": "small"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"time": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"dimension": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"regularizer": {"family": "cosh"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}", {"time.dt=0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config("{}", {"time=0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config("{}", {"time.h"}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/kwc.json"), ConfigError);
}
