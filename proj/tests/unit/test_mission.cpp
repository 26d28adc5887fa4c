#include <string>

#include "cbpa/mission.hpp"
#include "doctest.h"

using namespace cbpa;
using json = config::json;

namespace {

config::RunConfig short_config(const std::string& scenario, int seed) {
  json doc = {{"scenario", scenario}, {"seed", seed}, {"duration", 60.0}};
  if (scenario == "ctf") doc["ctf"] = {{"game_duration", 60.0}};
  return config::parse_config(doc);
}

}  // namespace

TEST_CASE("equal config and seed reproduce byte-identical traces") {
  for (const char* scenario : {"hvu", "ctf", "seek_sample"}) {
    CAPTURE(scenario);
    auto cfg = short_config(scenario, 11);
    auto a = mission::run_mission(cfg);
    auto b = mission::run_mission(cfg);
    CHECK(a.trace_csv() == b.trace_csv());
    CHECK(a.trace_hash() == b.trace_hash());
    CHECK(a.metrics == b.metrics);
    // The ctf runner is score-only; the other packs log per-step rows.
    if (std::string(scenario) != "ctf") CHECK_FALSE(a.rows.empty());
  }
}

TEST_CASE("the seed argument overrides the config seed") {
  auto cfg = short_config("hvu", 11);
  auto a = mission::run_mission(cfg, 99);
  auto b = mission::run_mission(short_config("hvu", 99));
  CHECK(a.trace_hash() == b.trace_hash());
}

TEST_CASE("different seeds diverge where the scenario draws randomness") {
  // Seek-and-sample draws its hotspot layout from the seed; the default hvu
  // setup is fully scripted, so the seed check lives here.
  auto cfg = short_config("seek_sample", 11);
  auto a = mission::run_mission(cfg, 1);
  auto b = mission::run_mission(cfg, 2);
  CHECK(a.trace_hash() != b.trace_hash());
}
