// End-to-end mission runner: wires the scenario packs onto the opinion
// dynamics, the behavior optimizer and the world stepper, and emits a
// replayable trace with metrics.
#pragma once

#include <cstdint>
#include <optional>

#include "cbpa/config.hpp"
#include "cbpa/trace.hpp"

namespace cbpa::mission {

// Runs the mission described by cfg. An explicit seed overrides cfg.seed.
// Deterministic: equal (config, seed) produces byte-identical traces.
trace::TraceBundle run_mission(const config::RunConfig& cfg,
                               std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace cbpa::mission
