// Run artifacts: per-step vehicle trace rows, an event log, a metrics
// summary, deterministic hashing, and atomic directory output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace cbpa::trace {

using json = nlohmann::json;

struct TraceRow {
  double t = 0.0;
  int vehicle = 0;
  double x = 0.0, y = 0.0, heading = 0.0, speed = 0.0, kappa = 0.0;
  std::vector<double> z;  // opinion row
  double u = 0.0;         // attention
  int option = 0;
  double ref_heading = 0.0, ref_speed = 0.0;
};

struct Event {
  double t = 0.0;
  std::string kind;
  json detail;
};

struct TraceBundle {
  std::vector<TraceRow> rows;
  std::vector<Event> events;
  json metrics;
  json effective_config;

  std::string trace_csv() const;     // rows, stable formatting
  std::uint64_t trace_hash() const;  // FNV-1a over trace_csv bytes
};

// Writes trace.csv, events.jsonl, metrics.json, and config.json into `dir`
// atomically: everything goes to a temp sibling first, then one rename.
// Throws on any I/O failure; an existing destination is replaced.
void write_bundle(const TraceBundle& bundle, const std::filesystem::path& dir);

// Long-format projections of the trace for plotting. Known kinds:
// "battery-by-option" -> t,vehicle,kappa,option
// "opinion-trajectories" -> t,vehicle,option,z
std::string export_plot_data(const TraceBundle& bundle, const std::string& kind);

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull);

}  // namespace cbpa::trace
