#include "cbpa/trace.hpp"

#include <unistd.h>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cbpa::trace {

namespace {

// Fixed-width formatting so equal values always hash equally.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string TraceBundle::trace_csv() const {
  std::string out = "t,vehicle,x,y,heading,speed,kappa,u,option,ref_heading,ref_speed,z\n";
  for (const auto& r : rows) {
    out += fmt(r.t) + ',' + std::to_string(r.vehicle) + ',' + fmt(r.x) + ',' + fmt(r.y) + ',' +
           fmt(r.heading) + ',' + fmt(r.speed) + ',' + fmt(r.kappa) + ',' + fmt(r.u) + ',' +
           std::to_string(r.option) + ',' + fmt(r.ref_heading) + ',' + fmt(r.ref_speed) + ',';
    for (size_t i = 0; i < r.z.size(); ++i) {
      if (i) out += ';';
      out += fmt(r.z[i]);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t TraceBundle::trace_hash() const {
  auto csv = trace_csv();
  return fnv1a(csv.data(), csv.size());
}

void write_bundle(const TraceBundle& bundle, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  fs::create_directories(parent);
  fs::path tmp = parent / (dir.filename().string() + ".tmp-" +
                           std::to_string(static_cast<std::uint64_t>(::getpid())));
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  write_file(tmp / "trace.csv", bundle.trace_csv());

  std::string events;
  for (const auto& e : bundle.events) {
    json j{{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}};
    events += j.dump() + '\n';
  }
  write_file(tmp / "events.jsonl", events);

  json metrics = bundle.metrics;
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "%016" PRIx64, bundle.trace_hash());
  metrics["trace_hash"] = hash_buf;
  write_file(tmp / "metrics.json", metrics.dump(2) + '\n');
  write_file(tmp / "config.json", bundle.effective_config.dump(2) + '\n');

  fs::remove_all(dir);
  fs::rename(tmp, dir);
}

std::string export_plot_data(const TraceBundle& bundle, const std::string& kind) {
  std::string out;
  if (kind == "battery-by-option") {
    out = "t,vehicle,kappa,option\n";
    for (const auto& r : bundle.rows)
      out += fmt(r.t) + ',' + std::to_string(r.vehicle) + ',' + fmt(r.kappa) + ',' +
             std::to_string(r.option) + '\n';
  } else if (kind == "opinion-trajectories") {
    out = "t,vehicle,option,z\n";
    for (const auto& r : bundle.rows)
      for (size_t j = 0; j < r.z.size(); ++j)
        out += fmt(r.t) + ',' + std::to_string(r.vehicle) + ',' + std::to_string(j) + ',' +
               fmt(r.z[j]) + '\n';
  } else {
    throw std::invalid_argument("unknown plot kind: " + kind);
  }
  return out;
}

}  // namespace cbpa::trace
