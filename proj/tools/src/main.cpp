// Command-line front end: run a mission, sweep a parameter grid, export
// plot-ready tables from a trace, or validate a config file.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cbpa/config.hpp"
#include "cbpa/mission.hpp"
#include "cbpa/trace.hpp"

namespace fs = std::filesystem;
using cbpa::config::json;

namespace {

// Machine-readable failure record on stderr, nonzero exit.
int fail(const std::string& stage, const std::string& message) {
  std::cerr << json{{"error", stage}, {"message", message}}.dump() << "\n";
  return 1;
}

fs::path resolve_out(const std::string& out_flag, const cbpa::config::RunConfig& cfg,
                     const std::string& fallback_name) {
  if (!out_flag.empty()) return out_flag;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* root = std::getenv("CBPA_OUT_ROOT");
  return fs::path(root ? root : ".") / fallback_name;
}

struct GridAxis {
  std::string key;
  std::vector<json> values;
};

GridAxis parse_grid(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("grid spec must look like key=v1,v2,...: " + spec);
  GridAxis axis;
  axis.key = spec.substr(0, eq);
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    // Numbers become numbers, anything else stays a string.
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (used == item.size()) {
        axis.values.push_back(v);
        continue;
      }
    } catch (...) {
    }
    axis.values.push_back(item);
  }
  if (axis.values.empty()) throw std::invalid_argument("empty grid axis: " + spec);
  return axis;
}

void set_dotted(json& doc, const std::string& path, const json& value) {
  json* cur = &doc;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

// The metric each scenario sorts its sweep rows by (ascending = better
// first, except ctf where the score is negated).
double primary_metric(const std::string& scenario, const json& metrics) {
  if (scenario == "hvu") return metrics.value("burden_variance", 0.0);
  if (scenario == "seek_sample") return metrics.value("unsampled_percent", 0.0);
  if (scenario == "ctf") return -metrics.value("score", 0.0);
  return 0.0;
}

std::vector<cbpa::trace::TraceRow> parse_trace_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read trace: " + file.string());
  std::vector<cbpa::trace::TraceRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 12) throw std::runtime_error("malformed trace row: " + line);
    cbpa::trace::TraceRow r;
    r.t = std::stod(f[0]);
    r.vehicle = std::stoi(f[1]);
    r.x = std::stod(f[2]);
    r.y = std::stod(f[3]);
    r.heading = std::stod(f[4]);
    r.speed = std::stod(f[5]);
    r.kappa = std::stod(f[6]);
    r.u = std::stod(f[7]);
    r.option = std::stoi(f[8]);
    r.ref_heading = std::stod(f[9]);
    r.ref_speed = std::stod(f[10]);
    std::stringstream zs(f[11]);
    std::string zi;
    while (std::getline(zs, zi, ';'))
      if (!zi.empty()) r.z.push_back(std::stod(zi));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"census-based population autonomy mission runner"};
  app.require_subcommand(1);

  std::string config_path, out_flag, kind = "battery-by-option", trace_dir;
  std::int64_t seed_flag = -1;
  std::vector<std::string> grid_specs;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "config file (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed_flag, "seed override");
    cmd->add_option("--out", out_flag, "output directory");
  };

  auto* cmd_run = app.add_subcommand("run", "run one mission");
  add_common(cmd_run, true);

  auto* cmd_sweep = app.add_subcommand("sweep", "run a parameter grid");
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--grid", grid_specs, "axis as key=v1,v2,... (repeatable)");

  auto* cmd_export = app.add_subcommand("export", "project a trace into a plot table");
  cmd_export->add_option("--trace", trace_dir, "run output directory")->required();
  cmd_export->add_option("--kind", kind, "battery-by-option | opinion-trajectories");
  cmd_export->add_option("--out", out_flag, "output file (default stdout)");

  auto* cmd_validate = app.add_subcommand("validate", "check a config file");
  add_common(cmd_validate, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      auto cfg = cbpa::config::load_config(config_path);
      std::cout << json{{"valid", true}, {"scenario", cfg.scenario}}.dump() << "\n";
      return 0;
    }

    if (cmd_run->parsed()) {
      auto cfg = cbpa::config::load_config(config_path);
      std::optional<std::uint64_t> seed;
      if (seed_flag >= 0) seed = static_cast<std::uint64_t>(seed_flag);
      auto bundle = cbpa::mission::run_mission(cfg, seed);
      fs::path out = resolve_out(out_flag, cfg, "run-out");
      cbpa::trace::write_bundle(bundle, out);
      std::cout << json{{"out", out.string()}, {"metrics", bundle.metrics}}.dump() << "\n";
      return 0;
    }

    if (cmd_sweep->parsed()) {
      std::ifstream in(config_path);
      if (!in) return fail("config", "cannot read " + config_path);
      json base = json::parse(in);
      std::vector<GridAxis> axes;
      for (const auto& s : grid_specs) axes.push_back(parse_grid(s));

      // Cartesian product of all axes (a single empty grid = one run).
      std::vector<json> points = {base};
      for (const auto& axis : axes) {
        std::vector<json> next;
        for (const auto& doc : points)
          for (const auto& v : axis.values) {
            json d = doc;
            set_dotted(d, axis.key, v);
            next.push_back(std::move(d));
          }
        points = std::move(next);
      }

      fs::path root = out_flag.empty()
                          ? fs::path(std::getenv("CBPA_OUT_ROOT") ? std::getenv("CBPA_OUT_ROOT")
                                                                  : ".") / "sweep-out"
                          : fs::path(out_flag);
      fs::create_directories(root);

      struct Row {
        size_t index;
        std::string scenario;
        json metrics;
        std::string error;
      };
      std::vector<std::future<Row>> futures;
      for (size_t p = 0; p < points.size(); ++p) {
        futures.push_back(std::async(std::launch::async, [&, p]() -> Row {
          try {
            auto cfg = cbpa::config::parse_config(points[p]);
            std::optional<std::uint64_t> seed;
            if (seed_flag >= 0) seed = static_cast<std::uint64_t>(seed_flag);
            auto bundle = cbpa::mission::run_mission(cfg, seed);
            cbpa::trace::write_bundle(bundle, root / ("point-" + std::to_string(p)));
            return {p, cfg.scenario, bundle.metrics, ""};
          } catch (const std::exception& e) {
            return {p, "", json::object(), e.what()};
          }
        }));
      }
      std::vector<Row> rows;
      for (auto& f : futures) rows.push_back(f.get());
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        bool fa = !a.error.empty(), fb = !b.error.empty();
        if (fa != fb) return fb;  // failures last
        return primary_metric(a.scenario, a.metrics) < primary_metric(b.scenario, b.metrics);
      });

      json table = json::array();
      for (const auto& r : rows) {
        json row{{"point", r.index}, {"config", points[r.index]}};
        if (r.error.empty())
          row["metrics"] = r.metrics;
        else
          row["error"] = r.error;
        table.push_back(row);
      }
      std::ofstream summary(root / "summary.json");
      summary << table.dump(2) << "\n";
      std::cout << table.dump() << "\n";
      return 0;
    }

    if (cmd_export->parsed()) {
      cbpa::trace::TraceBundle bundle;
      bundle.rows = parse_trace_csv(fs::path(trace_dir) / "trace.csv");
      auto out = cbpa::trace::export_plot_data(bundle, kind);
      if (out_flag.empty()) {
        std::cout << out;
      } else {
        std::ofstream f(out_flag, std::ios::binary);
        if (!f) return fail("export", "cannot write " + out_flag);
        f << out;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    return fail("run", e.what());
  }
  return fail("cli", "no subcommand handled");
}
