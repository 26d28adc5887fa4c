#include "cbpa/config.hpp"

#include <fstream>
#include <stdexcept>

namespace cbpa::config {

namespace {

std::vector<KeySpec> build_registry() {
  std::vector<KeySpec> r;
  auto add = [&](std::string path, std::string type, json def, std::string doc,
                 std::string scenario = "") {
    r.push_back({std::move(path), std::move(type), std::move(def), std::move(doc),
                 std::move(scenario)});
  };

  add("scenario", "string", "hvu", "mission pack: hvu | ctf | seek_sample");
  add("seed", "integer", 0, "root seed for all pseudo-random draws");
  add("duration", "number", 600.0, "mission length, s");
  add("out_dir", "string", "", "output directory; empty = caller decides");

  add("world.dt", "number", 0.5, "world step, s");
  add("world.comm_range", "number", 160.0, "communication range, m");
  add("world.v_max", "number", 2.0, "speed cap, m/s");
  add("world.turn_rate_max", "number", 30.0, "turn rate cap, deg/s");
  add("world.speed_tau", "number", 1.0, "first-order speed lag, s");

  add("nod.d", "number", 1.0, "opinion damping");
  add("nod.u", "number", 1.2, "attention gain when attention dynamics are off");
  add("nod.alpha", "number", 0.5, "self-reinforcement gain");
  add("nod.gamma", "number", -0.5, "inter-agent coupling; negative = dissensus");
  add("nod.u_lo", "number", 0.1, "attention floor");
  add("nod.u_hi", "number", 2.5, "attention ceiling");
  add("nod.tau_u", "number", 2.0, "attention time constant, s");
  add("nod.half_energy", "number", 0.25, "attention saturation half-energy");
  add("nod.substeps", "integer", 5, "opinion RK4 substeps per world step");

  add("hvu.n_vehicles", "integer", 7, "protector fleet size", "hvu");
  add("hvu.patrol_radius", "number", 50.0, "patrol ring radius, m", "hvu");
  add("hvu.loiter_radius", "number", 15.0, "loiter ring radius, m", "hvu");
  add("hvu.f_intcpt_max", "number", 1.0, "intercept input ceiling", "hvu");
  add("hvu.j_min", "number", 25.0, "full-input cost knee, m", "hvu");
  add("hvu.j_max", "number", 100.0, "zero-input cost knee, m", "hvu");
  add("hvu.eta1", "number", 1.0, "burden input gain", "hvu");
  add("hvu.eta2", "number", 1.0, "intercept cost scale", "hvu");
  add("hvu.xi_active", "number", 0.004, "battery exhaustion while active, 1/s", "hvu");
  add("hvu.xi_loiter", "number", 0.0005, "battery exhaustion while loitering, 1/s", "hvu");
  add("hvu.comp_rate", "number", 1.0, "intercept competition time constant", "hvu");
  add("hvu.comp_inhibition", "number", 0.306, "intercept competition suppression gain", "hvu");
  add("hvu.comp_half_energy", "number", 0.25, "evidence confidence half-energy", "hvu");
  add("hvu.comp_commit_scale", "number", 0.05, "commitment saturation scale", "hvu");
  add("hvu.comp_t_max", "number", 60.0, "competition settling horizon, s", "hvu");
  add("hvu.comp_dt", "number", 0.02, "competition integration step, s", "hvu");
  add("hvu.alloc_period", "number", 5.0, "re-allocation period, s", "hvu");
  add("hvu.kappa_spread", "number", 0.1, "initial battery exhaustion spread", "hvu");
  add("hvu.static_allocation", "boolean", false, "ablation: freeze the patrol/loiter split",
      "hvu");
  add("hvu.burden_gain", "number", 40.0, "scale from battery spread to opinion input", "hvu");
  add("hvu.n_intrusions", "integer", 0, "scripted intrusion events", "hvu");
  add("hvu.intrusion_duration", "number", 60.0, "pursuit window per intrusion, s", "hvu");

  add("ctf.tag_radius", "number", 10.0, "tag radius, m", "ctf");
  add("ctf.grab_radius", "number", 10.0, "flag grab radius, m", "ctf");
  add("ctf.game_duration", "number", 600.0, "game length, s", "ctf");
  add("ctf.lead_base", "number", 10.0, "interception lead per rank, m", "ctf");
  add("ctf.w_dist", "number", 1.0, "defender assignment distance weight", "ctf");
  add("ctf.w_heading", "number", 0.5, "defender assignment heading weight", "ctf");
  add("ctf.field_x0", "number", 0.0, "field west edge, m", "ctf");
  add("ctf.field_y0", "number", 0.0, "field south edge, m", "ctf");
  add("ctf.field_x1", "number", 160.0, "field east edge, m", "ctf");
  add("ctf.field_y1", "number", 80.0, "field north edge, m", "ctf");
  add("ctf.use_opinions", "boolean", true, "ablation switch: false = fixed roles", "ctf");

  add("seek.n_agents", "integer", 4, "fleet size", "seek_sample");
  add("seek.zone_cells", "integer", 4, "zone grid is zone_cells x zone_cells", "seek_sample");
  add("seek.cell_size", "number", 10.0, "grid cell edge, m", "seek_sample");
  add("seek.zone_gap", "number", 40.0, "gap between the two zones, m", "seek_sample");
  add("seek.search_depth", "integer", 3, "search horizon, transitions", "seek_sample");
  add("seek.beta", "number", 1.0, "exploration weight", "seek_sample");
  add("seek.gamma_t", "number", 0.9, "per-transition discount", "seek_sample");
  add("seek.b_mig", "number", 2.0, "migration input on detection", "seek_sample");
  add("seek.detect_threshold", "number", 1.0, "field value spawning a sample task",
      "seek_sample");
  add("seek.decay_rate", "number", 1.0 / 120.0, "belief relaxation rate, 1/s", "seek_sample");
  add("seek.n_hotspots", "integer", 3, "sample sites per zone", "seek_sample");
  add("seek.eta10", "number", 1.0, "search input scale", "seek_sample");
  add("seek.eta11", "number", 0.05, "sample input scale", "seek_sample");
  add("seek.eta12", "number", 1.0, "migrate input scale", "seek_sample");
  add("seek.migrate_time", "number", 0.5, "fraction of the mission when the signal fires",
      "seek_sample");
  add("seek.use_allocation", "boolean", true, "ablation switch: false = uncoordinated",
      "seek_sample");
  return r;
}

const json* find_path(const json& doc, const std::string& path) {
  const json* cur = &doc;
  size_t start = 0;
  while (true) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
    if (dot == std::string::npos) return cur;
    start = dot + 1;
  }
}

void set_path(json& doc, const std::string& path, const json& value) {
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

bool type_matches(const json& v, const std::string& type) {
  if (type == "number") return v.is_number();
  if (type == "integer") return v.is_number_integer();
  if (type == "boolean") return v.is_boolean();
  if (type == "string") return v.is_string();
  return false;
}

// Every leaf in the user document must be a registered key.
void check_unknown(const json& doc, const std::string& prefix) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::string path = prefix.empty() ? it.key() : prefix + '.' + it.key();
    if (it->is_object()) {
      check_unknown(*it, path);
      continue;
    }
    bool known = false;
    for (const auto& spec : key_registry())
      if (spec.path == path) {
        known = true;
        break;
      }
    if (!known) throw std::invalid_argument("unknown config key: " + path);
  }
}

void check_invariants(const RunConfig& cfg) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw std::invalid_argument("invalid config value at " + path + ": " + why);
  };
  if (cfg.num("world.dt") <= 0.0) fail("world.dt", "must be positive");
  if (cfg.num("world.comm_range") <= 0.0) fail("world.comm_range", "must be positive");
  if (cfg.num("duration") <= 0.0) fail("duration", "must be positive");
  if (cfg.scenario == "hvu" && cfg.num("hvu.j_min") >= cfg.num("hvu.j_max"))
    fail("hvu.j_min", "must be < hvu.j_max");
  if (cfg.scenario == "ctf" && cfg.num("ctf.field_x0") >= cfg.num("ctf.field_x1"))
    fail("ctf.field_x0", "must be < ctf.field_x1");
  if (cfg.integer("nod.substeps") < 1) fail("nod.substeps", "must be >= 1");
}

}  // namespace

const std::vector<KeySpec>& key_registry() {
  static const std::vector<KeySpec> registry = build_registry();
  return registry;
}

double RunConfig::num(const std::string& path) const {
  const json* v = find_path(values, path);
  if (!v) throw std::invalid_argument("config key not found: " + path);
  return v->get<double>();
}

int RunConfig::integer(const std::string& path) const {
  const json* v = find_path(values, path);
  if (!v) throw std::invalid_argument("config key not found: " + path);
  return v->get<int>();
}

bool RunConfig::flag(const std::string& path) const {
  const json* v = find_path(values, path);
  if (!v) throw std::invalid_argument("config key not found: " + path);
  return v->get<bool>();
}

std::string RunConfig::str(const std::string& path) const {
  const json* v = find_path(values, path);
  if (!v) throw std::invalid_argument("config key not found: " + path);
  return v->get<std::string>();
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config root must be an object");
  check_unknown(doc, "");

  RunConfig cfg;
  cfg.values = json::object();
  for (const auto& spec : key_registry()) {
    const json* user = find_path(doc, spec.path);
    if (user) {
      if (!type_matches(*user, spec.type))
        throw std::invalid_argument("wrong type at " + spec.path + ": expected " + spec.type);
      set_path(cfg.values, spec.path, *user);
    } else {
      set_path(cfg.values, spec.path, spec.default_value);
    }
  }

  cfg.scenario = cfg.str("scenario");
  if (cfg.scenario != "hvu" && cfg.scenario != "ctf" && cfg.scenario != "seek_sample")
    throw std::invalid_argument("invalid config value at scenario: " + cfg.scenario);
  cfg.seed = static_cast<std::uint64_t>(cfg.values["seed"].get<std::int64_t>());
  cfg.out_dir = cfg.str("out_dir");
  check_invariants(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json effective_config(const RunConfig& cfg) { return cfg.values; }

}  // namespace cbpa::config
