#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "core/errors.hpp"
#include "core/fock.hpp"

namespace kerrpol {

const char* engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::linearized: return "linearized";
    case EngineKind::analytic: return "analytic";
    case EngineKind::fock: return "fock";
  }
  return "?";
}

const char* power_convention_name(PowerConvention p) {
  return p == PowerConvention::constant_pump ? "constant_pump" : "constant_total";
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::seed_ratio: return "seed_ratio";
    case Axis::phase: return "phase";
    case Axis::anisotropy: return "anisotropy";
    case Axis::theta: return "theta";
    case Axis::time: return "time";
  }
  return "?";
}

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::v2: return "V2";
    case Quantity::v3: return "V3";
    case Quantity::v_coh: return "Vcoh";
    case Quantity::v_theta: return "Vtheta";
    case Quantity::v_theta_min: return "Vtheta_min";
    case Quantity::s_exact: return "S_exact";
    case Quantity::s_approx: return "S_approx";
    case Quantity::db: return "db";
  }
  return "?";
}

EngineKind engine_from_name(const std::string& name) {
  if (name == "linearized") return EngineKind::linearized;
  if (name == "analytic") return EngineKind::analytic;
  if (name == "fock") return EngineKind::fock;
  throw RangeError("unknown engine '" + name + "' (expected linearized, analytic or fock)");
}

namespace {

struct RawValue {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header at line " + std::to_string(lineno));
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw ParseError("empty section name at line " + std::to_string(lineno));
      }
      sections.try_emplace(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value' at line " + std::to_string(lineno));
    }
    if (current.empty()) {
      throw ParseError("key outside any section at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("empty key at line " + std::to_string(lineno));
    }
    auto [it, inserted] = sections[current].try_emplace(key, RawValue{value, lineno});
    if (!inserted) {
      throw SchemaError("duplicate key '" + key + "' in [" + current + "] at line " +
                        std::to_string(lineno));
    }
  }
  return sections;
}

// Pulls keys out of a section and complains about leftovers.
class SectionReader {
 public:
  SectionReader(std::map<std::string, Section>& sections, std::string name)
      : name_(std::move(name)) {
    auto it = sections.find(name_);
    if (it != sections.end()) {
      entries_ = &it->second;
    }
  }

  bool present() const { return entries_ != nullptr; }

  const RawValue* take(const std::string& key) {
    if (!entries_) return nullptr;
    auto it = entries_->find(key);
    if (it == entries_->end()) return nullptr;
    taken_.push_back(key);
    return &it->second;
  }

  void finish() const {
    if (!entries_) return;
    for (const auto& [key, raw] : *entries_) {
      if (std::find(taken_.begin(), taken_.end(), key) == taken_.end()) {
        throw SchemaError("unknown key '" + key + "' in [" + name_ + "] at line " +
                          std::to_string(raw.line));
      }
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Section* entries_ = nullptr;
  std::vector<std::string> taken_;
};

double parse_number(const std::string& section, const std::string& key, const RawValue& raw) {
  const std::string& v = raw.value;
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ParseError("value of '" + key + "' in [" + section + "] at line " +
                     std::to_string(raw.line) + " is not a number: '" + v + "'");
  }
  return out;
}

int parse_integer(const std::string& section, const std::string& key, const RawValue& raw) {
  const std::string& v = raw.value;
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ParseError("value of '" + key + "' in [" + section + "] at line " +
                     std::to_string(raw.line) + " is not an integer: '" + v + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Axis axis_from_name(const std::string& name, int line) {
  if (name == "seed_ratio") return Axis::seed_ratio;
  if (name == "phase") return Axis::phase;
  if (name == "anisotropy") return Axis::anisotropy;
  if (name == "theta") return Axis::theta;
  if (name == "time") return Axis::time;
  throw SchemaError("unknown axis '" + name + "' at line " + std::to_string(line) +
                    " (expected seed_ratio, phase, anisotropy, theta or time)");
}

Quantity quantity_from_name(const std::string& name, int line) {
  if (name == "V2") return Quantity::v2;
  if (name == "V3") return Quantity::v3;
  if (name == "Vcoh") return Quantity::v_coh;
  if (name == "Vtheta") return Quantity::v_theta;
  if (name == "Vtheta_min") return Quantity::v_theta_min;
  if (name == "S_exact") return Quantity::s_exact;
  if (name == "S_approx") return Quantity::s_approx;
  if (name == "db") return Quantity::db;
  throw SchemaError("unknown output column '" + name + "' at line " + std::to_string(line));
}

// n_h may be given directly or as a real amplitude alpha_h (squared here).
std::optional<double> read_photon_number(SectionReader& params, const char* n_key,
                                         const char* alpha_key) {
  const RawValue* n_raw = params.take(n_key);
  const RawValue* a_raw = params.take(alpha_key);
  if (n_raw && a_raw) {
    throw SchemaError(std::string("'") + n_key + "' and '" + alpha_key +
                      "' are mutually exclusive (lines " + std::to_string(n_raw->line) + " and " +
                      std::to_string(a_raw->line) + ")");
  }
  if (n_raw) {
    const double n = parse_number("params", n_key, *n_raw);
    if (!(n >= 0.0)) {
      throw RangeError(std::string("'") + n_key + "' must be >= 0, got " + n_raw->value);
    }
    return n;
  }
  if (a_raw) {
    const double a = parse_number("params", alpha_key, *a_raw);
    return a * a;
  }
  return std::nullopt;
}

void forbid(SectionReader& params, const char* key, Axis axis) {
  if (const RawValue* raw = params.take(key)) {
    throw SchemaError(std::string("'") + key + "' (line " + std::to_string(raw->line) +
                      ") conflicts with the " + axis_name(axis) +
                      " axis, which supplies it per row");
  }
}

}  // namespace

SweepConfig parse_config_text(const std::string& text) {
  auto sections = tokenize(text);
  for (const auto& [name, _] : sections) {
    if (name != "engine" && name != "params" && name != "grid" && name != "outputs") {
      throw SchemaError("unknown section [" + name + "]");
    }
  }

  SweepConfig cfg;

  // --- [grid] first: axis-dependent rules shape the rest -------------------
  SectionReader grid(sections, "grid");
  if (grid.present()) {
    const RawValue* axis_raw = grid.take("axis");
    if (!axis_raw) {
      throw SchemaError("[grid] requires an 'axis' key");
    }
    GridSpec spec;
    spec.axis = axis_from_name(axis_raw->value, axis_raw->line);

    const RawValue* start = grid.take("start");
    const RawValue* stop = grid.take("stop");
    const RawValue* count = grid.take("count");
    const RawValue* values = grid.take("values");
    const bool has_range = start || stop || count;
    if (has_range && values) {
      throw SchemaError("[grid] start/stop/count and values are mutually exclusive");
    }
    if (!has_range && !values) {
      throw SchemaError("[grid] needs either start/stop/count or values");
    }
    if (has_range) {
      if (!start || !stop || !count) {
        throw SchemaError("[grid] start, stop and count must all be given");
      }
      const double a = parse_number("grid", "start", *start);
      const double b = parse_number("grid", "stop", *stop);
      const int n = parse_integer("grid", "count", *count);
      if (n < 2) {
        throw RangeError("[grid] count must be >= 2, got " + std::to_string(n));
      }
      if (a == b) {
        throw RangeError("[grid] start and stop must differ");
      }
      spec.points.resize(n);
      for (int i = 0; i < n; ++i) {
        spec.points[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
      }
      spec.points.back() = b;  // land exactly on the endpoint
    } else {
      const auto items = split_list(values->value);
      if (items.empty()) {
        throw SchemaError("[grid] values must not be empty");
      }
      for (const auto& item : items) {
        RawValue rv{item, values->line};
        spec.points.push_back(parse_number("grid", "values", rv));
      }
    }
    grid.finish();
    cfg.grid = std::move(spec);
  }
  const bool seed_axis = cfg.grid && cfg.grid->axis == Axis::seed_ratio;
  const bool phase_axis = cfg.grid && cfg.grid->axis == Axis::phase;
  const bool aniso_axis = cfg.grid && cfg.grid->axis == Axis::anisotropy;
  const bool time_axis = cfg.grid && cfg.grid->axis == Axis::time;
  const bool theta_axis = cfg.grid && cfg.grid->axis == Axis::theta;

  // --- [engine] -------------------------------------------------------------
  SectionReader engine(sections, "engine");
  const RawValue* kind = engine.take("kind");
  if (!kind) {
    throw SchemaError("missing required key 'kind' in [engine]");
  }
  cfg.engine = engine_from_name(kind->value);
  if (const RawValue* pc = engine.take("power_convention")) {
    if (pc->value == "constant_pump") {
      cfg.power = PowerConvention::constant_pump;
    } else if (pc->value == "constant_total") {
      cfg.power = PowerConvention::constant_total;
    } else {
      throw SchemaError("unknown power_convention '" + pc->value + "' at line " +
                        std::to_string(pc->line));
    }
  }
  if (const RawValue* tt = engine.take("tail_tol")) {
    cfg.tail_tol = parse_number("engine", "tail_tol", *tt);
  }
  if (const RawValue* cap = engine.take("n_max_cap")) {
    cfg.n_max_cap = parse_integer("engine", "n_max_cap", *cap);
  }
  engine.finish();

  // --- [params] ---------------------------------------------------------------
  SectionReader params(sections, "params");
  if (!params.present()) {
    throw SchemaError("missing [params] section");
  }

  cfg.n_h = read_photon_number(params, "n_h", "alpha_h");
  if (!cfg.n_h) {
    throw SchemaError("[params] requires n_h or alpha_h");
  }
  if (seed_axis) {
    forbid(params, "n_v", Axis::seed_ratio);
    forbid(params, "alpha_v", Axis::seed_ratio);
  } else {
    cfg.n_v = read_photon_number(params, "n_v", "alpha_v");
    if (!cfg.n_v) {
      throw SchemaError("[params] requires n_v or alpha_v (unless sweeping seed_ratio)");
    }
  }

  if (phase_axis) {
    forbid(params, "arg_w", Axis::phase);
  } else if (const RawValue* aw = params.take("arg_w")) {
    cfg.arg_w = parse_number("params", "arg_w", *aw);
  }

  if (aniso_axis) {
    forbid(params, "gamma_h", Axis::anisotropy);
  } else {
    const RawValue* gh = params.take("gamma_h");
    if (!gh) throw SchemaError("[params] requires gamma_h");
    cfg.gamma_h = parse_number("params", "gamma_h", *gh);
  }
  const RawValue* gv = params.take("gamma_v");
  if (!gv) throw SchemaError("[params] requires gamma_v");
  cfg.gamma_v = parse_number("params", "gamma_v", *gv);
  const RawValue* gg = params.take("gamma");
  if (!gg) throw SchemaError("[params] requires gamma");
  cfg.gamma = parse_number("params", "gamma", *gg);

  if (time_axis) {
    forbid(params, "t", Axis::time);
  } else if (const RawValue* t = params.take("t")) {
    cfg.t = parse_number("params", "t", *t);
  }
  if (const RawValue* eta = params.take("eta")) {
    cfg.eta = parse_number("params", "eta", *eta);
  }
  params.finish();

  // --- [outputs] ----------------------------------------------------------
  SectionReader outputs(sections, "outputs");
  if (outputs.present()) {
    if (const RawValue* cols = outputs.take("columns")) {
      const auto items = split_list(cols->value);
      if (items.empty()) {
        throw SchemaError("[outputs] columns must not be empty");
      }
      cfg.outputs.clear();
      for (const auto& item : items) {
        const Quantity q = quantity_from_name(item, cols->line);
        if (std::find(cfg.outputs.begin(), cfg.outputs.end(), q) != cfg.outputs.end()) {
          throw SchemaError("duplicate output column '" + item + "' at line " +
                            std::to_string(cols->line));
        }
        cfg.outputs.push_back(q);
      }
    }
    outputs.finish();
  }

  if (!theta_axis) {
    for (Quantity q : cfg.outputs) {
      if (q == Quantity::v_theta) {
        throw SchemaError(
            "output 'Vtheta' needs the theta axis to supply the angle; "
            "use 'Vtheta_min' on other axes");
      }
    }
  }

  validate_config(cfg);
  return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void override_engine(SweepConfig& config, EngineKind engine) {
  config.engine = engine;
  validate_config(config);
}

void validate_config(const SweepConfig& config) {
  if (!(config.tail_tol > 0.0) || !(config.tail_tol < 1.0)) {
    throw RangeError("tail_tol must be in (0, 1)");
  }
  if (config.n_max_cap < 1) {
    throw RangeError("n_max_cap must be >= 1");
  }
  if (!config.n_h || !(*config.n_h >= 0.0)) {
    throw RangeError("n_h must be present and >= 0");
  }
  const bool seed_axis = config.grid && config.grid->axis == Axis::seed_ratio;
  if (!seed_axis) {
    if (!config.n_v || !(*config.n_v >= 0.0)) {
      throw RangeError("n_v must be present and >= 0");
    }
  } else if (config.n_v) {
    throw SchemaError("n_v must be absent on a seed_ratio sweep");
  }
  const bool aniso_axis = config.grid && config.grid->axis == Axis::anisotropy;
  if (!aniso_axis && !config.gamma_h) {
    throw SchemaError("gamma_h is required off the anisotropy axis");
  }
  if (aniso_axis && config.gamma_h) {
    throw SchemaError("gamma_h must be absent on an anisotropy sweep");
  }
  if (!config.gamma_v || !config.gamma) {
    throw SchemaError("gamma_v and gamma are required");
  }
  if (!(config.t >= 0.0)) {
    throw RangeError("t must be >= 0");
  }
  if (!(config.eta > 0.0) || !(config.eta <= 1.0)) {
    throw RangeError("eta must be in (0, 1]");
  }

  double max_ratio = 0.0;
  if (config.grid) {
    const auto& pts = config.grid->points;
    if (pts.empty()) {
      throw RangeError("grid must contain at least one point");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double step = pts[i] - pts[i - 1];
      const double first = pts[1] - pts[0];
      if (step == 0.0 || (step > 0) != (first > 0)) {
        throw RangeError("grid points must be strictly monotone");
      }
    }
    switch (config.grid->axis) {
      case Axis::seed_ratio:
        for (double r : pts) {
          if (!(r >= 0.0)) throw RangeError("seed_ratio values must be >= 0");
          max_ratio = std::max(max_ratio, r);
        }
        break;
      case Axis::time:
        for (double t : pts) {
          if (!(t >= 0.0)) throw RangeError("time values must be >= 0");
        }
        break;
      default:
        break;
    }
  }

  // Reject fock runs that cannot reach the tail tolerance under the cutoff
  // cap before any row is evaluated.
  if (config.engine == EngineKind::fock) {
    double worst_h = *config.n_h;
    double worst_v = config.n_v.value_or(0.0);
    if (seed_axis) {
      if (config.power == PowerConvention::constant_pump) {
        worst_v = *config.n_h * max_ratio;
      } else {
        worst_h = *config.n_h;  // r = 0 end keeps the full budget in one mode
        worst_v = *config.n_h * max_ratio / (1.0 + max_ratio);
      }
    }
    const double worst = std::max(worst_h, worst_v);
    try {
      auto_cutoff(worst, config.tail_tol, config.n_max_cap);
    } catch (const TruncationError& e) {
      throw TruncationError(std::string("fock engine cannot honor this configuration: ") +
                            e.what());
    }
  }
}

}  // namespace kerrpol
