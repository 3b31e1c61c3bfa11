#include "fmmw/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "fmmw/errors.hpp"

namespace fmmw {

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::beta_db: return "beta_db";
    case SweepAxis::delta: return "delta";
    case SweepAxis::theta_deg: return "theta_deg";
    case SweepAxis::mu: return "mu";
    case SweepAxis::alpha_los: return "alpha_los";
  }
  return "?";
}

const char* to_string(ResultMode m) {
  switch (m) {
    case ResultMode::analytic: return "analytic";
    case ResultMode::mc: return "mc";
    case ResultMode::lower: return "lower";
    case ResultMode::upper: return "upper";
  }
  return "?";
}

const char* to_string(Metric m) { return m == Metric::coverage ? "coverage" : "rate"; }

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why + " (got '" + value + "')");
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) bad(key, v, "expected a number");
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) bad(key, v, "expected an integer");
  return out;
}

// shortest text that parses back to the same double
std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <class E>
E parse_enum(const std::string& key, const std::string& v, std::initializer_list<E> all) {
  for (E e : all)
    if (v == to_string(e)) return e;
  std::string names;
  for (E e : all) names += std::string(names.empty() ? "" : ", ") + to_string(e);
  bad(key, v, "expected one of " + names);
}

const char* receivers_name(ReceiverModel m) {
  return m == ReceiverModel::full_pipeline ? "full_pipeline" : "independent_active";
}
const char* idle_name(IdlePolicy p) { return p == IdlePolicy::silent ? "silent" : "always"; }

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real(const char* key, double ExperimentConfig::*m) {
  return {key, [=](ExperimentConfig& c, const std::string& v) { c.*m = parse_double(key, v); },
          [=](const ExperimentConfig& c) { return format_double(c.*m); }};
}

template <class Int>
Field integer(const char* key, Int ExperimentConfig::*m) {
  return {key, [=](ExperimentConfig& c, const std::string& v) { c.*m = parse_int<Int>(key, v); },
          [=](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      real("radius", &ExperimentConfig::radius),
      real("lambda_tx", &ExperimentConfig::lambda_tx),
      real("lambda_rx", &ExperimentConfig::lambda_rx),
      real("noise_db", &ExperimentConfig::noise_db),
      real("mu", &ExperimentConfig::mu),
      real("alpha_los", &ExperimentConfig::alpha_los),
      real("alpha_nlos", &ExperimentConfig::alpha_nlos),
      integer("v_los", &ExperimentConfig::v_los),
      integer("v_nlos", &ExperimentConfig::v_nlos),
      real("theta_tx_deg", &ExperimentConfig::theta_tx_deg),
      real("theta_rx_deg", &ExperimentConfig::theta_rx_deg),
      real("bandwidth", &ExperimentConfig::bandwidth),
      {"metric",
       [](ExperimentConfig& c, const std::string& v) {
         c.metric = parse_enum("metric", v, {Metric::coverage, Metric::rate});
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.metric)); }},
      {"axis",
       [](ExperimentConfig& c, const std::string& v) {
         c.axis = parse_enum("axis", v,
                             {SweepAxis::beta_db, SweepAxis::delta, SweepAxis::theta_deg, SweepAxis::mu,
                              SweepAxis::alpha_los});
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.axis)); }},
      real("grid_from", &ExperimentConfig::grid_from),
      real("grid_to", &ExperimentConfig::grid_to),
      real("grid_step", &ExperimentConfig::grid_step),
      {"modes",
       [](ExperimentConfig& c, const std::string& v) {
         std::vector<ResultMode> out;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           const auto m = parse_enum("modes", trim(item),
                                     {ResultMode::analytic, ResultMode::mc, ResultMode::lower, ResultMode::upper});
           if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
         }
         if (out.empty()) bad("modes", v, "expected at least one mode");
         c.modes = std::move(out);
       },
       [](const ExperimentConfig& c) {
         std::string s;
         for (auto m : c.modes) s += std::string(s.empty() ? "" : ",") + to_string(m);
         return s;
       }},
      real("beta_db", &ExperimentConfig::beta_db),
      real("delta", &ExperimentConfig::delta),
      integer("trials", &ExperimentConfig::trials),
      integer("seed", &ExperimentConfig::seed),
      {"receivers",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "full_pipeline")
           c.receivers = ReceiverModel::full_pipeline;
         else if (v == "independent_active")
           c.receivers = ReceiverModel::independent_active;
         else
           bad("receivers", v, "expected full_pipeline or independent_active");
       },
       [](const ExperimentConfig& c) { return std::string(receivers_name(c.receivers)); }},
      {"idle",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "silent")
           c.idle = IdlePolicy::silent;
         else if (v == "always")
           c.idle = IdlePolicy::always;
         else
           bad("idle", v, "expected silent or always");
       },
       [](const ExperimentConfig& c) { return std::string(idle_name(c.idle)); }},
      {"output", [](ExperimentConfig& c, const std::string& v) { c.output = v; },
       [](const ExperimentConfig& c) { return c.output; }},
      real("rel_tol", &ExperimentConfig::rel_tol),
      real("lt_tol", &ExperimentConfig::lt_tol),
  };
  return f;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields())
    if (f.key == key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  network().validate();
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
  };
  require(grid_step > 0.0, "grid_step must be positive");
  require(grid_to >= grid_from, "grid_to must not be below grid_from");
  require((grid_to - grid_from) / grid_step < 1e6, "grid has too many points");
  require(!modes.empty(), "modes must not be empty");
  require(delta >= 0.0 && delta <= 1.0, "delta must be in [0, 1]");
  require(!wants(ResultMode::mc) || trials > 0, "trials must be positive when mc is requested");
  require(rel_tol > 0.0 && lt_tol > 0.0, "tolerances must be positive");
  if (metric == Metric::rate) require(axis != SweepAxis::beta_db, "the rate has no threshold axis");
  for (double x : grid()) {
    switch (axis) {
      case SweepAxis::delta: require(x >= 0.0 && x <= 1.0, "delta grid must lie in [0, 1]"); break;
      case SweepAxis::theta_deg: require(x > 0.0 && x < 360.0, "theta grid must lie in (0, 360)"); break;
      case SweepAxis::mu: require(x >= 0.0, "mu grid must be nonnegative"); break;
      case SweepAxis::alpha_los: require(x > 0.0 && x < alpha_nlos, "alpha_los grid must lie in (0, alpha_nlos)"); break;
      case SweepAxis::beta_db: break;
    }
  }
}

NetworkConfig ExperimentConfig::network() const {
  NetworkConfig n;
  n.radius = radius;
  n.lambda_tx = lambda_tx;
  n.lambda_rx = lambda_rx;
  n.noise = db_to_linear(noise_db);
  n.mu = mu;
  n.pathloss = {alpha_los, alpha_nlos};
  n.fading.v_los = v_los;
  n.fading.v_nlos = v_nlos;
  n.beam_tx = deg_to_rad(theta_tx_deg);
  n.beam_rx = deg_to_rad(theta_rx_deg);
  n.bandwidth = bandwidth;
  return n;
}

std::vector<double> ExperimentConfig::grid() const {
  std::vector<double> out;
  if (!(grid_step > 0.0) || grid_to < grid_from) return out;
  const auto n = static_cast<std::size_t>(std::floor((grid_to - grid_from) / grid_step + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) out.push_back(grid_from + static_cast<double>(i) * grid_step);
  return out;
}

bool ExperimentConfig::wants(ResultMode m) const { return std::find(modes.begin(), modes.end(), m) != modes.end(); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  field(key).set(cfg, trim(value));
}

std::string get_config_value(const ExperimentConfig& cfg, const std::string& key) { return field(key).get(cfg); }

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void apply_environment(ExperimentConfig& cfg) {
  for (const auto& key : config_keys()) {
    std::string name = "FMMW_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(name.c_str())) {
      try {
        set_config_value(cfg, key, v);
      } catch (const ConfigError& e) {
        throw ConfigError("environment " + name + ": " + e.what());
      }
    }
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace fmmw
