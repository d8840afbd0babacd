#include "bounds/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bounds::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_integer(const std::string& text, long long& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_bool(const std::string& text, bool& out) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") {
    out = true;
    return true;
  }
  if (t == "false" || t == "0" || t == "no" || t == "off") {
    out = false;
    return true;
  }
  return false;
}

std::vector<KeyDef> build_schema() {
  using K = KeyType;
  return {
      {"run.seed", K::integer, "0", {}, "master seed"},
      {"run.out", K::text, "bounds_out", {}, "output directory"},
      {"run.threads", K::integer, "0", {}, "worker threads for window evaluation (0 = all cores)"},

      {"model.kind", K::text, "kinematic", {"kinematic", "dynamic", "planar"}, "agent model"},
      {"model.sensors", K::text, "psi,beta,gamma", {}, "measurement catalogue"},
      {"model.drag", K::real, "0.1", {}, "drag coefficient"},
      {"model.mass", K::real, "2.529", {}, "mass of the dynamic agent (kg)"},

      {"trajectory.source", K::text, "motifs", {"motifs", "random", "csv"}, "trajectory source"},
      {"trajectory.csv", K::text, "", {}, "trajectory CSV when source = csv"},
      {"trajectory.dt", K::real, "0.1", {}, "sample interval (s)"},
      {"trajectory.duration", K::real, "8", {}, "duration (s)"},
      {"trajectory.motifs", K::text, "heading_turn:1.5707963267948966:1:3", {},
       "kind:amplitude:duration:start, comma separated"},
      {"trajectory.speed", K::real, "1", {}, "baseline ground speed (m/s)"},
      {"trajectory.heading", K::real, "0", {}, "baseline heading (rad)"},
      {"trajectory.course_offset", K::real, "0", {}, "baseline course minus heading (rad)"},
      {"trajectory.altitude", K::real, "2", {}, "baseline altitude (m)"},
      {"trajectory.wind_speed", K::real, "1", {}, "wind speed (m/s)"},
      {"trajectory.wind_direction", K::real, "0.5", {}, "wind direction (rad)"},

      {"mpc.horizon", K::integer, "10", {}, "prediction horizon (steps)"},
      {"mpc.max_iterations", K::integer, "50", {}, "iteration cap per horizon solve"},
      {"mpc.accept_best_on_cap", K::boolean, "false", {}, "apply the best iterate at the cap"},
      {"mpc.input_weight", K::real, "0.01", {}, "input-rate penalty weight"},

      {"observability.omega", K::integer, "5", {}, "window length (steps)"},
      {"observability.epsilon", K::real, "1e-05", {}, "finite-difference perturbation"},
      {"observability.lambda", K::real, "1e-06", {}, "Chernoff regularization"},
      {"observability.noise_variance", K::real, "0.1", {}, "per-sensor noise variance"},
      {"observability.sensors", K::text, "", {}, "sensor subset (empty = all model sensors)"},
      {"observability.transform", K::text, "none", {"none", "polar"}, "coordinate change"},
      {"observability.allow_one_sided", K::boolean, "false", {}, "one-sided differences near zero"},
      {"observability.plot_states", K::text, "", {}, "states drawn in the SVG (empty = all)"},
      {"observability.svg", K::boolean, "true", {}, "write the SVG plot"},

      {"train.target", K::text, "wind", {"wind", "altitude", "bins"}, "what to train"},
      {"train.trajectories", K::integer, "0", {}, "dataset size (0 = recipe)"},
      {"train.epochs", K::integer, "0", {}, "epochs (0 = recipe)"},
      {"train.desk_scale", K::boolean, "false", {}, "reduced dataset and epochs"},

      {"filter.wind_net", K::text, "", {}, "wind net file (empty = train in-run)"},
      {"filter.observability_net", K::text, "", {}, "observability net file (empty = train in-run)"},
      {"filter.variance_source", K::text, "net", {"net", "model"}, "where alpha's variance comes from"},
      {"filter.v_low", K::real, "0.05", {}, "variance at which alpha reaches 1"},
      {"filter.v_high", K::real, "1", {}, "variance at which alpha reaches 0"},
      {"filter.duration", K::real, "60", {}, "scenario duration (s)"},
      {"filter.speed", K::real, "1", {}, "ground speed (m/s)"},
      {"filter.wind_speed", K::real, "1", {}, "mean wind speed (m/s)"},
      {"filter.wind_direction", K::real, "0.5", {}, "mean wind direction (rad)"},
      {"filter.wind_direction_amplitude", K::real, "0.3", {}, "wind-direction drift amplitude (rad)"},
      {"filter.turn_times", K::reals, "8,21,33,47", {}, "turn start times (s)"},
      {"filter.turn_amplitudes", K::reals,
       "1.5707963267948966,-1.5707963267948966,1.5707963267948966,-1.5707963267948966", {},
       "turn amplitudes (rad)"},
      {"filter.turn_duration", K::real, "2", {}, "turn duration (s)"},

      {"aikf.altitude_net", K::text, "", {}, "altitude net file (empty = train in-run)"},
      {"aikf.duration", K::real, "30", {}, "scenario duration (s)"},
      {"aikf.dt", K::real, "0.1", {}, "sample interval (s)"},
      {"aikf.altitude", K::real, "10", {}, "true altitude (m)"},
      {"aikf.cruise_speed", K::real, "30", {}, "cruise speed (m/s)"},
      {"aikf.event_start", K::real, "8", {}, "deceleration start (s)"},
      {"aikf.event_duration", K::real, "3", {}, "deceleration and acceleration duration (s)"},
      {"aikf.gap_duration", K::real, "3", {}, "gap between the events (s)"},
      {"aikf.accel_magnitude", K::real, "8", {}, "acceleration magnitude (m/s^2)"},
      {"aikf.noise_variance", K::real, "0.01", {}, "measurement noise variance"},
      {"aikf.bias", K::real, "0.3", {}, "vertical-acceleration bias in the gap (m/s^2)"},
      {"aikf.z0", K::reals, "2,5,10,20,40", {}, "initial altitude guesses (m)"},
      {"aikf.P0_scale", K::reals, "0.1,1,10", {}, "initial covariance scales"},
      {"aikf.Q_scale", K::reals, "0.1,1,10", {}, "process noise scales"},
      {"aikf.Q_base", K::real, "0.0001", {}, "process noise per unit scale"},
      {"aikf.optic_flow_variance", K::real, "0.001", {}, "filter noise variance of r_x"},
      {"aikf.converged_fraction", K::real, "0.1", {}, "convergence threshold relative to truth"},

      {"compare.accels", K::reals, "0,2,4,8", {}, "acceleration magnitudes (m/s^2)"},
      {"compare.z0", K::reals, "2,5,10,20,40", {}, "initial altitude guesses (m)"},
  };
}

}  // namespace

const std::vector<KeyDef>& config_schema() {
  static const std::vector<KeyDef> schema = build_schema();
  return schema;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string token = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!token.empty()) out.push_back(token);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Config::Config() {
  for (const auto& d : config_schema()) values_[d.key] = d.default_value;
}

const KeyDef& Config::def(const std::string& key) const {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const KeyDef& d) { return d.key == key; });
  if (it == schema.end()) throw ConfigKeyError(key, "unknown config key '" + key + "'");
  return *it;
}

void Config::set(const std::string& key, const std::string& raw) {
  const KeyDef& d = def(key);
  const std::string value = trim(raw);
  auto bad = [&](const std::string& expected) {
    throw ConfigKeyError(key, "config key '" + key + "' expects " + expected + ", got '" + value + "'");
  };
  switch (d.type) {
    case KeyType::integer: {
      long long v = 0;
      if (!parse_integer(value, v)) bad("an integer");
      if (v < 0) bad("a non-negative integer");
      break;
    }
    case KeyType::real: {
      double v = 0.0;
      if (!parse_real(value, v)) bad("a finite number");
      break;
    }
    case KeyType::boolean: {
      bool v = false;
      if (!parse_bool(value, v)) bad("true or false");
      break;
    }
    case KeyType::reals: {
      for (const auto& token : split_list(value)) {
        double v = 0.0;
        if (!parse_real(token, v)) bad("a comma-separated list of numbers");
      }
      break;
    }
    case KeyType::text:
      if (!d.choices.empty() && std::find(d.choices.begin(), d.choices.end(), value) == d.choices.end()) {
        std::string options;
        for (const auto& c : d.choices) options += (options.empty() ? "" : "|") + c;
        bad("one of " + options);
      }
      break;
  }
  values_[key] = value;
}

Config Config::parse(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError("cannot parse config '" + source + "' line " + std::to_string(e.line()) + ": " +
                     e.message());
  }
  Config cfg;
  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigKeyError(section, "config key '" + section + "' in '" + source + "' is outside a section");
    }
    for (const auto& [name, node] : body) {
      if (!node.empty()) throw ConfigKeyError(section + "." + name, "nested config key '" + name + "'");
      const std::string key = section + "." + name;
      if (!seen.insert(key).second) throw ConfigKeyError(key, "config key '" + key + "' given twice");
      cfg.set(key, node.data());
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse(in, path);
}

const std::string& Config::text(const std::string& key) const {
  def(key);
  return values_.at(key);
}

double Config::real(const std::string& key) const {
  double v = 0.0;
  if (def(key).type != KeyType::real || !parse_real(values_.at(key), v)) {
    throw ConfigKeyError(key, "config key '" + key + "' is not a number");
  }
  return v;
}

long long Config::integer(const std::string& key) const {
  long long v = 0;
  if (def(key).type != KeyType::integer || !parse_integer(values_.at(key), v)) {
    throw ConfigKeyError(key, "config key '" + key + "' is not an integer");
  }
  return v;
}

bool Config::flag(const std::string& key) const {
  bool v = false;
  if (def(key).type != KeyType::boolean || !parse_bool(values_.at(key), v)) {
    throw ConfigKeyError(key, "config key '" + key + "' is not a boolean");
  }
  return v;
}

std::vector<double> Config::reals(const std::string& key) const {
  if (def(key).type != KeyType::reals) throw ConfigKeyError(key, "config key '" + key + "' is not a list");
  std::vector<double> out;
  for (const auto& token : split_list(values_.at(key))) {
    double v = 0.0;
    parse_real(token, v);
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const { return split_list(text(key)); }

std::uint64_t Config::seed() const { return static_cast<std::uint64_t>(integer("run.seed")); }

void Config::write(std::ostream& out) const {
  std::string section;
  for (const auto& d : config_schema()) {
    const auto dot = d.key.find('.');
    const std::string s = d.key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    out << d.key.substr(dot + 1) << " = " << values_.at(d.key) << '\n';
  }
}

}  // namespace bounds::cli
