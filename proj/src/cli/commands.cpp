#include "bounds/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bounds/aikf/comparison.hpp"
#include "bounds/cli/svg.hpp"
#include "bounds/dynamics/flying_agents.hpp"
#include "bounds/estimators/recipes.hpp"
#include "bounds/mpc/mpc.hpp"
#include "bounds/observability/sliding_window.hpp"
#include "bounds/trajectory/csv.hpp"

namespace bounds::cli {

namespace fs = std::filesystem;

namespace {

using trajectory::format_double;

struct Outputs {
  fs::path dir;
  std::uint64_t seed = 0;
  std::ostream* log = nullptr;
  std::vector<fs::path> written;

  fs::path file(const std::string& name) {
    written.push_back(dir / name);
    *log << "wrote " << written.back().string() << '\n';
    return written.back();
  }
  std::ofstream open(const std::string& name) {
    const auto path = file(name);
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    return out;
  }
  void stamp(std::ostream& out) const { out << "# bounds " << kVersion << " seed=" << seed << '\n'; }
};

Eigen::Index sample_count(double duration, double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) throw InputError("trajectory needs positive dt and duration");
  const double steps = duration / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw InputError("trajectory duration " + format_double(duration) + " is not a multiple of dt " +
                     format_double(dt));
  }
  return static_cast<Eigen::Index>(std::llround(steps)) + 1;
}

mpc::MpcConfig mpc_config(const Config& cfg) {
  mpc::MpcConfig m;
  m.horizon = static_cast<int>(cfg.integer("mpc.horizon"));
  m.max_iterations = static_cast<int>(cfg.integer("mpc.max_iterations"));
  m.accept_best_on_cap = cfg.flag("mpc.accept_best_on_cap");
  m.default_input_weight = cfg.real("mpc.input_weight");
  return m;
}

unsigned threads(const Config& cfg) { return static_cast<unsigned>(cfg.integer("run.threads")); }

Vector default_state(const Config& cfg) {
  const std::string kind = cfg.text("model.kind");
  if (kind == "kinematic") return dynamics::kinematic::default_state();
  if (kind == "dynamic") {
    dynamics::drone::Params p;
    p.mass = cfg.real("model.mass");
    p.drag = cfg.real("model.drag");
    return dynamics::drone::default_state(p);
  }
  Vector x(dynamics::planar::kStateDim);
  x << cfg.real("trajectory.altitude"), 0.0, cfg.real("trajectory.speed");
  return x;
}

void stamped_net(Outputs& out, const std::string& name, const estimators::EstimatorNet& net) {
  auto f = out.open(name);
  out.stamp(f);
  net.save(f);
}

void curve(Outputs& out, const std::string& name, const estimators::TrainingResult& result) {
  estimators::write_training_curve_csv(out.file(name).string(), result.curve, out.seed);
}

// --- training recipes scaled by the config -------------------------------

estimators::WindFilterRecipe wind_recipe(const Config& cfg) {
  estimators::WindFilterRecipe r;
  const std::uint64_t seed = cfg.seed();
  r.data.seed += seed;
  r.data.threads = static_cast<int>(threads(cfg));
  r.wind_train.seed += seed;
  r.observability_train.seed += seed;
  r.wind_net_seed += seed;
  r.observability_net_seed += seed;
  if (cfg.flag("train.desk_scale")) {
    r.data.trajectories = 1000;
    r.wind_train.epochs = 200;
    r.observability_train.epochs = 50;
    r.observability_samples = 0;
  }
  if (const auto n = cfg.integer("train.trajectories")) r.data.trajectories = static_cast<int>(n);
  if (const auto e = cfg.integer("train.epochs")) {
    r.wind_train.epochs = static_cast<int>(e);
    r.observability_train.epochs = static_cast<int>(e);
  }
  r.mapping = {cfg.real("filter.v_low"), cfg.real("filter.v_high")};
  return r;
}

aikf::AltitudeNetRecipe altitude_recipe(const Config& cfg) {
  aikf::AltitudeNetRecipe r;
  const std::uint64_t seed = cfg.seed();
  r.data.seed += seed;
  r.train.seed += seed;
  r.net_seed += seed;
  r.split_seed += seed;
  if (cfg.flag("train.desk_scale")) {
    r.data.trajectories = 500;
    r.train.epochs = 30;
  }
  if (const auto n = cfg.integer("train.trajectories")) r.data.trajectories = static_cast<int>(n);
  if (const auto e = cfg.integer("train.epochs")) r.train.epochs = static_cast<int>(e);
  return r;
}

estimators::WindFilterNets train_wind(const Config& cfg, std::ostream& log) {
  const auto recipe = wind_recipe(cfg);
  log << "building wind dataset (" << recipe.data.trajectories << " trajectories)\n";
  const auto dataset = estimators::build_wind_dataset(recipe.data);
  log << "  " << dataset.data.size() << " samples, " << dataset.skipped.size() << " trajectories skipped\n";
  log << "training wind and observability nets\n";
  auto nets = estimators::train_wind_filter_nets(dataset.data, recipe);
  log << "  observability net within one order of magnitude: " << format_double(nets.within_one_order) << '\n';
  return nets;
}

estimators::TrainingResult train_altitude(const Config& cfg, std::ostream& log) {
  const auto recipe = altitude_recipe(cfg);
  log << "training altitude net (" << recipe.data.trajectories << " trajectories, " << recipe.train.epochs
      << " epochs)\n";
  return aikf::train_altitude_net(recipe);
}

// --- commands ------------------------------------------------------------

void cmd_simulate(const Config& cfg, Outputs& out) {
  const auto model = build_model(cfg);
  const auto traj = build_trajectory(cfg, model);
  trajectory::export_csv(traj, out.file("trajectory.csv").string());
}

void cmd_observability(const Config& cfg, Outputs& out) {
  const auto model = build_model(cfg);
  const auto traj = build_trajectory(cfg, model);
  if (cfg.text("trajectory.source") != "csv") trajectory::export_csv(traj, out.file("trajectory.csv").string());

  observability::SlidingWindowConfig sw;
  sw.omega = static_cast<int>(cfg.integer("observability.omega"));
  sw.epsilon = cfg.real("observability.epsilon");
  sw.lambda = cfg.real("observability.lambda");
  const auto p = static_cast<Eigen::Index>(model.measurement_dim());
  sw.R_step = cfg.real("observability.noise_variance") * Matrix::Identity(p, p);
  sw.sensors = cfg.words("observability.sensors");
  sw.allow_one_sided = cfg.flag("observability.allow_one_sided");
  sw.threads = threads(cfg);
  if (cfg.text("observability.transform") == "polar") {
    sw.transform = observability::polar_velocity_transform(model.state_labels());
  }
  const auto result = observability::sliding_window_variance(model, traj, sw);
  {
    auto f = out.open("variance.csv");
    out.stamp(f);
    observability::write_variance_csv(result, f);
  }
  if (cfg.flag("observability.svg")) {
    LinePlot plot;
    plot.title = "Minimum error variance (omega = " + std::to_string(sw.omega) + ")";
    plot.x_label = "time (s, window centre)";
    plot.y_label = "variance";
    plot.log_y = true;
    auto names = cfg.words("observability.plot_states");
    if (names.empty()) names = label_names(result.labels);
    Vector t(static_cast<Eigen::Index>(result.windows.size()));
    for (std::size_t k = 0; k < result.windows.size(); ++k) {
      t[static_cast<Eigen::Index>(k)] = result.windows[k].t_display;
    }
    for (const auto& n : names) plot.series.push_back({n, t, result.series(n)});
    write_svg_file(plot, out.file("variance.svg").string());
  }
}

void cmd_train(const Config& cfg, Outputs& out) {
  const std::string target = cfg.text("train.target");
  if (target == "wind") {
    const auto nets = train_wind(cfg, *out.log);
    stamped_net(out, "wind_net.txt", nets.wind.net);
    stamped_net(out, "observability_net.txt", nets.observability.net);
    curve(out, "wind_curve.csv", nets.wind);
    curve(out, "observability_curve.csv", nets.observability);
  } else if (target == "altitude") {
    const auto result = train_altitude(cfg, *out.log);
    stamped_net(out, "altitude_net.txt", result.net);
    curve(out, "altitude_curve.csv", result);
  } else {
    estimators::WindDatasetConfig data;
    data.seed += cfg.seed();
    data.threads = static_cast<int>(threads(cfg));
    estimators::BinStudyConfig study;
    study.train.seed += cfg.seed();
    study.net_seed += cfg.seed();
    if (cfg.flag("train.desk_scale")) {
      data.trajectories = 1000;
      study.train.epochs = 100;
    }
    if (const auto n = cfg.integer("train.trajectories")) data.trajectories = static_cast<int>(n);
    if (const auto e = cfg.integer("train.epochs")) study.train.epochs = static_cast<int>(e);
    *out.log << "building wind dataset (" << data.trajectories << " trajectories)\n";
    const auto dataset = estimators::build_wind_dataset(data);
    *out.log << "training " << study.bins << " bin nets\n";
    const auto r = estimators::run_bin_study(dataset.data, study);
    auto f = out.open("bins.csv");
    out.stamp(f);
    f << "bin,mean_log10_variance,error_variance\n";
    for (Eigen::Index b = 0; b < r.bin_error_variance.size(); ++b) {
      f << b << ',' << format_double(r.bin_mean_log_variance[b]) << ',' << format_double(r.bin_error_variance[b])
        << '\n';
    }
    auto s = out.open("bins_summary.csv");
    out.stamp(s);
    s << "rank_correlation,top_on_top,bottom_on_top\n"
      << format_double(r.rank_correlation) << ',' << format_double(r.top_on_top) << ','
      << format_double(r.bottom_on_top) << '\n';
  }
}

void cmd_filter(const Config& cfg, Outputs& out) {
  estimators::VariableWindScenario sc;
  sc.duration = cfg.real("filter.duration");
  sc.speed = cfg.real("filter.speed");
  sc.wind_speed = cfg.real("filter.wind_speed");
  sc.wind_direction = cfg.real("filter.wind_direction");
  sc.wind_direction_amplitude = cfg.real("filter.wind_direction_amplitude");
  sc.turn_times = cfg.reals("filter.turn_times");
  sc.turn_amplitudes = cfg.reals("filter.turn_amplitudes");
  sc.turn_duration = cfg.real("filter.turn_duration");
  const bool use_net_variance = cfg.text("filter.variance_source") == "net";

  std::optional<estimators::EstimatorNet> wind_net, obs_net;
  if (!cfg.text("filter.wind_net").empty()) {
    wind_net = estimators::EstimatorNet::load_file(cfg.text("filter.wind_net"));
  }
  if (use_net_variance && !cfg.text("filter.observability_net").empty()) {
    obs_net = estimators::EstimatorNet::load_file(cfg.text("filter.observability_net"));
  }
  if (!wind_net || (use_net_variance && !obs_net)) {
    const auto nets = train_wind(cfg, *out.log);
    if (!wind_net) {
      wind_net = nets.wind.net;
      stamped_net(out, "wind_net.txt", *wind_net);
    }
    if (use_net_variance && !obs_net) {
      obs_net = nets.observability.net;
      stamped_net(out, "observability_net.txt", *obs_net);
    }
  }
  if (wind_net->input_size() != estimators::kWindSensors * estimators::kWindNetWindow) {
    throw InputError("wind net expects " + std::to_string(wind_net->input_size()) + " inputs, not a wind net");
  }

  const auto run = estimators::simulate_variable_wind(sc, mpc_config(cfg));
  Vector variance;
  if (use_net_variance) {
    variance = estimators::predicted_variance_series(*obs_net, run.trajectory);
  } else {
    // Model-based variance over the net's own window.
    const auto model = dynamics::make_kinematic_agent({}, dynamics::MeasurementCatalogue::parse("psi,beta,gamma"));
    observability::SlidingWindowConfig sw;
    sw.omega = estimators::kWindNetWindow;
    sw.epsilon = cfg.real("observability.epsilon");
    sw.lambda = cfg.real("observability.lambda");
    sw.R_step = cfg.real("observability.noise_variance") * Matrix::Identity(3, 3);
    sw.threads = threads(cfg);
    variance = observability::sliding_window_variance(model, run.trajectory, sw).series("zeta");
  }
  const estimators::AlphaMapping mapping{cfg.real("filter.v_low"), cfg.real("filter.v_high")};
  const auto rows = estimators::run_observability_filter(run.trajectory, *wind_net, variance, mapping);

  auto f = out.open("filter.csv");
  out.stamp(f);
  f << "t,zeta_true,zeta_raw,zeta_filtered,alpha\n";
  const auto n = static_cast<Eigen::Index>(rows.size());
  Vector t(n), truth(n), raw(n), filtered(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    f << format_double(r.t) << ',' << format_double(r.zeta_true) << ',' << format_double(r.zeta_raw) << ','
      << format_double(r.zeta_filtered) << ',' << format_double(r.alpha) << '\n';
    t[i] = r.t;
    truth[i] = r.zeta_true;
    raw[i] = r.zeta_raw;
    filtered[i] = r.zeta_filtered;
  }
  LinePlot plot;
  plot.title = "Wind direction";
  plot.x_label = "time (s)";
  plot.y_label = "zeta (rad)";
  plot.series = {{"true", t, truth}, {"raw", t, raw}, {"filtered", t, filtered}};
  write_svg_file(plot, out.file("filter.svg").string());
}

aikf::AltitudeScenario altitude_scenario(const Config& cfg) {
  aikf::AltitudeScenario s;
  s.duration = cfg.real("aikf.duration");
  s.dt = cfg.real("aikf.dt");
  s.altitude = cfg.real("aikf.altitude");
  s.cruise_speed = cfg.real("aikf.cruise_speed");
  s.event_start = cfg.real("aikf.event_start");
  s.event_duration = cfg.real("aikf.event_duration");
  s.gap_duration = cfg.real("aikf.gap_duration");
  s.accel_magnitude = cfg.real("aikf.accel_magnitude");
  s.noise_variance = cfg.real("aikf.noise_variance");
  s.bias = cfg.real("aikf.bias");
  s.seed = cfg.seed();
  s.validate();
  return s;
}

aikf::FilterSettings filter_settings(const Config& cfg) {
  aikf::FilterSettings s;
  s.Q_base = cfg.real("aikf.Q_base");
  s.optic_flow_variance = cfg.real("aikf.optic_flow_variance");
  return s;
}

std::shared_ptr<const estimators::EstimatorNet> altitude_net(const Config& cfg, Outputs& out) {
  if (!cfg.text("aikf.altitude_net").empty()) {
    auto net = estimators::EstimatorNet::load_file(cfg.text("aikf.altitude_net"));
    if (net.input_size() != 2 * estimators::kAltitudeNetWindow) {
      throw InputError("altitude net expects " + std::to_string(net.input_size()) + " inputs, not an altitude net");
    }
    return std::make_shared<const estimators::EstimatorNet>(std::move(net));
  }
  auto result = train_altitude(cfg, *out.log);
  stamped_net(out, "altitude_net.txt", result.net);
  return std::make_shared<const estimators::EstimatorNet>(std::move(result.net));
}

void cmd_aikf(const Config& cfg, Outputs& out) {
  const auto scenario = altitude_scenario(cfg);
  const auto net = altitude_net(cfg, out);
  const auto run = aikf::simulate_altitude_scenario(scenario);
  aikf::ComparisonGrid grid;
  grid.z0 = cfg.reals("aikf.z0");
  grid.P0_scale = cfg.reals("aikf.P0_scale");
  grid.Q_scale = cfg.reals("aikf.Q_scale");
  grid.settings = filter_settings(cfg);
  grid.converged_fraction = cfg.real("aikf.converged_fraction");
  const auto spec = aikf::altitude_augmentation(net, 0.0, std::max(scenario.accel_magnitude, 1e-9));
  const auto rows = aikf::run_comparison(run, grid, spec);
  aikf::write_comparison_csv(out.file("comparison.csv").string(), rows, out.seed);
  int failed = 0;
  for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
  if (failed) *out.log << failed << " filter runs failed (NaN rows)\n";
}

void cmd_compare(const Config& cfg, Outputs& out) {
  const auto scenario = altitude_scenario(cfg);
  const auto net = altitude_net(cfg, out);
  const auto rows = aikf::run_accel_sweep(scenario, cfg.reals("compare.accels"), cfg.reals("compare.z0"),
                                          filter_settings(cfg), net);
  auto f = out.open("sweep.csv");
  out.stamp(f);
  f << "accel,z0,median_err_ukf,median_err_aikf,ratio\n";
  for (const auto& r : rows) {
    f << format_double(r.accel) << ',' << format_double(r.z0) << ',' << format_double(r.median_err_ukf) << ','
      << format_double(r.median_err_aikf) << ',' << format_double(r.median_err_aikf / r.median_err_ukf) << '\n';
  }
}

std::string error_line(const std::string& kind, int code, const std::string& message, const std::string& key) {
  nlohmann::json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  if (!key.empty()) j["key"] = key;
  return j.dump();
}

}  // namespace

dynamics::SystemModel build_model(const Config& cfg) {
  const auto catalogue = dynamics::MeasurementCatalogue::parse(cfg.text("model.sensors"));
  const std::string kind = cfg.text("model.kind");
  if (kind == "kinematic") {
    dynamics::kinematic::Params p;
    p.drag = cfg.real("model.drag");
    return dynamics::make_kinematic_agent(p, catalogue);
  }
  if (kind == "dynamic") {
    dynamics::drone::Params p;
    p.mass = cfg.real("model.mass");
    p.drag = cfg.real("model.drag");
    return dynamics::make_dynamic_agent(p, catalogue);
  }
  return dynamics::make_planar_model(catalogue);
}

std::vector<trajectory::MotifSpec> parse_motifs(const std::string& text) {
  std::vector<trajectory::MotifSpec> motifs;
  for (const auto& item : split_list(text)) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (auto colon = item.find(':'); ; colon = item.find(':', pos)) {
      parts.push_back(item.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos));
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
    if (parts.size() != 4) {
      throw ConfigKeyError("trajectory.motifs", "motif '" + item + "' must be kind:amplitude:duration:start");
    }
    trajectory::MotifSpec m;
    m.kind = trajectory::motif_kind_from_string(parts[0]);
    try {
      m.amplitude = std::stod(parts[1]);
      m.duration = std::stod(parts[2]);
      m.start_time = std::stod(parts[3]);
    } catch (const std::exception&) {
      throw ConfigKeyError("trajectory.motifs", "motif '" + item + "' has a non-numeric field");
    }
    motifs.push_back(m);
  }
  return motifs;
}

trajectory::Trajectory build_trajectory(const Config& cfg, const dynamics::SystemModel& model) {
  const std::string source = cfg.text("trajectory.source");
  if (source == "csv") {
    const std::string path = cfg.text("trajectory.csv");
    if (path.empty()) throw ConfigKeyError("trajectory.csv", "trajectory.source = csv needs trajectory.csv");
    trajectory::CsvSchema schema;
    schema.states = model.state_labels();
    schema.inputs = model.input_labels();
    schema.measurements = model.measurement_labels();
    return trajectory::ingest_csv(path, schema);
  }
  const double dt = cfg.real("trajectory.dt");
  const Eigen::Index K = sample_count(cfg.real("trajectory.duration"), dt);
  trajectory::SetpointSeries setpoints;
  if (source == "motifs") {
    trajectory::MotifBaseline base;
    base.speed = cfg.real("trajectory.speed");
    base.heading = cfg.real("trajectory.heading");
    base.course_offset = cfg.real("trajectory.course_offset");
    base.altitude = cfg.real("trajectory.altitude");
    base.wind_speed = cfg.real("trajectory.wind_speed");
    base.wind_direction = cfg.real("trajectory.wind_direction");
    setpoints = trajectory::generate_motif_sequence(parse_motifs(cfg.text("trajectory.motifs")), base, K, dt);
  } else {
    setpoints = trajectory::generate_random_setpoints({}, estimators::derive_seed(cfg.seed(), 0), K, dt);
  }
  const Vector x0 = mpc::initial_state_from_setpoints(model, setpoints, default_state(cfg));
  const auto tracked = mpc::solve_tracking(model, setpoints, x0, mpc_config(cfg));
  return trajectory::simulate_trajectory(model, x0, tracked.inputs, dt, cfg.seed());
}

std::vector<fs::path> run_command(const std::string& command, const Config& cfg, std::ostream& log) {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw InputError("unknown command '" + command + "'");
  }
  Outputs out;
  out.dir = cfg.text("run.out");
  out.seed = cfg.seed();
  out.log = &log;
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) throw InputError("cannot create output directory '" + out.dir.string() + "': " + ec.message());
  {
    auto f = out.open("resolved_config.ini");
    f << "# bounds " << kVersion << " command=" << command << '\n';
    cfg.write(f);
  }
  if (command == "simulate") cmd_simulate(cfg, out);
  else if (command == "observability") cmd_observability(cfg, out);
  else if (command == "train") cmd_train(cfg, out);
  else if (command == "filter") cmd_filter(cfg, out);
  else if (command == "aikf") cmd_aikf(cfg, out);
  else cmd_compare(cfg, out);
  return out.written;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Observability bounds toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, out_dir, sensors;
  std::optional<long long> seed, thread_count;
  std::vector<std::string> overrides;
  bool desk_scale = false;
  app.add_option("--config", config_path, "scenario file (INI)");
  app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--out", out_dir, "output directory (overrides run.out)");
  app.add_option("--sensors", sensors, "sensor subset for observability (overrides observability.sensors)");
  app.add_option("--threads", thread_count, "worker threads (overrides run.threads)");
  app.add_option("--set", overrides, "section.key=value override (repeatable)");
  app.add_flag("--desk-scale", desk_scale, "reduced training scale");
  const std::map<std::string, std::string> blurbs = {
      {"simulate", "track setpoints with the MPC and write trajectory.csv"},
      {"observability", "sliding-window minimum error variance (variance.csv, variance.svg)"},
      {"train", "train the wind, altitude or observability-bin estimators"},
      {"filter", "observability filter on the variable-wind demonstration"},
      {"aikf", "UKF vs AI-UKF altitude comparison grid"},
      {"compare", "UKF vs AI-UKF error across acceleration magnitudes"}};
  for (const auto& c : kCommands) app.add_subcommand(c, blurbs.at(c));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_line("usage", kExitInput, e.what(), "") << '\n';
    return kExitInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Config cfg = config_path.empty() ? Config() : Config::load(config_path);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw InputError("--set expects section.key=value, got '" + o + "'");
      cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (seed) cfg.set("run.seed", std::to_string(*seed));
    if (thread_count) cfg.set("run.threads", std::to_string(*thread_count));
    if (!out_dir.empty()) cfg.set("run.out", out_dir);
    if (!sensors.empty()) cfg.set("observability.sensors", sensors);
    if (desk_scale) cfg.set("train.desk_scale", "true");
    run_command(command, cfg, out);
    return kExitOk;
  } catch (const ConfigKeyError& e) {
    err << error_line("input", kExitInput, e.what(), e.key) << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << error_line("input", kExitInput, e.what(), "") << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << error_line("runtime", kExitRuntime, e.what(), "") << '\n';
    return kExitRuntime;
  }
}

}  // namespace bounds::cli
