#include "bounds/estimators/datasets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "bounds/dynamics/flying_agents.hpp"
#include "bounds/dynamics/measurements.hpp"
#include "bounds/observability/sliding_window.hpp"

namespace bounds::estimators {
namespace {

constexpr std::string_view kWindCatalogue = "psi,beta,gamma";

std::vector<std::string> window_labels(const std::vector<std::string>& sensors, int window) {
  std::vector<std::string> out;
  for (int k = 0; k < window; ++k) {
    for (const auto& s : sensors) out.push_back(s + "[" + std::to_string(k) + "]");
  }
  return out;
}

EstimatorNet wind_shaped_net(std::uint64_t seed) {
  EstimatorNet net = EstimatorNet::he_initialized(
      {kWindSensors * kWindNetWindow, 64, 64, 64, 1}, seed);
  net.window = kWindNetWindow;
  net.input_labels = window_labels({"psi", "beta", "gamma"}, kWindNetWindow);
  net.frame.reference = 0;
  for (int k = 0; k < kWindNetWindow; ++k) net.frame.relative.push_back(k * kWindSensors);
  return net;
}

dynamics::SystemModel wind_model() {
  return dynamics::make_kinematic_agent({}, dynamics::MeasurementCatalogue::parse(kWindCatalogue));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EstimatorNet make_wind_net(std::uint64_t seed) {
  EstimatorNet net = wind_shaped_net(seed);
  net.output_kind = OutputKind::angle;
  net.frame.shift_output = true;
  return net;
}

EstimatorNet make_wind_observability_net(std::uint64_t seed) {
  EstimatorNet net = wind_shaped_net(seed);
  net.output_kind = OutputKind::linear;
  return net;
}

Vector wind_window(const trajectory::Trajectory& traj, Eigen::Index start) {
  if (start < 0 || start + kWindNetWindow > traj.length()) {
    throw InputError("wind window starting at " + std::to_string(start) +
                     " exceeds the trajectory length " + std::to_string(traj.length()));
  }
  const Vector psi = traj.measurement_column("psi");
  const Vector beta = traj.measurement_column("beta");
  const Vector gamma = traj.measurement_column("gamma");
  Vector out(kWindSensors * kWindNetWindow);
  for (int k = 0; k < kWindNetWindow; ++k) {
    // Body-frame angles are re-wrapped per sample; heading stays unwrapped so
    // that differences within the window are continuous.
    out[k * kWindSensors + 0] = psi[start + k];
    out[k * kWindSensors + 1] = wrap_angle(beta[start + k]);
    out[k * kWindSensors + 2] = wrap_angle(gamma[start + k]);
  }
  return out;
}

void WindDatasetConfig::validate() const {
  if (trajectories <= 0) throw InputError("wind dataset needs at least one trajectory");
  if (!(dt > 0.0)) throw InputError("wind dataset dt must be positive");
  if (observability_window < kWindNetWindow) {
    throw InputError("observability window must cover the wind-net window");
  }
  if (length < observability_window) {
    throw InputError("trajectory length is shorter than the observability window");
  }
  ranges.validate();
  mpc.validate();
}

WindDataset build_wind_dataset(const WindDatasetConfig& config) {
  config.validate();
  const auto model = wind_model();
  observability::SlidingWindowConfig sw;
  sw.omega = config.observability_window;
  sw.epsilon = config.epsilon;
  sw.lambda = config.lambda;
  sw.R_step = config.noise_variance * Matrix::Identity(kWindSensors, kWindSensors);
  sw.threads = static_cast<unsigned>(config.threads);

  const Eigen::Index per_traj = config.length - config.observability_window + 1;
  std::vector<Vector> inputs;
  std::vector<double> targets, variances;
  std::vector<std::int64_t> groups;
  WindDataset out;

  for (int i = 0; i < config.trajectories; ++i) {
    const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    try {
      const auto sp =
          trajectory::generate_random_setpoints(config.ranges, seed, config.length, config.dt);
      Vector base = dynamics::kinematic::default_state();
      base[dynamics::kinematic::z] = 2.0;
      const Vector x0 = mpc::initial_state_from_setpoints(model, sp, base);
      const auto tracked = mpc::solve_tracking(model, sp, x0, config.mpc);
      const auto traj = trajectory::simulate_trajectory(model, x0, tracked.inputs, config.dt, seed);
      const auto sliding = observability::sliding_window_variance(model, traj, sw);
      const Vector var = sliding.series("zeta");
      const Vector zeta = traj.state_column("zeta");
      for (Eigen::Index k = 0; k < per_traj; ++k) {
        inputs.push_back(wind_window(traj, k));
        targets.push_back(wrap_angle(zeta[k]));
        variances.push_back(var[k]);
        groups.push_back(i);
      }
    } catch (const NumericalError& e) {
      out.skipped.push_back("trajectory " + std::to_string(i) + ": " + e.what());
    }
  }

  const auto n = static_cast<Eigen::Index>(inputs.size());
  out.data.inputs.resize(n, kWindSensors * kWindNetWindow);
  out.data.targets.resize(n, 1);
  out.data.observability.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    out.data.inputs.row(r) = inputs[static_cast<std::size_t>(r)].transpose();
    out.data.targets(r, 0) = targets[static_cast<std::size_t>(r)];
    out.data.observability[r] = variances[static_cast<std::size_t>(r)];
  }
  out.data.group = std::move(groups);
  return out;
}

TrainingDataset log_observability_targets(const TrainingDataset& data) {
  if (data.observability.size() != data.size()) {
    throw InputError("dataset has no observability values to use as targets");
  }
  TrainingDataset out = data;
  out.targets.resize(data.size(), 1);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (!(data.observability[i] > 0.0)) throw NumericalError("non-positive variance in dataset");
    out.targets(i, 0) = std::log10(data.observability[i]);
  }
  return out;
}

VariableWindRun simulate_variable_wind(const VariableWindScenario& s,
                                       const mpc::MpcConfig& mpc_config) {
  if (!(s.dt > 0.0) || !(s.duration > 0.0)) throw InputError("scenario needs positive dt and duration");
  if (s.turn_times.size() != s.turn_amplitudes.size()) {
    throw InputError("turn_times and turn_amplitudes differ in length");
  }
  if (!(s.wind_period > 0.0)) throw InputError("wind period must be positive");
  if (!(s.wind_speed - std::abs(s.wind_speed_amplitude) >= 0.0)) {
    throw InputError("wind speed would become negative");
  }
  const auto length = static_cast<Eigen::Index>(std::llround(s.duration / s.dt)) + 1;
  trajectory::MotifBaseline base;
  base.speed = s.speed;
  base.heading = s.heading;
  base.altitude = s.altitude;
  base.wind_speed = s.wind_speed;
  base.wind_direction = s.wind_direction;
  std::vector<trajectory::MotifSpec> motifs;
  for (std::size_t i = 0; i < s.turn_times.size(); ++i) {
    motifs.push_back({trajectory::MotifKind::heading_turn, s.turn_amplitudes[i], s.turn_duration,
                      s.turn_times[i]});
  }
  auto sp = trajectory::generate_motif_sequence(motifs, base, length, s.dt);
  Vector w(length), zeta(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) * s.dt / s.wind_period;
    w[k] = s.wind_speed + s.wind_speed_amplitude * std::sin(phase);
    zeta[k] = s.wind_direction + s.wind_direction_amplitude * std::sin(phase);
  }
  sp.channels["w"] = w;
  sp.channels["zeta"] = zeta;

  const auto model = wind_model();
  Vector x0 = mpc::initial_state_from_setpoints(model, sp, dynamics::kinematic::default_state());
  const auto tracked = mpc::solve_tracking(model, sp, x0, mpc_config);
  return {trajectory::simulate_trajectory(model, x0, tracked.inputs, s.dt, 0), std::move(sp)};
}

std::vector<FilterSeriesRow> run_observability_filter(const trajectory::Trajectory& traj,
                                                      const EstimatorNet& wind_net,
                                                      const Vector& variance_per_window,
                                                      const AlphaMapping& mapping) {
  const Eigen::Index windows = traj.length() - kWindNetWindow + 1;
  if (windows <= 0) throw InputError("trajectory shorter than the wind-net window");
  if (variance_per_window.size() < windows) {
    throw InputError("need a variance for each of the " + std::to_string(windows) + " windows");
  }
  Matrix batch(windows, kWindSensors * kWindNetWindow);
  for (Eigen::Index k = 0; k < windows; ++k) batch.row(k) = wind_window(traj, k).transpose();
  const Matrix raw = wind_net.forward_batch(batch);
  const Vector zeta = traj.state_column("zeta");

  ObservabilityFilterState state(true, mapping);
  std::vector<FilterSeriesRow> rows;
  for (Eigen::Index k = 0; k < windows; ++k) {
    const double alpha = alpha_from_observability(variance_per_window[k], mapping);
    const double raw_k = wrap_angle(raw(k, 0));
    const double filtered = state.step(raw_k, alpha);
    const Eigen::Index last = k + kWindNetWindow - 1;
    rows.push_back({traj.time(last), wrap_angle(zeta[last]), raw_k, filtered, alpha});
  }
  return rows;
}

EstimatorNet make_altitude_net(std::uint64_t seed) {
  EstimatorNet net = EstimatorNet::he_initialized({2 * kAltitudeNetWindow, 64, 64, 64, 1}, seed);
  net.window = kAltitudeNetWindow;
  net.input_labels = window_labels({"r_x", "vdot_x"}, kAltitudeNetWindow);
  net.output_kind = OutputKind::linear;
  return net;
}

TrainingDataset build_altitude_dataset(const AltitudeDatasetConfig& config) {
  if (config.trajectories <= 0) throw InputError("altitude dataset needs at least one trajectory");
  if (config.length < kAltitudeNetWindow + 1) {
    throw InputError("altitude trajectories must be longer than the window");
  }
  if (!(config.altitude.low > 0.0) || !(config.altitude.high >= config.altitude.low)) {
    throw InputError("altitude range must be positive");
  }
  const Eigen::Index per_traj = config.length - kAltitudeNetWindow;
  const Eigen::Index n = per_traj * config.trajectories;
  TrainingDataset out;
  out.inputs.resize(n, 2 * kAltitudeNetWindow);
  out.targets.resize(n, 1);
  out.group.reserve(static_cast<std::size_t>(n));

  Eigen::Index row = 0;
  for (int i = 0; i < config.trajectories; ++i) {
    const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> alt(config.altitude.low, config.altitude.high);
    const double z = alt(rng);
    const Vector vx = trajectory::sum_of_sines_velocity(config.velocity, seed ^ 0x5EEDULL,
                                                        config.length, config.dt);
    // Zero-order-hold accelerations reproduce the sampled velocity exactly.
    Vector accel(config.length);
    for (Eigen::Index k = 0; k + 1 < config.length; ++k) accel[k] = (vx[k + 1] - vx[k]) / config.dt;
    accel[config.length - 1] = accel[config.length - 2];
    // Window ending at sample k uses samples k - window + 1 .. k.
    for (Eigen::Index k = kAltitudeNetWindow; k < config.length; ++k) {
      for (int j = 0; j < kAltitudeNetWindow; ++j) {
        const Eigen::Index s = k - kAltitudeNetWindow + 1 + j;
        out.inputs(row, 2 * j) = vx[s] / z;
        out.inputs(row, 2 * j + 1) = accel[s];
      }
      out.targets(row, 0) = z;
      out.group.push_back(i);
      ++row;
    }
  }
  return out;
}

void fit_input_normalization(EstimatorNet& net, const Matrix& inputs) {
  net.frame.shift.resize(0);
  net.frame.scale.resize(0);
  const Matrix framed = net.frame_inputs(inputs);
  if (framed.rows() == 0) throw InputError("cannot fit normalization on an empty input set");
  const Vector mean = framed.colwise().mean().transpose();
  Vector scale(framed.cols());
  for (Eigen::Index j = 0; j < framed.cols(); ++j) {
    const double var = (framed.col(j).array() - mean[j]).square().mean();
    scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  net.frame.shift = mean;
  net.frame.scale = scale;
}

}  // namespace bounds::estimators
