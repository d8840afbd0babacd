#include "bounds/aikf/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "bounds/dynamics/flying_agents.hpp"
#include "bounds/dynamics/measurements.hpp"

namespace bounds::aikf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Index index_of(double t, double dt) { return static_cast<Eigen::Index>(std::llround(t / dt)); }

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void AltitudeScenario::validate() const {
  if (!(dt > 0.0) || !(duration > dt)) throw InputError("altitude scenario needs 0 < dt < duration");
  if (!(altitude > 0.0)) throw InputError("altitude scenario needs a positive altitude");
  if (!(event_start >= 0.0) || !(event_duration > 0.0) || !(gap_duration >= 0.0)) {
    throw InputError("altitude scenario event timing must be non-negative");
  }
  if (event_end() > duration) throw InputError("altitude scenario events run past the duration");
  if (!(accel_magnitude >= 0.0)) throw InputError("altitude scenario acceleration must be non-negative");
  if (cruise_speed - accel_magnitude * event_duration <= 0.0) {
    throw InputError("altitude scenario deceleration would stop or reverse the agent");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(bias)) {
    throw InputError("altitude scenario noise settings are invalid");
  }
}

dynamics::SystemModel altitude_filter_model() {
  return dynamics::make_planar_model(dynamics::MeasurementCatalogue::parse("r_x"));
}

AltitudeRun simulate_altitude_scenario(const AltitudeScenario& s) {
  s.validate();
  using namespace dynamics::planar;
  const Eigen::Index K = index_of(s.duration, s.dt) + 1;
  const Eigen::Index decel0 = index_of(s.event_start, s.dt);
  const Eigen::Index decel1 = index_of(s.event_start + s.event_duration, s.dt);
  const Eigen::Index accel0 = index_of(s.event_start + s.event_duration + s.gap_duration, s.dt);
  const Eigen::Index accel1 = index_of(s.event_end(), s.dt);

  AltitudeRun run;
  run.t = Vector::LinSpaced(K, 0.0, static_cast<double>(K - 1) * s.dt);
  run.inputs = Matrix::Zero(K, kInputDim);
  for (Eigen::Index k = decel0; k < decel1; ++k) run.inputs(k, u_x) = -s.accel_magnitude;
  for (Eigen::Index k = accel0; k < accel1; ++k) run.inputs(k, u_x) = s.accel_magnitude;

  const auto model = altitude_filter_model();
  Vector x0(kStateDim);
  x0 << s.altitude, 0.0, s.cruise_speed;
  run.states = dynamics::simulate(model, x0, run.inputs.topRows(K - 1), s.dt);

  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(s.noise_variance));
  run.measured_inputs = run.inputs;
  run.optic_flow.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    run.optic_flow[k] = model.measure(run.states.row(k).transpose(), run.inputs.row(k).transpose())[0] + noise(rng);
    run.measured_inputs(k, u_z) += noise(rng);
    run.measured_inputs(k, u_x) += noise(rng);
    if (k >= decel1 && k < accel0) run.measured_inputs(k, u_z) += s.bias;
  }
  run.event_end = s.event_end();
  return run;
}

std::string_view to_string(FilterKind kind) { return kind == FilterKind::ukf ? "ukf" : "aikf"; }

FilterTrace run_altitude_filter(const AltitudeRun& run, FilterKind kind, const FilterInit& init,
                                const FilterSettings& settings, const AugmentationSpec* spec) {
  using namespace dynamics::planar;
  if (kind == FilterKind::aikf && (!spec || !spec->net)) {
    throw InputError("the augmented filter needs an estimator network");
  }
  if (!(init.z0 > 0.0)) throw InputError("initial altitude guess must be positive");
  if (!(init.P0_scale > 0.0) || !(init.Q_scale >= 0.0)) throw InputError("filter scales must be positive");
  const auto model = altitude_filter_model();
  const Eigen::Index K = run.t.size();
  const double dt = run.t[1] - run.t[0];

  Vector x0(kStateDim);
  x0 << init.z0, 0.0, run.optic_flow[0] * init.z0;
  const Matrix P0 = (init.P0_scale * settings.P0_base).asDiagonal();
  const Matrix Q = init.Q_scale * settings.Q_base * Matrix::Identity(kStateDim, kStateDim);
  const Matrix R = Matrix::Constant(1, 1, settings.optic_flow_variance);
  FilterState fs = FilterState::make(x0, P0, Q, R);

  const Eigen::Index window = kind == FilterKind::aikf ? spec->net->window : 1;
  EstimatorWindow buffer(std::max<Eigen::Index>(window, 1), 2);
  auto push = [&](Eigen::Index k) {
    buffer.push((Vector(2) << run.optic_flow[k], run.measured_inputs(k, u_x)).finished());
  };

  FilterTrace trace;
  trace.means.resize(K, kStateDim);
  trace.variances.resize(K, kStateDim);
  trace.augmented_estimate = Vector::Constant(K, kNaN);
  trace.augmented_variance = Vector::Constant(K, kNaN);
  trace.means.row(0) = fs.mean.transpose();
  trace.variances.row(0) = fs.covariance().diagonal().transpose();
  push(0);
  for (Eigen::Index k = 1; k < K; ++k) {
    const Vector u = run.measured_inputs.row(k - 1).transpose();
    const Vector y = Vector::Constant(1, run.optic_flow[k]);
    push(k);
    if (kind == FilterKind::ukf) {
      fs = ukf_step(fs, model, u, y, dt);
    } else {
      AugmentationInfo info;
      fs = aikf_step(fs, model, u, y, dt, buffer, *spec, &info);
      if (info.applied) {
        trace.augmented_estimate[k] = info.estimate;
        trace.augmented_variance[k] = info.variance;
      }
    }
    trace.means.row(k) = fs.mean.transpose();
    trace.variances.row(k) = fs.covariance().diagonal().transpose();
  }
  return trace;
}

std::vector<ComparisonRow> run_comparison(const AltitudeRun& run, const ComparisonGrid& grid,
                                          const AugmentationSpec& spec) {
  using namespace dynamics::planar;
  if (grid.z0.empty() || grid.P0_scale.empty() || grid.Q_scale.empty()) {
    throw InputError("comparison grid axes must not be empty");
  }
  const Eigen::Index K = run.t.size();
  const double dt = run.t[1] - run.t[0];
  const Eigen::Index first = std::min<Eigen::Index>(index_of(run.event_end, dt), K - 1);

  std::vector<ComparisonRow> rows;
  int run_id = 0;
  for (double q : grid.Q_scale) {
    for (double p : grid.P0_scale) {
      for (double z0 : grid.z0) {
        for (FilterKind kind : {FilterKind::ukf, FilterKind::aikf}) {
          ComparisonRow row;
          row.run_id = run_id;
          row.filter = kind;
          row.z0 = z0;
          row.P0_scale = p;
          row.Q_scale = q;
          try {
            const FilterTrace trace = run_altitude_filter(run, kind, {z0, p, q}, grid.settings, &spec);
            std::vector<double> ez, ev;
            for (Eigen::Index k = first; k < K; ++k) {
              ez.push_back(std::abs(trace.means(k, z) - run.states(k, z)));
              ev.push_back(std::abs(trace.means(k, vx) - run.states(k, vx)));
            }
            row.median_err_z = median(ez);
            row.median_err_vx = median(ev);
            row.converged = row.median_err_z <= grid.converged_fraction * run.states(first, z);
          } catch (const Error& e) {
            row.median_err_z = kNaN;
            row.median_err_vx = kNaN;
            row.converged = false;
            row.error = e.what();
          }
          rows.push_back(std::move(row));
        }
        ++run_id;
      }
    }
  }
  return rows;
}

AugmentationSpec altitude_augmentation(std::shared_ptr<const estimators::EstimatorNet> net,
                                       double accel_min, double accel_max) {
  AugmentationSpec spec;
  spec.net = std::move(net);
  spec.state_index = dynamics::planar::z;
  spec.accel_min = accel_min;
  spec.accel_max = accel_max;
  spec.accel_feature = 1;
  spec.validate();
  return spec;
}

std::vector<AccelSweepRow> run_accel_sweep(const AltitudeScenario& base, const std::vector<double>& accels,
                                           const std::vector<double>& z0, const FilterSettings& settings,
                                           std::shared_ptr<const estimators::EstimatorNet> net) {
  if (accels.empty() || z0.empty()) throw InputError("acceleration sweep axes must not be empty");
  const double largest = *std::max_element(accels.begin(), accels.end());
  if (!(largest > 0.0)) throw InputError("acceleration sweep needs a positive magnitude");
  std::vector<AccelSweepRow> rows;
  for (double a : accels) {
    AltitudeScenario s = base;
    s.accel_magnitude = a;
    const AltitudeRun run = simulate_altitude_scenario(s);
    const AugmentationSpec spec = altitude_augmentation(net, 0.0, a > 0.0 ? a : largest);
    ComparisonGrid grid;
    grid.z0 = z0;
    grid.P0_scale = {1.0};
    grid.Q_scale = {1.0};
    grid.settings = settings;
    const auto cells = run_comparison(run, grid, spec);
    for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
      rows.push_back({a, cells[i].z0, cells[i].median_err_z, cells[i + 1].median_err_z});
    }
  }
  return rows;
}

estimators::AltitudeDatasetConfig AltitudeNetRecipe::default_data() {
  estimators::AltitudeDatasetConfig c;
  c.trajectories = 1000;
  c.velocity.amplitude = {-10.0, 10.0};
  c.velocity.offset = {-25.0, 25.0};
  c.seed = 3;
  return c;
}

estimators::TrainConfig AltitudeNetRecipe::default_train() {
  estimators::TrainConfig c;
  c.epochs = 60;
  c.batch_size = 256;
  c.input_noise_std = 0.1;  // matches the comparison's measurement noise
  c.seed = 4;
  return c;
}

estimators::TrainingResult train_altitude_net(const AltitudeNetRecipe& recipe) {
  const auto data = estimators::build_altitude_dataset(recipe.data);
  const auto split = estimators::split_dataset(data, recipe.test_fraction, recipe.split_seed);
  auto net = estimators::make_altitude_net(recipe.net_seed);
  estimators::fit_input_normalization(net, split.train.inputs);
  return estimators::train(net, split.train, &split.test, recipe.train);
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows,
                          std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write comparison table '" + path + "'");
  out << "# bounds " << kVersion << " seed=" << seed << '\n';
  out << "run_id,filter,z0,P0_scale,Q_scale,median_err_z,median_err_vx,converged\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << to_string(r.filter) << ',' << fmt(r.z0) << ',' << fmt(r.P0_scale) << ','
        << fmt(r.Q_scale) << ',' << fmt(r.median_err_z) << ',' << fmt(r.median_err_vx) << ','
        << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace bounds::aikf
