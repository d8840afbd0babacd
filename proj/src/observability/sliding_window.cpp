#include "bounds/observability/sliding_window.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "bounds/trajectory/csv.hpp"

namespace bounds::observability {
namespace {

WindowVariance evaluate_window(const dynamics::SystemModel& model,
                               const trajectory::Trajectory& traj, const Matrix& states,
                               const SlidingWindowConfig& cfg, const Matrix& R_step,
                               const std::vector<Eigen::Index>& sensors, Eigen::Index start) {
  WindowVariance w;
  w.start = start;
  w.t_start = traj.time(start);
  w.t_display = w.t_start + 0.5 * cfg.omega * traj.dt();
  const Vector x0 = states.row(start).transpose();
  const Matrix U = traj.inputs().middleRows(start, cfg.omega);
  EmpiricalOptions opts;
  opts.epsilon = cfg.epsilon;
  opts.allow_one_sided = cfg.allow_one_sided;
  ObservabilityMatrix O = empirical_O(model, x0, U, traj.dt(), cfg.omega, opts);
  O.window_start = start;
  if (!sensors.empty()) O = slice(O, sensors, all_indices(O.step_count()), all_indices(O.values.cols()));
  if (cfg.transform) O = transform_O(O, *cfg.transform, x0).O;
  w.mev = window_variance(O, R_step, cfg.lambda, &w.warnings);
  return w;
}

[[noreturn]] void rethrow_tagged(std::exception_ptr error, Eigen::Index window) {
  const std::string tag = "window " + std::to_string(window) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const InputError& e) {
    throw InputError(tag + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(tag + e.what());
  } catch (const Error& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

Vector SlidingWindowResult::series(std::string_view name) const {
  const auto i = require_label(labels, name);
  Vector out(static_cast<Eigen::Index>(windows.size()));
  for (std::size_t k = 0; k < windows.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = windows[k].mev.variance[static_cast<Eigen::Index>(i)];
  }
  return out;
}

SlidingWindowResult sliding_window_variance(const dynamics::SystemModel& model,
                                            const trajectory::Trajectory& traj,
                                            const SlidingWindowConfig& cfg) {
  if (cfg.omega < 1) throw InputError("observability window must be >= 1 step");
  if (traj.length() < cfg.omega) {
    throw InputError("trajectory has " + std::to_string(traj.length()) +
                     " samples, fewer than the window of " + std::to_string(cfg.omega));
  }
  // Reorder trajectory states and inputs into the model's label order.
  Matrix states(traj.length(), static_cast<Eigen::Index>(model.state_dim()));
  for (std::size_t i = 0; i < model.state_dim(); ++i) {
    states.col(static_cast<Eigen::Index>(i)) = traj.state_column(model.state_labels()[i].name);
  }
  Matrix inputs(traj.length(), static_cast<Eigen::Index>(model.input_dim()));
  for (std::size_t i = 0; i < model.input_dim(); ++i) {
    const auto j = require_label(traj.input_labels(), model.input_labels()[i].name);
    inputs.col(static_cast<Eigen::Index>(i)) = traj.inputs().col(static_cast<Eigen::Index>(j));
  }
  const trajectory::Trajectory ordered(traj.dt(), traj.t0(), model.state_labels(), states,
                                       model.input_labels(), inputs, {}, Matrix(),
                                       traj.provenance());
  const auto p = static_cast<Eigen::Index>(model.measurement_dim());
  const Matrix R_full = cfg.R_step.size() == 0 ? default_noise(p) : cfg.R_step;
  if (R_full.rows() != p || R_full.cols() != p) {
    throw InputError("per-step noise must be " + std::to_string(p) + "x" + std::to_string(p));
  }
  std::vector<Eigen::Index> sensors;
  for (const auto& name : cfg.sensors) {
    sensors.push_back(static_cast<Eigen::Index>(require_label(model.measurement_labels(), name)));
  }
  const Matrix R_step = sensors.empty() ? R_full : slice_noise(R_full, sensors);

  const auto count = traj.length() - cfg.omega + 1;
  SlidingWindowResult result;
  result.labels = cfg.transform ? cfg.transform->labels : model.state_labels();
  result.omega = cfg.omega;
  result.lambda = cfg.lambda;
  result.windows.resize(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

  auto run = [&](Eigen::Index start) {
    try {
      result.windows[static_cast<std::size_t>(start)] =
          evaluate_window(model, ordered, states, cfg, R_step, sensors, start);
    } catch (...) {
      errors[static_cast<std::size_t>(start)] = std::current_exception();
    }
  };
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.threads;
  threads = static_cast<unsigned>(std::min<Eigen::Index>(threads, count));
  if (threads <= 1) {
    for (Eigen::Index s = 0; s < count; ++s) run(s);
  } else {
    std::atomic<Eigen::Index> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (Eigen::Index s = next++; s < count; s = next++) run(s);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (Eigen::Index s = 0; s < count; ++s) {
    if (errors[static_cast<std::size_t>(s)]) rethrow_tagged(errors[static_cast<std::size_t>(s)], s);
  }
  return result;
}

void write_variance_csv(const SlidingWindowResult& result, std::ostream& out) {
  out << "t_start,t_display";
  for (const auto& l : result.labels) out << ",var_" << l.name;
  for (const auto& l : result.labels) out << ",saturated_" << l.name;
  out << "\n";
  for (const auto& w : result.windows) {
    out << trajectory::format_double(w.t_start) << ',' << trajectory::format_double(w.t_display);
    for (Eigen::Index i = 0; i < w.mev.variance.size(); ++i) {
      out << ',' << trajectory::format_double(w.mev.variance[i]);
    }
    for (bool s : w.mev.saturated) out << ',' << (s ? 1 : 0);
    out << "\n";
  }
}

}  // namespace bounds::observability
