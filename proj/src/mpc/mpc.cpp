#include "bounds/mpc/mpc.hpp"

#include <cmath>
#include <sstream>

namespace bounds::mpc {
namespace {

struct Tracked {
  Eigen::Index state;
  const Vector* setpoint;
  double sqrt_weight;
  bool angle;
  std::string name;
};

class HorizonProblem {
 public:
  HorizonProblem(const dynamics::SystemModel& model, const std::vector<Tracked>& tracked,
                 const Vector& input_sqrt_weights, const MpcConfig& cfg, double dt)
      : model_(model), tracked_(tracked), input_w_(input_sqrt_weights), cfg_(cfg), dt_(dt),
        m_(static_cast<Eigen::Index>(model.input_dim())) {}

  void reset(Eigen::Index k, Eigen::Index horizon, const Vector& x_start, const Vector& u_prev) {
    k_ = k;
    h_ = horizon;
    u_prev_ = u_prev;
    states_.resize(h_ + 1);
    states_[0] = x_start;
  }

  Eigen::Index residual_size() const {
    return h_ * static_cast<Eigen::Index>(tracked_.size()) + h_ * m_;
  }

  // Fills states_[first + 1 .. h] assuming states_[0 .. first] are current.
  void propagate(const Matrix& U, Eigen::Index first, std::vector<Vector>& states) const {
    for (Eigen::Index i = first; i < h_; ++i) {
      states[static_cast<std::size_t>(i + 1)] =
          model_.step(states[static_cast<std::size_t>(i)], U.row(i).transpose(), dt_);
    }
  }

  Vector residuals(const Matrix& U, const std::vector<Vector>& states) const {
    Vector r(residual_size());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 1; i <= h_; ++i) {
      const Vector& x = states[static_cast<std::size_t>(i)];
      for (const auto& t : tracked_) {
        double diff = x[t.state] - (*t.setpoint)[k_ + i];
        if (t.angle) diff = wrap_angle(diff);
        r[idx++] = t.sqrt_weight * diff;
      }
    }
    for (Eigen::Index i = 0; i < h_; ++i) {
      const Vector u = U.row(i).transpose();
      Vector ref;
      if (cfg_.penalty == InputPenalty::rate) {
        ref = i == 0 ? u_prev_ : Vector(U.row(i - 1).transpose());
      } else {
        ref = model_.trim_input();
      }
      r.segment(idx, m_) = input_w_.cwiseProduct(u - ref);
      idx += m_;
    }
    return r;
  }

  // Solves the horizon problem from warm start U. Returns the iterations used.
  int solve(Matrix& U) {
    std::vector<Vector> states = states_;
    propagate(U, 0, states);
    Vector r = residuals(U, states);
    double cost = 0.5 * r.squaredNorm();
    const Eigen::Index nvar = h_ * m_;
    double mu = -1.0;
    for (int iter = 1; iter <= cfg_.max_iterations; ++iter) {
      if (cost < 1e-24) return iter - 1;
      Matrix J(r.size(), nvar);
      std::vector<Vector> pert_states = states;
      for (Eigen::Index i = 0; i < h_; ++i) {
        pert_states[static_cast<std::size_t>(i)] = states[static_cast<std::size_t>(i)];
        for (Eigen::Index l = 0; l < m_; ++l) {
          Matrix Up = U;
          const double step = cfg_.fd_step * std::max(1.0, std::abs(U(i, l)));
          Up(i, l) += step;
          propagate(Up, i, pert_states);
          J.col(i * m_ + l) = (residuals(Up, pert_states) - r) / step;
        }
      }
      const Matrix A = J.transpose() * J;
      const Vector g = J.transpose() * r;
      if (g.norm() <= 1e-15 * (1.0 + std::sqrt(2.0 * cost))) return iter;
      const Vector D = A.diagonal().cwiseMax(1e-12 * std::max(1.0, A.diagonal().maxCoeff()));
      if (mu < 0.0) mu = 1e-6;
      bool accepted = false;
      while (mu < 1e12) {
        Matrix M = A;
        M.diagonal() += mu * D;
        const Vector delta = -M.ldlt().solve(g);
        Matrix Uc = U;
        for (Eigen::Index i = 0; i < h_; ++i) Uc.row(i) += delta.segment(i * m_, m_).transpose();
        std::vector<Vector> cand_states = states;
        double cand_cost = INFINITY;
        Vector cand_r;
        try {
          propagate(Uc, 0, cand_states);
          cand_r = residuals(Uc, cand_states);
          cand_cost = 0.5 * cand_r.squaredNorm();
        } catch (const Error&) {
          cand_cost = INFINITY;
        }
        if (std::isfinite(cand_cost) && cand_cost < cost) {
          const double decrease = cost - cand_cost;
          U = std::move(Uc);
          states = std::move(cand_states);
          r = std::move(cand_r);
          cost = cand_cost;
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
          if (decrease <= cfg_.tolerance * (cost + decrease)) return iter;
          break;
        }
        mu *= 4.0;
      }
      if (!accepted) return iter;  // no descent direction left: stationary point
    }
    if (cfg_.accept_best_on_cap) {
      ++capped_;
      return cfg_.max_iterations;
    }
    throw MpcNonConvergence("MPC horizon solve at step " + std::to_string(k_) +
                                " did not converge in " + std::to_string(cfg_.max_iterations) +
                                " iterations (best cost " + std::to_string(cost) + ")",
                            cost, U, k_);
  }

  int capped() const { return capped_; }

 private:
  int capped_ = 0;
  const dynamics::SystemModel& model_;
  const std::vector<Tracked>& tracked_;
  Vector input_w_;
  const MpcConfig& cfg_;
  double dt_;
  Eigen::Index m_;
  Eigen::Index k_ = 0;
  Eigen::Index h_ = 0;
  Vector u_prev_;
  std::vector<Vector> states_;
};

}  // namespace

void MpcConfig::validate() const {
  if (horizon < 1) throw InputError("MPC horizon must be >= 1");
  if (max_iterations < 1) throw InputError("MPC iteration cap must be >= 1");
  if (!(tolerance >= 0.0)) throw InputError("MPC tolerance must be >= 0");
  if (!(fd_step > 0.0)) throw InputError("MPC finite-difference step must be > 0");
  if (!(default_input_weight >= 0.0)) throw InputError("MPC input weights must be >= 0");
  bool any_positive = false;
  for (const auto& [name, w] : setpoint_weights) {
    if (!(w >= 0.0)) throw InputError("MPC setpoint weight for '" + name + "' must be >= 0");
    any_positive |= w > 0.0;
  }
  for (const auto& [name, w] : input_weights) {
    if (!(w >= 0.0)) throw InputError("MPC input weight for '" + name + "' must be >= 0");
  }
  if (!any_positive) throw InputError("MPC needs at least one positive setpoint weight");
}

Vector initial_state_from_setpoints(const dynamics::SystemModel& model,
                                    const trajectory::SetpointSeries& setpoints,
                                    const Vector& base) {
  Vector x = base;
  for (const auto& [name, series] : setpoints.channels) {
    if (auto i = find_label(model.state_labels(), name)) {
      x[static_cast<Eigen::Index>(*i)] = series[0];
    }
  }
  return x;
}

MpcResult solve_tracking(const dynamics::SystemModel& model,
                         const trajectory::SetpointSeries& setpoints, const Vector& x0,
                         const MpcConfig& cfg) {
  cfg.validate();
  const Eigen::Index K = setpoints.length();
  if (K < 2) throw InputError("MPC needs at least two setpoint samples");
  const auto& labels = model.state_labels();
  std::vector<Tracked> tracked;
  for (const auto& [name, weight] : cfg.setpoint_weights) {
    if (weight <= 0.0 || !setpoints.has(name)) continue;
    const auto idx = find_label(labels, name);
    if (!idx) continue;
    const Vector& s = setpoints.at(name);
    if (s.size() != K) throw InputError("setpoint channel '" + name + "' has inconsistent length");
    for (Eigen::Index k = 0; k < K; ++k) {
      if (!std::isfinite(s[k])) {
        throw InputError("setpoint '" + name + "' is not finite at index " + std::to_string(k));
      }
    }
    tracked.push_back({static_cast<Eigen::Index>(*idx), &s, std::sqrt(weight),
                       labels[*idx].kind == LabelKind::angle, name});
  }
  if (tracked.empty()) throw InputError("no setpoint channel matches a weighted model state");
  if (static_cast<std::size_t>(x0.size()) != model.state_dim()) {
    throw InputError("MPC initial state has wrong dimension");
  }

  const auto m = static_cast<Eigen::Index>(model.input_dim());
  Vector input_w(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const auto& name = model.input_labels()[static_cast<std::size_t>(l)].name;
    const auto it = cfg.input_weights.find(name);
    input_w[l] = std::sqrt(it != cfg.input_weights.end() ? it->second : cfg.default_input_weight);
  }
  for (const auto& [name, w] : cfg.input_weights) require_label(model.input_labels(), name);

  const double dt = setpoints.dt;
  HorizonProblem problem(model, tracked, input_w, cfg, dt);
  MpcResult result;
  result.inputs.resize(K - 1, m);
  Vector x = x0;
  Vector u_prev = model.trim_input();
  Matrix warm = model.trim_input().transpose().replicate(cfg.horizon, 1);
  for (Eigen::Index k = 0; k + 1 < K; ++k) {
    const Eigen::Index h = std::min<Eigen::Index>(cfg.horizon, K - 1 - k);
    Matrix U = warm.topRows(h);
    problem.reset(k, h, x, u_prev);
    result.max_iterations_used = std::max(result.max_iterations_used, problem.solve(U));
    result.inputs.row(k) = U.row(0);
    u_prev = U.row(0).transpose();
    x = model.step(x, u_prev, dt);
    // Shift the solution by one step for the next warm start.
    warm.topRows(h - 1) = U.bottomRows(h - 1);
    warm.bottomRows(cfg.horizon - h + 1).rowwise() = U.row(h - 1);
  }
  result.capped_steps = problem.capped();
  result.states = dynamics::simulate(model, x0, result.inputs, dt);
  for (const auto& t : tracked) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      double diff = result.states(k, t.state) - (*t.setpoint)[k];
      if (t.angle) diff = wrap_angle(diff);
      sum += diff * diff;
    }
    result.rms_error[t.name] = std::sqrt(sum / static_cast<double>(K));
  }
  return result;
}

}  // namespace bounds::mpc
