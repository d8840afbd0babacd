#include "bounds/trajectory/setpoints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bounds::trajectory {
namespace {

double ease(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
}

double ramp(const MotifSpec& m, double t) {
  return m.amplitude * ease((t - m.start_time) / m.duration);
}

void validate_motif(const MotifSpec& m, Eigen::Index length, double dt) {
  const double horizon = static_cast<double>(length - 1) * dt;
  const std::string name(to_string(m.kind));
  if (!(m.duration > 0.0)) throw InputError("motif '" + name + "' needs duration > 0");
  if (m.start_time < 0.0 || m.start_time + m.duration > horizon + 1e-9) {
    throw InputError("motif '" + name + "' spans [" + std::to_string(m.start_time) + ", " +
                     std::to_string(m.start_time + m.duration) +
                     "] s, outside the trajectory [0, " + std::to_string(horizon) + "] s");
  }
  if ((m.kind == MotifKind::accelerate || m.kind == MotifKind::decelerate) && m.amplitude < 0.0) {
    throw InputError("motif '" + name + "' needs a nonnegative amplitude");
  }
  if (!std::isfinite(m.amplitude)) throw InputError("motif '" + name + "' amplitude not finite");
}

double draw(std::mt19937_64& rng, const Range& r) {
  if (r.low == r.high) return r.low;
  return std::uniform_real_distribution<double>(r.low, r.high)(rng);
}

}  // namespace

Eigen::Index SetpointSeries::length() const {
  return channels.empty() ? 0 : channels.begin()->second.size();
}

const Vector& SetpointSeries::at(const std::string& name) const {
  const auto it = channels.find(name);
  if (it == channels.end()) throw InputError("setpoint series has no channel '" + name + "'");
  return it->second;
}

std::string_view to_string(MotifKind kind) {
  switch (kind) {
    case MotifKind::accelerate:
      return "accelerate";
    case MotifKind::decelerate:
      return "decelerate";
    case MotifKind::heading_turn:
      return "heading_turn";
    case MotifKind::offset_turn:
      return "offset_turn";
    case MotifKind::upwind_crossing:
      return "upwind_crossing";
    case MotifKind::straight:
      return "straight";
  }
  return "straight";
}

MotifKind motif_kind_from_string(std::string_view text) {
  for (auto k : {MotifKind::accelerate, MotifKind::decelerate, MotifKind::heading_turn,
                 MotifKind::offset_turn, MotifKind::upwind_crossing, MotifKind::straight}) {
    if (to_string(k) == text) return k;
  }
  throw InputError("unknown motif kind '" + std::string(text) + "'");
}

SetpointSeries generate_motif_setpoints(const MotifSpec& spec, const MotifBaseline& baseline,
                                        Eigen::Index length, double dt) {
  return generate_motif_sequence({spec}, baseline, length, dt);
}

SetpointSeries generate_motif_sequence(const std::vector<MotifSpec>& motifs,
                                       const MotifBaseline& baseline, Eigen::Index length,
                                       double dt) {
  if (length < 2) throw InputError("setpoint series needs at least two samples");
  if (!(dt > 0.0)) throw InputError("setpoint dt must be positive");
  if (!(baseline.speed > 0.0)) throw InputError("motif baseline speed must be positive");
  if (baseline.wind_speed < 0.0) throw InputError("motif baseline wind speed is negative");
  for (const auto& m : motifs) validate_motif(m, length, dt);

  auto heading_at = [&](double t) {
    double psi = baseline.heading;
    for (const auto& m : motifs) {
      if (m.kind == MotifKind::heading_turn || m.kind == MotifKind::upwind_crossing) {
        psi += ramp(m, t);
      }
    }
    return psi;
  };
  for (const auto& m : motifs) {
    if (m.kind != MotifKind::upwind_crossing) continue;
    const double expected = baseline.wind_direction - 0.5 * m.amplitude;
    const double actual = heading_at(m.start_time);
    if (std::abs(wrap_angle(actual - expected)) > 1e-6) {
      throw InputError("upwind_crossing must start at heading zeta - amplitude/2 = " +
                       std::to_string(expected) + " rad, but heading is " +
                       std::to_string(actual) + " rad");
    }
  }

  SetpointSeries out;
  out.dt = dt;
  Vector vx(length), vy(length), psi(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) * dt;
    double speed = baseline.speed;
    double offset = baseline.course_offset;
    for (const auto& m : motifs) {
      switch (m.kind) {
        case MotifKind::accelerate:
          speed += ramp(m, t);
          break;
        case MotifKind::decelerate:
          speed -= ramp(m, t);
          break;
        case MotifKind::offset_turn:
          offset += ramp(m, t);
          break;
        default:
          break;
      }
    }
    if (!(speed > 0.0)) {
      throw InputError("motif sequence drives the speed setpoint to " + std::to_string(speed) +
                       " m/s at t = " + std::to_string(t) + " s");
    }
    vx[k] = speed * std::cos(offset);
    vy[k] = speed * std::sin(offset);
    psi[k] = heading_at(t);
  }
  out.channels["v_x"] = vx;
  out.channels["v_y"] = vy;
  out.channels["psi"] = psi;
  out.channels["z"] = Vector::Constant(length, baseline.altitude);
  out.channels["w"] = Vector::Constant(length, baseline.wind_speed);
  out.channels["zeta"] = Vector::Constant(length, baseline.wind_direction);
  return out;
}

void RandomTrajectoryRanges::validate() const {
  const std::pair<const char*, const Range*> all[] = {
      {"wind_speed", &wind_speed},       {"wind_direction", &wind_direction},
      {"heading", &heading},             {"heading_rate", &heading_rate},
      {"heading_accel", &heading_accel}, {"forward_speed", &forward_speed},
      {"speed_ratio", &speed_ratio},     {"lateral_speed", &lateral_speed},
      {"lateral_accel", &lateral_accel}};
  for (const auto& [name, r] : all) {
    if (!(r->low <= r->high)) throw InputError(std::string("range '") + name + "' has low > high");
  }
  if (wind_speed.low < 0.0) throw InputError("range 'wind_speed' must be nonnegative");
}

RandomDraw draw_random_parameters(const RandomTrajectoryRanges& ranges, std::uint64_t seed) {
  ranges.validate();
  std::mt19937_64 rng(seed);
  RandomDraw d{};
  d.wind_speed = draw(rng, ranges.wind_speed);
  d.wind_direction = draw(rng, ranges.wind_direction);
  d.heading = draw(rng, ranges.heading);
  d.heading_rate = draw(rng, ranges.heading_rate);
  d.heading_accel = draw(rng, ranges.heading_accel);
  d.forward_speed = draw(rng, ranges.forward_speed);
  d.speed_ratio = draw(rng, ranges.speed_ratio);
  d.lateral_speed = draw(rng, ranges.lateral_speed);
  d.lateral_accel = draw(rng, ranges.lateral_accel);
  return d;
}

SetpointSeries generate_random_setpoints(const RandomTrajectoryRanges& ranges, std::uint64_t seed,
                                         Eigen::Index length, double dt, RandomDraw* draw_out) {
  if (length < 2) throw InputError("setpoint series needs at least two samples");
  if (!(dt > 0.0)) throw InputError("setpoint dt must be positive");
  const RandomDraw d = draw_random_parameters(ranges, seed);
  if (draw_out) *draw_out = d;
  const double horizon = static_cast<double>(length - 1) * dt;
  SetpointSeries out;
  out.dt = dt;
  Vector vx(length), vy(length), psi(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) * dt;
    psi[k] = d.heading + d.heading_rate * t + 0.5 * d.heading_accel * t * t;
    vx[k] = d.forward_speed * (1.0 + (d.speed_ratio - 1.0) * t / horizon);
    vy[k] = d.lateral_speed + d.lateral_accel * t;
  }
  out.channels["v_x"] = vx;
  out.channels["v_y"] = vy;
  out.channels["psi"] = psi;
  out.channels["w"] = Vector::Constant(length, d.wind_speed);
  out.channels["zeta"] = Vector::Constant(length, d.wind_direction);
  return out;
}

Vector sum_of_sines_velocity(const SumOfSinesSpec& spec, std::uint64_t seed, Eigen::Index length,
                             double dt) {
  if (spec.components < 0) throw InputError("sum of sines needs a nonnegative component count");
  if (length < 1 || !(dt > 0.0)) throw InputError("sum of sines needs length >= 1 and dt > 0");
  for (const Range* r : {&spec.frequency, &spec.amplitude, &spec.phase, &spec.offset}) {
    if (!(r->low <= r->high)) throw InputError("sum of sines range has low > high");
  }
  std::mt19937_64 rng(seed);
  const double offset = draw(rng, spec.offset);
  std::vector<double> freq, amp, phase;
  for (int i = 0; i < spec.components; ++i) {
    freq.push_back(draw(rng, spec.frequency));
    amp.push_back(draw(rng, spec.amplitude));
    phase.push_back(draw(rng, spec.phase));
  }
  Vector v(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) * dt;
    double value = offset;
    for (int i = 0; i < spec.components; ++i) {
      value += amp[static_cast<std::size_t>(i)] *
               std::sin(2.0 * std::numbers::pi * freq[static_cast<std::size_t>(i)] * t +
                        phase[static_cast<std::size_t>(i)]);
    }
    v[k] = value;
  }
  return v;
}

}  // namespace bounds::trajectory
