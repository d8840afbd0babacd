#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bounds/core.hpp"

namespace bounds::trajectory {

/// Named setpoint channels sampled at dt. Channel names match state labels
/// (v_x, v_y, psi, z, w, zeta).
struct SetpointSeries {
  double dt = 0.1;
  std::map<std::string, Vector> channels;

  Eigen::Index length() const;
  bool has(const std::string& name) const { return channels.count(name) != 0; }
  const Vector& at(const std::string& name) const;
};

enum class MotifKind { accelerate, decelerate, heading_turn, offset_turn, upwind_crossing, straight };

std::string_view to_string(MotifKind kind);
MotifKind motif_kind_from_string(std::string_view text);

/// Flight condition the motifs are applied on top of.
struct MotifBaseline {
  double speed = 1.0;          // m/s, ground speed
  double heading = 0.0;        // rad
  double course_offset = 0.0;  // rad, course minus heading
  double altitude = 2.0;       // m
  double wind_speed = 0.0;     // m/s
  double wind_direction = 0.0; // rad
};

/// A single movement pattern. `amplitude` is in m/s for speed changes and rad
/// for turns; an upwind crossing sweeps the heading through the wind
/// direction from zeta - amplitude/2 to zeta + amplitude/2.
struct MotifSpec {
  MotifKind kind = MotifKind::straight;
  double amplitude = 0.0;
  double duration = 1.0;    // s
  double start_time = 0.0;  // s
};

/// Setpoints for one motif on the baseline. Ramps use cosine easing.
SetpointSeries generate_motif_setpoints(const MotifSpec& spec, const MotifBaseline& baseline,
                                        Eigen::Index length, double dt);

/// Setpoints for a sequence of motifs; their changes accumulate in time order.
SetpointSeries generate_motif_sequence(const std::vector<MotifSpec>& motifs,
                                       const MotifBaseline& baseline, Eigen::Index length,
                                       double dt);

struct Range {
  double low = 0.0;
  double high = 0.0;
};

struct RandomTrajectoryRanges {
  Range wind_speed{0.0, 2.0};
  Range wind_direction{-3.141592653589793, 3.141592653589793};
  Range heading{-3.141592653589793, 3.141592653589793};
  Range heading_rate{-0.11, 0.11};
  Range heading_accel{-2.08, 2.08};
  Range forward_speed{0.05, 5.0};
  Range speed_ratio{0.05, 2.0};  // final over initial forward speed
  Range lateral_speed{-0.2, 0.2};
  Range lateral_accel{-0.1, 0.1};

  void validate() const;
};

/// Parameters drawn for one random trajectory.
struct RandomDraw {
  double wind_speed, wind_direction, heading, heading_rate, heading_accel;
  double forward_speed, speed_ratio, lateral_speed, lateral_accel;
};

RandomDraw draw_random_parameters(const RandomTrajectoryRanges& ranges, std::uint64_t seed);

/// Setpoints for one random trajectory: quadratic heading, forward speed
/// ramping linearly to ratio times its initial value, linearly drifting
/// lateral speed, constant wind.
SetpointSeries generate_random_setpoints(const RandomTrajectoryRanges& ranges, std::uint64_t seed,
                                         Eigen::Index length, double dt,
                                         RandomDraw* draw = nullptr);

struct SumOfSinesSpec {
  int components = 3;
  Range frequency{0.1, 0.9};   // Hz
  Range amplitude{-15.0, 15.0};  // m/s
  Range phase{-1.5707963267948966, 1.5707963267948966};
  Range offset{-10.0, 10.0};   // m/s
};

/// Band-limited forward-velocity series offset + sum_i A_i sin(2 pi f_i t + phi_i).
Vector sum_of_sines_velocity(const SumOfSinesSpec& spec, std::uint64_t seed, Eigen::Index length,
                             double dt);

}  // namespace bounds::trajectory
