#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bounds/core.hpp"
#include "bounds/dynamics/system_model.hpp"

namespace bounds::dynamics {

/// Sensor quantities available to a flying agent. `state` reads a state
/// variable directly.
enum class MeasurementKind {
  heading,             // psi
  course,              // beta = atan2(v_y, v_x)
  airflow_angle,       // gamma = atan2(a_y, a_x)
  accel_angle,         // eta = atan2(vdot_y, vdot_x)
  ground_speed,        // g = |(v_x, v_y)|
  airspeed,            // a = |(a_x, a_y)|
  optic_flow,          // r = g / z, defined for z > 0
  accel_magnitude,     // q
  forward_optic_flow,  // r_x = v_x / z
  state,
};

struct CatalogueEntry {
  MeasurementKind kind = MeasurementKind::state;
  std::string state_name;  // only for MeasurementKind::state
  bool sincos = false;     // emit (sin, cos) instead of the angle

  friend bool operator==(const CatalogueEntry&, const CatalogueEntry&) = default;
};

/// Ordered selection of measurements.
///
/// Text form is a comma-separated list. Named sensors are `psi`, `beta`,
/// `gamma`, `eta` (alias `nu`), `g`, `a`, `r`, `q`, `r_x`; any other token is
/// a direct state read-out. A `:sc` suffix on an angle emits its sine and
/// cosine, e.g. `psi:sc,beta,gamma`.
class MeasurementCatalogue {
 public:
  MeasurementCatalogue() = default;
  explicit MeasurementCatalogue(std::vector<CatalogueEntry> entries);

  static MeasurementCatalogue parse(std::string_view text);

  const std::vector<CatalogueEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::string to_string() const;

  /// Output labels; state read-outs are resolved against `states`.
  LabelList labels(const LabelList& states) const;

 private:
  std::vector<CatalogueEntry> entries_;
};

std::string_view measurement_name(MeasurementKind kind);
bool is_angle_measurement(MeasurementKind kind);

/// Evaluates the catalogue at (x, u). When `reference` is given, scalar angle
/// outputs are unwrapped to the nearest branch of the matching reference
/// entry. Throws NumericalError naming the measurement and the violated
/// condition when a selected quantity is undefined at x.
Vector measure(const SystemModel& model, const Vector& x, const Vector& u,
               const MeasurementCatalogue& catalogue, const Vector* reference = nullptr);

/// The model with its measurement map replaced by the catalogue.
SystemModel bind_catalogue(const SystemModel& model, const MeasurementCatalogue& catalogue);

}  // namespace bounds::dynamics
