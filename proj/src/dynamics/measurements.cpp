#include "bounds/dynamics/measurements.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace bounds::dynamics {
namespace {

constexpr double kDegenerateNorm = 1e-12;

struct NamedKind {
  std::string_view name;
  MeasurementKind kind;
};

constexpr NamedKind kNamedKinds[] = {
    {"psi", MeasurementKind::heading},
    {"beta", MeasurementKind::course},
    {"gamma", MeasurementKind::airflow_angle},
    {"eta", MeasurementKind::accel_angle},
    {"nu", MeasurementKind::accel_angle},
    {"g", MeasurementKind::ground_speed},
    {"a", MeasurementKind::airspeed},
    {"r", MeasurementKind::optic_flow},
    {"q", MeasurementKind::accel_magnitude},
    {"r_x", MeasurementKind::forward_optic_flow},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

Label base_label(const CatalogueEntry& e, const LabelList& states) {
  switch (e.kind) {
    case MeasurementKind::heading:
      return {"psi", "rad", LabelKind::angle};
    case MeasurementKind::course:
      return {"beta", "rad", LabelKind::angle};
    case MeasurementKind::airflow_angle:
      return {"gamma", "rad", LabelKind::angle};
    case MeasurementKind::accel_angle:
      return {"eta", "rad", LabelKind::angle};
    case MeasurementKind::ground_speed:
      return {"g", "m/s", LabelKind::magnitude};
    case MeasurementKind::airspeed:
      return {"a", "m/s", LabelKind::magnitude};
    case MeasurementKind::optic_flow:
      return {"r", "1/s", LabelKind::linear};
    case MeasurementKind::accel_magnitude:
      return {"q", "m/s^2", LabelKind::magnitude};
    case MeasurementKind::forward_optic_flow:
      return {"r_x", "1/s", LabelKind::linear};
    case MeasurementKind::state:
      return states[require_label(states, e.state_name)];
  }
  throw InputError("unknown measurement kind");
}

double need(const std::optional<double>& value, std::string_view quantity,
            std::string_view measurement) {
  if (!value) {
    throw InputError("measurement '" + std::string(measurement) + "' needs " +
                     std::string(quantity) + ", which this model does not provide");
  }
  return *value;
}

[[noreturn]] void undefined(std::string_view measurement, std::string_view condition) {
  throw NumericalError("measurement '" + std::string(measurement) + "' undefined: " +
                       std::string(condition));
}

}  // namespace

MeasurementCatalogue::MeasurementCatalogue(std::vector<CatalogueEntry> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.sincos && e.kind != MeasurementKind::state && !is_angle_measurement(e.kind)) {
      throw InputError("sin/cos expansion requested for non-angle measurement '" +
                       std::string(measurement_name(e.kind)) + "'");
    }
  }
}

MeasurementCatalogue MeasurementCatalogue::parse(std::string_view text) {
  std::vector<CatalogueEntry> entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = trim(text.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
    if (!token.empty()) {
      CatalogueEntry entry;
      std::string name = token;
      if (const auto colon = token.find(':'); colon != std::string::npos) {
        const auto suffix = token.substr(colon + 1);
        if (suffix != "sc") throw InputError("unknown measurement suffix ':" + suffix + "'");
        entry.sincos = true;
        name = token.substr(0, colon);
      }
      bool named = false;
      for (const auto& nk : kNamedKinds) {
        if (nk.name == name) {
          entry.kind = nk.kind;
          named = true;
          break;
        }
      }
      if (!named) {
        entry.kind = MeasurementKind::state;
        entry.state_name = name;
      }
      entries.push_back(entry);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (entries.empty()) throw InputError("empty measurement catalogue");
  return MeasurementCatalogue(std::move(entries));
}

std::string MeasurementCatalogue::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out << ',';
    const auto& e = entries_[i];
    out << (e.kind == MeasurementKind::state ? std::string_view(e.state_name)
                                             : measurement_name(e.kind));
    if (e.sincos) out << ":sc";
  }
  return out.str();
}

LabelList MeasurementCatalogue::labels(const LabelList& states) const {
  LabelList out;
  for (const auto& e : entries_) {
    Label base = base_label(e, states);
    if (e.sincos) {
      if (base.kind != LabelKind::angle) {
        throw InputError("sin/cos expansion requested for non-angle '" + base.name + "'");
      }
      out.push_back({"sin_" + base.name, "1", LabelKind::linear});
      out.push_back({"cos_" + base.name, "1", LabelKind::linear});
    } else {
      out.push_back(std::move(base));
    }
  }
  check_unique(out, "measurement");
  return out;
}

std::string_view measurement_name(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::heading:
      return "psi";
    case MeasurementKind::course:
      return "beta";
    case MeasurementKind::airflow_angle:
      return "gamma";
    case MeasurementKind::accel_angle:
      return "eta";
    case MeasurementKind::ground_speed:
      return "g";
    case MeasurementKind::airspeed:
      return "a";
    case MeasurementKind::optic_flow:
      return "r";
    case MeasurementKind::accel_magnitude:
      return "q";
    case MeasurementKind::forward_optic_flow:
      return "r_x";
    case MeasurementKind::state:
      return "state";
  }
  return "state";
}

bool is_angle_measurement(MeasurementKind kind) {
  return kind == MeasurementKind::heading || kind == MeasurementKind::course ||
         kind == MeasurementKind::airflow_angle || kind == MeasurementKind::accel_angle;
}

Vector measure(const SystemModel& model, const Vector& x, const Vector& u,
               const MeasurementCatalogue& catalogue, const Vector* reference) {
  const LabelList labels = catalogue.labels(model.state_labels());
  Vector y(static_cast<Eigen::Index>(labels.size()));

  FlightQuantities fq;
  bool need_fq = false;
  for (const auto& e : catalogue.entries()) need_fq |= e.kind != MeasurementKind::state;
  if (need_fq) fq = model.flight_quantities(x, u);

  Eigen::Index out = 0;
  for (const auto& e : catalogue.entries()) {
    const auto name = e.kind == MeasurementKind::state ? std::string_view(e.state_name)
                                                       : measurement_name(e.kind);
    double value = 0.0;
    switch (e.kind) {
      case MeasurementKind::heading:
        value = need(fq.psi, "heading", name);
        break;
      case MeasurementKind::course: {
        const double vx = need(fq.vx, "v_x", name), vy = need(fq.vy, "v_y", name);
        if (std::hypot(vx, vy) <= kDegenerateNorm) undefined(name, "(v_x, v_y) = (0, 0)");
        value = std::atan2(vy, vx);
        break;
      }
      case MeasurementKind::airflow_angle: {
        const double vx = need(fq.vx, "v_x", name), vy = need(fq.vy, "v_y", name);
        const double w = need(fq.wind_speed, "wind speed", name);
        const double psi = need(fq.psi, "heading", name);
        const double zeta = need(fq.wind_direction, "wind direction", name);
        const double ax = vx - w * std::cos(psi - zeta);
        const double ay = vy + w * std::sin(psi - zeta);
        if (std::hypot(ax, ay) <= kDegenerateNorm) undefined(name, "(a_x, a_y) = (0, 0)");
        value = std::atan2(ay, ax);
        break;
      }
      case MeasurementKind::accel_angle: {
        const double ax = need(fq.vx_dot, "vdot_x", name), ay = need(fq.vy_dot, "vdot_y", name);
        if (std::hypot(ax, ay) <= kDegenerateNorm) {
          undefined(name, "(vdot_x, vdot_y) = (0, 0)");
        }
        value = std::atan2(ay, ax);
        break;
      }
      case MeasurementKind::ground_speed:
        value = std::hypot(need(fq.vx, "v_x", name), need(fq.vy, "v_y", name));
        break;
      case MeasurementKind::airspeed: {
        const double vx = need(fq.vx, "v_x", name), vy = need(fq.vy, "v_y", name);
        const double w = need(fq.wind_speed, "wind speed", name);
        const double psi = need(fq.psi, "heading", name);
        const double zeta = need(fq.wind_direction, "wind direction", name);
        value = std::hypot(vx - w * std::cos(psi - zeta), vy + w * std::sin(psi - zeta));
        break;
      }
      case MeasurementKind::optic_flow: {
        const double z = need(fq.z, "altitude", name);
        if (z <= kDegenerateNorm) undefined(name, "z <= 0");
        value = std::hypot(need(fq.vx, "v_x", name), need(fq.vy, "v_y", name)) / z;
        break;
      }
      case MeasurementKind::forward_optic_flow: {
        const double z = need(fq.z, "altitude", name);
        if (z <= kDegenerateNorm) undefined(name, "z <= 0");
        value = need(fq.vx, "v_x", name) / z;
        break;
      }
      case MeasurementKind::accel_magnitude: {
        const double vx = need(fq.vx, "v_x", name), vy = need(fq.vy, "v_y", name);
        const double rate = need(fq.psi_dot, "yaw rate", name);
        const double ax = need(fq.vx_dot, "vdot_x", name), ay = need(fq.vy_dot, "vdot_y", name);
        value = std::hypot(ax - vy * rate, ay + vx * rate);
        break;
      }
      case MeasurementKind::state:
        value = x[static_cast<Eigen::Index>(require_label(model.state_labels(), e.state_name))];
        break;
    }

    if (e.sincos) {
      y[out++] = std::sin(value);
      y[out++] = std::cos(value);
    } else {
      const bool angle = labels[static_cast<std::size_t>(out)].kind == LabelKind::angle;
      if (angle && reference != nullptr) value = unwrap_to((*reference)[out], value);
      y[out++] = value;
    }
  }
  return y;
}

SystemModel bind_catalogue(const SystemModel& model, const MeasurementCatalogue& catalogue) {
  LabelList labels = catalogue.labels(model.state_labels());
  // The lambda captures the unbound model; it must not refer to the result.
  auto base = std::make_shared<const SystemModel>(model);
  return model.with_measurements(
      std::move(labels), [base, catalogue](const Vector& x, const Vector& u) {
        return measure(*base, x, u, catalogue);
      });
}

}  // namespace bounds::dynamics
