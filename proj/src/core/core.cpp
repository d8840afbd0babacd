#include "bounds/core.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

namespace bounds {

std::string_view to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::linear:
      return "linear";
    case LabelKind::angle:
      return "angle";
    case LabelKind::magnitude:
      return "magnitude";
  }
  return "linear";
}

LabelKind label_kind_from_string(std::string_view text) {
  if (text == "linear") return LabelKind::linear;
  if (text == "angle") return LabelKind::angle;
  if (text == "magnitude") return LabelKind::magnitude;
  throw InputError("unknown label kind '" + std::string(text) + "'");
}

std::optional<std::size_t> find_label(const LabelList& labels, std::string_view name) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t require_label(const LabelList& labels, std::string_view name) {
  if (auto idx = find_label(labels, name)) return *idx;
  throw InputError("unknown label '" + std::string(name) + "'");
}

std::vector<std::string> label_names(const LabelList& labels) {
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (const auto& l : labels) names.push_back(l.name);
  return names;
}

void check_unique(const LabelList& labels, std::string_view what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (l.name.empty()) throw InputError(std::string(what) + " label with empty name");
    if (!seen.insert(l.name).second) {
      throw InputError("duplicate " + std::string(what) + " label '" + l.name + "'");
    }
  }
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double unwrap_to(double reference, double angle) {
  return reference + wrap_angle(angle - reference);
}

void unwrap_series(std::vector<double>& series) {
  for (std::size_t k = 1; k < series.size(); ++k) {
    series[k] = unwrap_to(series[k - 1], series[k]);
  }
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace bounds
