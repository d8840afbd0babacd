#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bounds {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::string_view kVersion = "0.1.0";

/// How a labeled quantity behaves under perturbation and differencing.
enum class LabelKind { linear, angle, magnitude };

std::string_view to_string(LabelKind kind);
LabelKind label_kind_from_string(std::string_view text);

struct Label {
  std::string name;
  std::string unit;
  LabelKind kind = LabelKind::linear;

  friend bool operator==(const Label&, const Label&) = default;
};

using LabelList = std::vector<Label>;

/// Index of `name` in `labels`, or nullopt.
std::optional<std::size_t> find_label(const LabelList& labels, std::string_view name);
/// Index of `name` in `labels`; throws InputError naming the missing label.
std::size_t require_label(const LabelList& labels, std::string_view name);
std::vector<std::string> label_names(const LabelList& labels);
/// Throws InputError on the first repeated name.
void check_unique(const LabelList& labels, std::string_view what);

// Error hierarchy. InputError covers malformed configuration, files, and
// violated preconditions; NumericalError covers failures that surface while
// computing (undefined measurements, factorization breakdown, divergence).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);
/// Returns the representative of `angle` (mod 2 pi) closest to `reference`.
double unwrap_to(double reference, double angle);
/// In-place unwrap of a sampled angle series.
void unwrap_series(std::vector<double>& series);

bool all_finite(const Vector& v);

}  // namespace bounds
