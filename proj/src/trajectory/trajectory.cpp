#include "bounds/trajectory/trajectory.hpp"

namespace bounds::trajectory {
namespace {

void check_block(const LabelList& labels, const Matrix& values, Eigen::Index rows,
                 std::string_view what) {
  if (values.cols() != static_cast<Eigen::Index>(labels.size())) {
    throw InputError(std::string(what) + " array has " + std::to_string(values.cols()) +
                     " columns but " + std::to_string(labels.size()) + " labels");
  }
  if (values.cols() > 0 && values.rows() != rows) {
    throw InputError(std::string(what) + " array has " + std::to_string(values.rows()) +
                     " rows, expected " + std::to_string(rows));
  }
  check_unique(labels, what);
}

}  // namespace

Trajectory::Trajectory(double dt, double t0, LabelList state_labels, Matrix states,
                       LabelList input_labels, Matrix inputs, LabelList measurement_labels,
                       Matrix measurements, Provenance provenance)
    : dt_(dt),
      t0_(t0),
      state_labels_(std::move(state_labels)),
      input_labels_(std::move(input_labels)),
      measurement_labels_(std::move(measurement_labels)),
      states_(std::move(states)),
      inputs_(std::move(inputs)),
      measurements_(std::move(measurements)),
      provenance_(std::move(provenance)) {
  if (!(dt_ > 0.0)) throw InputError("trajectory dt must be positive");
  length_ = std::max({states_.rows(), inputs_.rows(), measurements_.rows()});
  if (length_ == 0) throw InputError("trajectory is empty");
  check_block(state_labels_, states_, length_, "state");
  check_block(input_labels_, inputs_, length_, "input");
  check_block(measurement_labels_, measurements_, length_, "measurement");
  if (states_.cols() == 0) states_.resize(length_, 0);
  if (inputs_.cols() == 0) inputs_.resize(length_, 0);
  if (measurements_.cols() == 0) measurements_.resize(length_, 0);
}

bool Trajectory::has_state(std::string_view name) const {
  return find_label(state_labels_, name).has_value();
}

Vector Trajectory::column(std::string_view name) const {
  if (auto i = find_label(state_labels_, name)) return states_.col(static_cast<Eigen::Index>(*i));
  if (auto i = find_label(input_labels_, name)) return inputs_.col(static_cast<Eigen::Index>(*i));
  if (auto i = find_label(measurement_labels_, name)) {
    return measurements_.col(static_cast<Eigen::Index>(*i));
  }
  throw InputError("trajectory has no column '" + std::string(name) + "'");
}

Vector Trajectory::state_column(std::string_view name) const {
  return states_.col(static_cast<Eigen::Index>(require_label(state_labels_, name)));
}

Vector Trajectory::measurement_column(std::string_view name) const {
  return measurements_.col(static_cast<Eigen::Index>(require_label(measurement_labels_, name)));
}

Trajectory Trajectory::segment(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count <= 0 || first + count > length_) {
    throw InputError("trajectory segment [" + std::to_string(first) + ", " +
                     std::to_string(first + count) + ") outside length " +
                     std::to_string(length_));
  }
  return Trajectory(dt_, time(first), state_labels_, states_.middleRows(first, count),
                    input_labels_, inputs_.middleRows(first, count), measurement_labels_,
                    measurements_.middleRows(first, count), provenance_);
}

Matrix measure_series(const dynamics::SystemModel& model, const Matrix& states,
                      const Matrix& inputs) {
  if (states.rows() != inputs.rows()) {
    throw InputError("measure_series: state and input histories differ in length");
  }
  const auto p = static_cast<Eigen::Index>(model.measurement_dim());
  Matrix out(states.rows(), p);
  const auto& labels = model.measurement_labels();
  for (Eigen::Index k = 0; k < states.rows(); ++k) {
    Vector y = model.measure(states.row(k).transpose(), inputs.row(k).transpose());
    if (k > 0) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (labels[static_cast<std::size_t>(j)].kind == LabelKind::angle) {
          y[j] = unwrap_to(out(k - 1, j), y[j]);
        }
      }
    }
    out.row(k) = y.transpose();
  }
  return out;
}

Trajectory simulate_trajectory(const dynamics::SystemModel& model, const Vector& x0,
                               const Matrix& inputs, double dt, std::uint64_t seed) {
  if (inputs.rows() == 0) throw InputError("simulate_trajectory needs at least one input row");
  const Matrix states = dynamics::simulate(model, x0, inputs, dt);
  Matrix padded(states.rows(), inputs.cols());
  padded.topRows(inputs.rows()) = inputs;
  padded.row(inputs.rows()) = inputs.row(inputs.rows() - 1);
  Matrix y = measure_series(model, states, padded);
  Provenance prov;
  prov.kind = Provenance::Kind::simulated;
  prov.seed = seed;
  return Trajectory(dt, 0.0, model.state_labels(), states, model.input_labels(), padded,
                    model.measurement_labels(), std::move(y), prov);
}

}  // namespace bounds::trajectory
