#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bounds/core.hpp"

namespace bounds::estimators {

enum class OutputKind { linear, angle };

/// Fixed preprocessing ahead of the first layer.
///
/// Inputs listed in `relative` have input `reference` subtracted; when
/// `shift_output` is set the reference is added back to every output. For the
/// wind net this removes the absolute heading, so the network only has to
/// learn the body-frame geometry. Afterwards each input i becomes
/// (x_i - shift_i) / scale_i when `shift`/`scale` are non-empty.
struct InputFrame {
  int reference = -1;
  std::vector<int> relative;
  bool shift_output = false;
  Vector shift;
  Vector scale;

  bool active() const { return reference >= 0; }
  friend bool operator==(const InputFrame& a, const InputFrame& b) {
    return a.reference == b.reference && a.relative == b.relative &&
           a.shift_output == b.shift_output && a.shift.size() == b.shift.size() &&
           a.shift == b.shift && a.scale.size() == b.scale.size() && a.scale == b.scale;
  }
};

/// Gradients of a scalar loss with respect to every parameter, laid out like
/// the network's weights and biases.
struct NetGradient {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

/// Fully connected feed-forward network: rectified hidden layers and a
/// linear output layer.
class EstimatorNet {
 public:
  EstimatorNet() = default;
  /// Zero-initialized network with the given layer sizes (input first).
  explicit EstimatorNet(std::vector<int> layer_sizes);

  /// He-initialized weights, zero biases.
  static EstimatorNet he_initialized(std::vector<int> layer_sizes, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return weights_.size(); }
  std::size_t parameter_count() const;

  std::vector<Matrix>& weights() { return weights_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  std::vector<Vector>& biases() { return biases_; }
  const std::vector<Vector>& biases() const { return biases_; }

  // Metadata carried through serialization.
  OutputKind output_kind = OutputKind::linear;
  double input_noise_std = 0.0;
  int window = 1;
  std::vector<std::string> input_labels;
  InputFrame frame;

  /// Single-sample forward pass.
  Vector forward(const Vector& input) const;
  /// Batch forward pass; rows of `inputs` are samples. Returns N x outputs.
  Matrix forward_batch(const Matrix& inputs) const;

  /// Applies the input frame to a batch (rows are samples).
  Matrix frame_inputs(const Matrix& inputs) const;
  /// Per-sample amount added to every output by the frame (zeros unless
  /// `frame.shift_output`).
  Vector output_offset(const Matrix& inputs) const;

  /// Forward pass on framed inputs (columns are samples) keeping every
  /// layer's activation; trace[0] is the input, trace.back() the output.
  std::vector<Matrix> forward_trace(const Matrix& framed_inputs_t) const;
  /// Backpropagates dLoss/dOutput (outputs x N) through a forward trace.
  NetGradient backward(const std::vector<Matrix>& trace, const Matrix& output_grad) const;

  void save(std::ostream& out) const;
  static EstimatorNet load(std::istream& in);
  void save_file(const std::string& path) const;
  static EstimatorNet load_file(const std::string& path);

  friend bool operator==(const EstimatorNet& a, const EstimatorNet& b);

 private:
  void check_input(Eigen::Index cols) const;

  std::vector<int> sizes_;
  std::vector<Matrix> weights_;  // layer l: sizes[l+1] x sizes[l]
  std::vector<Vector> biases_;
};

/// (sin a - sin b)^2 + (cos a - cos b)^2, in [0, 4].
double circular_loss(double a, double b);

enum class LossKind { mse, circular };

/// Mean loss over samples and outputs, and its gradient with respect to the
/// predictions (same shape as `predicted`).
double batch_loss(LossKind kind, const Matrix& predicted, const Matrix& target,
                  Matrix* gradient = nullptr);

}  // namespace bounds::estimators
