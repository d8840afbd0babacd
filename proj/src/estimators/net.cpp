#include "bounds/estimators/net.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace bounds::estimators {
namespace {

constexpr const char* kMagic = "bounds-net";
constexpr int kFormatVersion = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string expect_key(std::istream& in, const char* key) {
  std::string token;
  if (!(in >> token) || token != key) {
    throw InputError(std::string("net file: expected '") + key + "', found '" + token + "'");
  }
  return token;
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw InputError(std::string("net file: cannot read ") + what);
  return v;
}

double read_double(std::istream& in, const char* what) {
  // operator>> rejects "nan"/"inf"; parse through strtod so those are
  // detected and reported as non-finite instead.
  std::string token;
  if (!(in >> token)) throw InputError(std::string("net file: cannot read ") + what);
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw InputError(std::string("net file: malformed number '") + token + "' in " + what);
  }
  if (!std::isfinite(v)) throw InputError(std::string("net file: non-finite value in ") + what);
  return v;
}

}  // namespace

EstimatorNet::EstimatorNet(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw InputError("network needs at least an input and an output layer");
  for (int s : sizes_) {
    if (s <= 0) throw InputError("layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.push_back(Matrix::Zero(sizes_[l + 1], sizes_[l]));
    biases_.push_back(Vector::Zero(sizes_[l + 1]));
  }
}

EstimatorNet EstimatorNet::he_initialized(std::vector<int> layer_sizes, std::uint64_t seed) {
  EstimatorNet net(std::move(layer_sizes));
  std::mt19937_64 rng(seed);
  for (auto& w : net.weights_) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(w.cols())));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = normal(rng);
    }
  }
  return net;
}

std::size_t EstimatorNet::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

void EstimatorNet::check_input(Eigen::Index cols) const {
  if (sizes_.empty()) throw InputError("network has no layers");
  if (cols != sizes_.front()) {
    throw InputError("network input has " + std::to_string(cols) + " entries, expected " +
                     std::to_string(sizes_.front()));
  }
}

Matrix EstimatorNet::frame_inputs(const Matrix& inputs) const {
  check_input(inputs.cols());
  Matrix out = inputs;
  if (frame.active()) {
    if (frame.reference >= inputs.cols()) throw InputError("input frame reference out of range");
    const Vector ref = inputs.col(frame.reference);
    for (int i : frame.relative) {
      if (i < 0 || i >= inputs.cols()) throw InputError("input frame index out of range");
      out.col(i) -= ref;
    }
  }
  if (frame.shift.size() != 0) {
    if (frame.shift.size() != inputs.cols() || frame.scale.size() != inputs.cols()) {
      throw InputError("input normalization size does not match the input layer");
    }
    out.rowwise() -= frame.shift.transpose();
    out.array().rowwise() /= frame.scale.transpose().array();
  }
  return out;
}

Vector EstimatorNet::output_offset(const Matrix& inputs) const {
  if (!frame.active() || !frame.shift_output) return Vector::Zero(inputs.rows());
  return inputs.col(frame.reference);
}

std::vector<Matrix> EstimatorNet::forward_trace(const Matrix& x) const {
  std::vector<Matrix> trace;
  trace.reserve(weights_.size() + 1);
  trace.push_back(x);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Matrix z = weights_[l] * trace.back();
    z.colwise() += biases_[l];
    if (l + 1 < weights_.size()) z = z.cwiseMax(0.0);
    trace.push_back(std::move(z));
  }
  return trace;
}

NetGradient EstimatorNet::backward(const std::vector<Matrix>& trace,
                                   const Matrix& output_grad) const {
  NetGradient g;
  g.weights.resize(weights_.size());
  g.biases.resize(weights_.size());
  Matrix delta = output_grad;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    g.weights[l].noalias() = delta * trace[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Matrix back = weights_[l].transpose() * delta;
      // ReLU derivative: pass where the activation was positive.
      delta = back.cwiseProduct((trace[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

Matrix EstimatorNet::forward_batch(const Matrix& inputs) const {
  const Matrix framed = frame_inputs(inputs);
  Matrix out = forward_trace(framed.transpose()).back().transpose();
  out.colwise() += output_offset(inputs);
  return out;
}

Vector EstimatorNet::forward(const Vector& input) const {
  return forward_batch(input.transpose()).row(0).transpose();
}

void EstimatorNet::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "layers " << sizes_.size();
  for (int s : sizes_) out << ' ' << s;
  out << '\n';
  out << "output " << (output_kind == OutputKind::angle ? "angle" : "linear") << '\n';
  out << "input_noise_std " << fmt(input_noise_std) << '\n';
  out << "window " << window << '\n';
  out << "labels " << input_labels.size();
  for (const auto& l : input_labels) out << ' ' << l;
  out << '\n';
  out << "frame " << frame.reference << ' ' << (frame.shift_output ? 1 : 0) << ' '
      << frame.relative.size();
  for (int i : frame.relative) out << ' ' << i;
  out << '\n';
  out << "normalization " << frame.shift.size() << '\n';
  for (Eigen::Index i = 0; i < frame.shift.size(); ++i) {
    out << fmt(frame.shift[i]) << ' ' << fmt(frame.scale[i]) << '\n';
  }
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    out << "W " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? " " : "") << fmt(w(i, j));
      out << '\n';
    }
    out << "b " << l << ' ' << biases_[l].size() << '\n';
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) {
      out << (i ? " " : "") << fmt(biases_[l][i]);
    }
    out << '\n';
  }
  out << "end\n";
}

EstimatorNet EstimatorNet::load(std::istream& in) {
  std::string magic;
  // Leading '#' lines are stamps written by callers.
  while ((in >> std::ws) && in.peek() == '#') std::getline(in, magic);
  if (!(in >> magic) || magic != kMagic) throw InputError("not a network file");
  const int version = read_value<int>(in, "format version");
  if (version != kFormatVersion) {
    throw InputError("unsupported network format version " + std::to_string(version));
  }
  expect_key(in, "layers");
  const auto n_layers = read_value<std::size_t>(in, "layer count");
  std::vector<int> sizes(n_layers);
  for (auto& s : sizes) s = read_value<int>(in, "layer size");
  EstimatorNet net(sizes);

  expect_key(in, "output");
  const auto kind = read_value<std::string>(in, "output kind");
  if (kind == "angle") {
    net.output_kind = OutputKind::angle;
  } else if (kind == "linear") {
    net.output_kind = OutputKind::linear;
  } else {
    throw InputError("net file: unknown output kind '" + kind + "'");
  }
  expect_key(in, "input_noise_std");
  net.input_noise_std = read_double(in, "input_noise_std");
  expect_key(in, "window");
  net.window = read_value<int>(in, "window");
  expect_key(in, "labels");
  net.input_labels.resize(read_value<std::size_t>(in, "label count"));
  for (auto& l : net.input_labels) l = read_value<std::string>(in, "label");
  expect_key(in, "frame");
  net.frame.reference = read_value<int>(in, "frame reference");
  net.frame.shift_output = read_value<int>(in, "frame shift") != 0;
  net.frame.relative.resize(read_value<std::size_t>(in, "frame count"));
  for (auto& i : net.frame.relative) i = read_value<int>(in, "frame index");
  expect_key(in, "normalization");
  const auto n_norm = read_value<Eigen::Index>(in, "normalization size");
  if (n_norm != 0 && n_norm != net.input_size()) {
    throw InputError("net file: normalization size does not match the input layer");
  }
  net.frame.shift.resize(n_norm);
  net.frame.scale.resize(n_norm);
  for (Eigen::Index i = 0; i < n_norm; ++i) {
    net.frame.shift[i] = read_double(in, "normalization");
    net.frame.scale[i] = read_double(in, "normalization");
    if (!(net.frame.scale[i] > 0.0)) throw InputError("net file: normalization scale must be positive");
  }

  for (std::size_t l = 0; l < net.weights_.size(); ++l) {
    auto& w = net.weights_[l];
    expect_key(in, "W");
    const auto idx = read_value<std::size_t>(in, "layer index");
    const auto rows = read_value<Eigen::Index>(in, "rows");
    const auto cols = read_value<Eigen::Index>(in, "cols");
    if (idx != l || rows != w.rows() || cols != w.cols()) {
      throw InputError("net file: weight block " + std::to_string(l) + " has wrong shape");
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = read_double(in, "weights");
    }
    expect_key(in, "b");
    const auto bidx = read_value<std::size_t>(in, "layer index");
    const auto bsize = read_value<Eigen::Index>(in, "bias size");
    if (bidx != l || bsize != net.biases_[l].size()) {
      throw InputError("net file: bias block " + std::to_string(l) + " has wrong shape");
    }
    for (Eigen::Index i = 0; i < bsize; ++i) net.biases_[l][i] = read_double(in, "biases");
  }
  expect_key(in, "end");
  return net;
}

void EstimatorNet::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write network file '" + path + "'");
  save(out);
  if (!out) throw InputError("failed writing network file '" + path + "'");
}

EstimatorNet EstimatorNet::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open network file '" + path + "'");
  return load(in);
}

bool operator==(const EstimatorNet& a, const EstimatorNet& b) {
  if (a.sizes_ != b.sizes_ || a.output_kind != b.output_kind ||
      a.input_noise_std != b.input_noise_std || a.window != b.window ||
      a.input_labels != b.input_labels || !(a.frame == b.frame)) {
    return false;
  }
  for (std::size_t l = 0; l < a.weights_.size(); ++l) {
    if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) return false;
  }
  return true;
}

double circular_loss(double a, double b) {
  const double ds = std::sin(a) - std::sin(b);
  const double dc = std::cos(a) - std::cos(b);
  return ds * ds + dc * dc;
}

double batch_loss(LossKind kind, const Matrix& predicted, const Matrix& target,
                  Matrix* gradient) {
  if (predicted.rows() != target.rows() || predicted.cols() != target.cols()) {
    throw InputError("prediction and target shapes differ");
  }
  const double count = static_cast<double>(predicted.size());
  if (count == 0) throw InputError("empty batch");
  if (kind == LossKind::mse) {
    const Matrix diff = predicted - target;
    if (gradient) *gradient = (2.0 / count) * diff;
    return diff.squaredNorm() / count;
  }
  // 2 - 2 cos(p - t), gradient 2 sin(p - t).
  const Matrix diff = predicted - target;
  if (gradient) *gradient = (2.0 / count) * diff.array().sin().matrix();
  return (2.0 - 2.0 * diff.array().cos()).sum() / count;
}

}  // namespace bounds::estimators
