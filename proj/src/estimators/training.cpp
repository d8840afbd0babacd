#include "bounds/estimators/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace bounds::estimators {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix gather_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

struct AdamState {
  std::vector<Matrix> mw, vw;
  std::vector<Vector> mb, vb;

  explicit AdamState(const EstimatorNet& net) {
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      mw.push_back(Matrix::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      vw.push_back(mw.back());
      mb.push_back(Vector::Zero(net.biases()[l].size()));
      vb.push_back(mb.back());
    }
  }
};

template <typename Param, typename Grad>
void adam_update(Param& p, Param& m, Param& v, const Grad& g, double lr, double b1, double b2,
                 double eps, double c1, double c2) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace

void TrainingDataset::validate() const {
  const Eigen::Index n = inputs.rows();
  if (targets.rows() != n) {
    throw InputError("dataset has " + std::to_string(n) + " inputs but " +
                     std::to_string(targets.rows()) + " targets");
  }
  if (observability.size() != 0 && observability.size() != n) {
    throw InputError("dataset observability length does not match sample count");
  }
  if (!group.empty() && static_cast<Eigen::Index>(group.size()) != n) {
    throw InputError("dataset group length does not match sample count");
  }
  if (!bins.empty() && static_cast<Eigen::Index>(bins.size()) != n) {
    throw InputError("dataset bin length does not match sample count");
  }
  if (!inputs.allFinite() || !targets.allFinite() ||
      (observability.size() && !observability.allFinite())) {
    throw InputError("dataset contains non-finite values");
  }
}

TrainingDataset TrainingDataset::subset(const std::vector<Eigen::Index>& rows) const {
  TrainingDataset out;
  out.inputs = gather_rows(inputs, rows);
  out.targets = gather_rows(targets, rows);
  if (observability.size()) {
    out.observability.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.observability[static_cast<Eigen::Index>(i)] = observability[rows[i]];
    }
  }
  for (auto r : rows) {
    if (!group.empty()) out.group.push_back(group[static_cast<std::size_t>(r)]);
    if (!bins.empty()) out.bins.push_back(bins[static_cast<std::size_t>(r)]);
  }
  return out;
}

DatasetSplit split_dataset(const TrainingDataset& data, double test_fraction,
                           std::uint64_t seed) {
  data.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InputError("test fraction must lie in (0, 1)");
  }
  const Eigen::Index n = data.size();
  std::vector<std::int64_t> groups;
  if (data.group.empty()) {
    groups.resize(static_cast<std::size_t>(n));
    std::iota(groups.begin(), groups.end(), 0);
  } else {
    groups = data.group;
  }
  std::vector<std::int64_t> unique = groups;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < 2) throw InputError("split needs at least two groups");

  std::mt19937_64 rng(seed);
  std::shuffle(unique.begin(), unique.end(), rng);
  auto n_test = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(unique.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, unique.size() - 1);
  std::vector<std::int64_t> test_groups(unique.begin(), unique.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::sort(test_groups.begin(), test_groups.end());

  std::vector<Eigen::Index> train_rows, test_rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool is_test = std::binary_search(test_groups.begin(), test_groups.end(),
                                            groups[static_cast<std::size_t>(i)]);
    (is_test ? test_rows : train_rows).push_back(i);
  }
  return {data.subset(train_rows), data.subset(test_rows), test_fraction};
}

std::vector<TrainingDataset> curate_by_observability(const TrainingDataset& data, int bins,
                                                     CurationMode mode, std::uint64_t seed) {
  data.validate();
  if (data.observability.size() == 0) {
    throw InputError("curation needs per-sample observability values");
  }
  const Eigen::Index n = data.size();
  if (bins <= 0 || bins > n) {
    throw InputError("cannot split " + std::to_string(n) + " samples into " +
                     std::to_string(bins) + " bins");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (mode == CurationMode::sorted) {
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return data.observability[a] < data.observability[b];
    });
  } else {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<TrainingDataset> out;
  for (int b = 0; b < bins; ++b) {
    const auto lo = static_cast<std::size_t>(n * b / bins);
    const auto hi = static_cast<std::size_t>(n * (b + 1) / bins);
    std::vector<Eigen::Index> rows(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                   order.begin() + static_cast<std::ptrdiff_t>(hi));
    TrainingDataset part = data.subset(rows);
    part.bins.assign(rows.size(), b);
    out.push_back(std::move(part));
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw InputError("epochs must be non-negative");
  if (batch_size <= 0) throw InputError("batch size must be positive");
  if (!(learning_rate >= 0.0)) throw InputError("learning rate must be non-negative");
  if (!(lr_decay > 0.0)) throw InputError("learning-rate decay must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InputError("Adam decay rates must lie in [0, 1)");
  }
  if (!(input_noise_std >= 0.0)) throw InputError("input noise std must be non-negative");
}

double evaluate_loss(const EstimatorNet& net, const TrainingDataset& data, LossKind loss) {
  return batch_loss(loss, net.forward_batch(data.inputs), data.targets);
}

TrainingResult train(EstimatorNet net, const TrainingDataset& train_set,
                     const TrainingDataset* test_set, const TrainConfig& config) {
  config.validate();
  train_set.validate();
  if (train_set.size() == 0) throw InputError("training set is empty");
  if (train_set.inputs.cols() != net.input_size() ||
      train_set.targets.cols() != net.output_size()) {
    throw InputError("dataset shape does not match the network");
  }
  if (test_set) test_set->validate();

  net.input_noise_std = config.input_noise_std;
  TrainingResult result;
  const auto record = [&](int epoch) {
    const double tr = evaluate_loss(net, train_set, config.loss);
    const double te = test_set ? evaluate_loss(net, *test_set, config.loss)
                               : std::numeric_limits<double>::quiet_NaN();
    result.curve.push_back({epoch, tr, te});
  };
  record(0);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  AdamState adam(net);
  const Eigen::Index n = train_set.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  double lr = config.learning_rate;
  long step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0, batch = 0; start < n; start += config.batch_size, ++batch) {
      const Eigen::Index stop = std::min<Eigen::Index>(n, start + config.batch_size);
      const std::vector<Eigen::Index> rows(order.begin() + start, order.begin() + stop);
      Matrix x = gather_rows(train_set.inputs, rows);
      const Matrix y = gather_rows(train_set.targets, rows);
      if (config.input_noise_std > 0.0) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) += config.input_noise_std * noise(rng);
        }
      }
      const auto trace = net.forward_trace(net.frame_inputs(x).transpose());
      Matrix pred = trace.back().transpose();
      pred.colwise() += net.output_offset(x);
      Matrix grad;
      const double loss = batch_loss(config.loss, pred, y, &grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw NumericalError("training diverged: non-finite loss at epoch " +
                             std::to_string(epoch) + ", batch " + std::to_string(batch) +
                             " (learning rate " + fmt(lr) + "); lower the learning rate");
      }
      const NetGradient g = net.backward(trace, grad.transpose());
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < net.layer_count(); ++l) {
        adam_update(net.weights()[l], adam.mw[l], adam.vw[l], g.weights[l], lr, config.beta1,
                    config.beta2, config.adam_epsilon, c1, c2);
        adam_update(net.biases()[l], adam.mb[l], adam.vb[l], g.biases[l], lr, config.beta1,
                    config.beta2, config.adam_epsilon, c1, c2);
      }
    }
    lr *= config.lr_decay;
    record(epoch);
  }
  result.net = std::move(net);
  return result;
}

Vector prediction_errors(const EstimatorNet& net, const TrainingDataset& data) {
  const Matrix pred = net.forward_batch(data.inputs);
  Vector err = pred.col(0) - data.targets.col(0);
  if (net.output_kind == OutputKind::angle) {
    for (Eigen::Index i = 0; i < err.size(); ++i) err[i] = wrap_angle(err[i]);
  }
  return err;
}

double variance(const Vector& v) {
  if (v.size() < 2) throw InputError("variance needs at least two samples");
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

namespace {

Vector average_ranks(const Vector& v) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
  Vector ranks(v.size());
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InputError("spearman needs two equal-length series of at least two values");
  }
  const Vector ra = average_ranks(a), rb = average_ranks(b);
  const Vector da = ra.array() - ra.mean(), db = rb.array() - rb.mean();
  const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (denom == 0.0) throw NumericalError("spearman undefined for a constant series");
  return da.dot(db) / denom;
}

ObservabilityEstimatorReport train_observability_estimator(EstimatorNet net,
                                                           const TrainingDataset& train_set,
                                                           const TrainingDataset& test_set,
                                                           TrainConfig config) {
  config.loss = LossKind::mse;
  net.output_kind = OutputKind::linear;
  ObservabilityEstimatorReport report;
  report.result = train(std::move(net), train_set, &test_set, config);
  const Matrix pred = report.result.net.forward_batch(test_set.inputs);
  if (test_set.size() == 0) throw InputError("observability test set is empty");
  Eigen::Index within = 0;
  for (Eigen::Index i = 0; i < test_set.size(); ++i) {
    within += std::abs(pred(i, 0) - test_set.targets(i, 0)) <= 1.0;
  }
  report.within_one_order = static_cast<double>(within) / static_cast<double>(test_set.size());
  return report;
}

void write_training_curve_csv(const std::string& path, const std::vector<EpochLoss>& curve,
                              std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write training curve '" + path + "'");
  out << "# bounds " << kVersion << " seed=" << seed << '\n';
  out << "epoch,train_loss,test_loss\n";
  for (const auto& e : curve) {
    out << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.test_loss) << '\n';
  }
}

}  // namespace bounds::estimators
