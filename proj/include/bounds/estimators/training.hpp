#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bounds/core.hpp"
#include "bounds/estimators/net.hpp"

namespace bounds::estimators {

/// Samples for a single-output estimator. `observability` holds the
/// per-sample minimum error variance of the estimated state (smaller means
/// more observable); `group` identifies the source trajectory so that splits
/// never put windows of one trajectory on both sides.
struct TrainingDataset {
  Matrix inputs;                    // N x d
  Matrix targets;                   // N x q
  Vector observability;             // N, or empty when unknown
  std::vector<std::int64_t> group;  // N, or empty (each sample its own group)
  std::vector<int> bins;            // N, filled by curation; empty otherwise

  Eigen::Index size() const { return inputs.rows(); }
  void validate() const;
  TrainingDataset subset(const std::vector<Eigen::Index>& rows) const;
};

struct DatasetSplit {
  TrainingDataset train;
  TrainingDataset test;
  double test_fraction = 0.2;
};

/// Random split by group with the given test fraction (default 80-20).
DatasetSplit split_dataset(const TrainingDataset& data, double test_fraction,
                           std::uint64_t seed);

enum class CurationMode { sorted, random };

/// Partitions into `bins` equal bins (sizes differ by at most one). Sorted
/// mode orders by observability descending, so bin 0 holds the most
/// observable samples (smallest variance). Random mode shuffles with `seed`.
/// The returned datasets carry their bin index in `bins`.
std::vector<TrainingDataset> curate_by_observability(const TrainingDataset& data, int bins,
                                                     CurationMode mode, std::uint64_t seed = 0);

struct TrainConfig {
  int epochs = 500;
  int batch_size = 1024;
  double learning_rate = 1e-3;
  double lr_decay = 1.0;  // multiplied into the learning rate after each epoch
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double input_noise_std = 0.01;
  LossKind loss = LossKind::mse;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochLoss {
  int epoch;
  double train_loss;
  double test_loss;  // NaN when no test set was supplied
};

struct TrainingResult {
  EstimatorNet net;
  std::vector<EpochLoss> curve;  // epoch 0 is the untrained network
};

/// Mini-batch Adam. Gaussian noise with `input_noise_std` is added to the
/// inputs of each training batch only. Losses in the curve are evaluated on
/// the clean inputs after each epoch. Throws NumericalError when a batch
/// loss becomes non-finite.
TrainingResult train(EstimatorNet net, const TrainingDataset& train_set,
                     const TrainingDataset* test_set, const TrainConfig& config);

/// Mean loss of `net` on a dataset.
double evaluate_loss(const EstimatorNet& net, const TrainingDataset& data, LossKind loss);

/// Per-sample prediction error (wrapped for angle outputs) on output 0.
Vector prediction_errors(const EstimatorNet& net, const TrainingDataset& data);

/// Sample variance.
double variance(const Vector& v);

/// Spearman rank correlation with average ranks for ties.
double spearman(const Vector& a, const Vector& b);

struct ObservabilityEstimatorReport {
  TrainingResult result;
  double within_one_order = 0.0;  // fraction of test predictions
};

/// Trains a network on log10 minimum-error-variance targets. `data.targets`
/// must already be log10 values. Reports the fraction of test predictions
/// within one order of magnitude of the truth.
ObservabilityEstimatorReport train_observability_estimator(EstimatorNet net,
                                                           const TrainingDataset& train_set,
                                                           const TrainingDataset& test_set,
                                                           TrainConfig config);

/// Writes `epoch,train_loss,test_loss` with a stamp comment.
void write_training_curve_csv(const std::string& path, const std::vector<EpochLoss>& curve,
                              std::uint64_t seed);

}  // namespace bounds::estimators
