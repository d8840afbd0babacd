#pragma once

#include <cstdint>
#include <vector>

#include "bounds/estimators/datasets.hpp"

namespace bounds::estimators {

/// One wind net per observability bin, each evaluated on its own bin's
/// held-out windows.
struct BinStudyConfig {
  int bins = 10;
  TrainConfig train = default_train();
  std::uint64_t net_seed = 100;  // bin b uses net_seed + b
  double test_fraction = 0.2;
  std::uint64_t split_seed = 7;

  static TrainConfig default_train();
};

struct BinStudyResult {
  Vector bin_mean_log_variance;  // mean log10 wind-direction variance per bin
  Vector bin_error_variance;     // test error variance of the bin's net
  double rank_correlation = 0.0; // Spearman of the two
  double top_on_top = 0.0;       // error variance of bin 0's net on bin 0's test set
  double bottom_on_top = 0.0;    // last bin's net on bin 0's test set
};

BinStudyResult run_bin_study(const TrainingDataset& data, const BinStudyConfig& config);

/// The `fraction` most observable samples (smallest variance first, ties in
/// dataset order).
TrainingDataset most_observable(const TrainingDataset& data, double fraction);

/// Nets for the observability-filtered wind estimate: a wind net trained on
/// the most observable windows and an observability net on log10 variance.
struct WindFilterRecipe {
  WindDatasetConfig data = default_data();
  double top_fraction = 0.1;
  TrainConfig wind_train = BinStudyConfig::default_train();
  std::uint64_t wind_net_seed = 100;
  Eigen::Index observability_samples = 30000;  // leading samples used; 0 keeps all
  TrainConfig observability_train = default_observability_train();
  std::uint64_t observability_net_seed = 200;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 7;
  AlphaMapping mapping{0.05, 1.0};

  /// Slower flight and moderate wind, matching the variable-wind scenario.
  static WindDatasetConfig default_data();
  static TrainConfig default_observability_train();
};

struct WindFilterNets {
  TrainingResult wind;
  TrainingResult observability;
  double within_one_order = 0.0;
};

WindFilterNets train_wind_filter_nets(const TrainingDataset& data, const WindFilterRecipe& recipe);

/// Wind-direction variance predicted by an observability net at every wind
/// window start of `traj` (10 raised to the net output).
Vector predicted_variance_series(const EstimatorNet& observability_net,
                                 const trajectory::Trajectory& traj);

}  // namespace bounds::estimators
