#include "bounds/estimators/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bounds::estimators {

TrainConfig BinStudyConfig::default_train() {
  TrainConfig c;
  c.epochs = 500;
  c.loss = LossKind::circular;
  c.seed = 1;
  return c;
}

BinStudyResult run_bin_study(const TrainingDataset& data, const BinStudyConfig& config) {
  if (config.bins < 2) throw InputError("bin study needs at least two bins");
  const auto bins = curate_by_observability(data, config.bins, CurationMode::sorted);
  BinStudyResult out;
  out.bin_mean_log_variance.resize(config.bins);
  out.bin_error_variance.resize(config.bins);
  std::vector<EstimatorNet> nets;
  TrainingDataset top_test;
  for (int b = 0; b < config.bins; ++b) {
    const auto split = split_dataset(bins[static_cast<std::size_t>(b)], config.test_fraction, config.split_seed);
    auto result = train(make_wind_net(config.net_seed + static_cast<std::uint64_t>(b)), split.train,
                        &split.test, config.train);
    out.bin_mean_log_variance[b] = bins[static_cast<std::size_t>(b)].observability.array().log10().mean();
    out.bin_error_variance[b] = variance(prediction_errors(result.net, split.test));
    nets.push_back(std::move(result.net));
    if (b == 0) top_test = split.test;
  }
  out.rank_correlation = spearman(out.bin_mean_log_variance, out.bin_error_variance);
  out.top_on_top = variance(prediction_errors(nets.front(), top_test));
  out.bottom_on_top = variance(prediction_errors(nets.back(), top_test));
  return out;
}

TrainingDataset most_observable(const TrainingDataset& data, double fraction) {
  data.validate();
  if (data.observability.size() != data.size()) throw InputError("dataset has no observability labels");
  if (!(fraction > 0.0) || fraction > 1.0) throw InputError("observable fraction must lie in (0, 1]");
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(data.size()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  std::stable_sort(rows.begin(), rows.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return data.observability[a] < data.observability[b]; });
  const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(rows.size()) * fraction));
  rows.resize(std::min(keep, rows.size()));
  return data.subset(rows);
}

WindDatasetConfig WindFilterRecipe::default_data() {
  WindDatasetConfig c;
  c.trajectories = 4000;
  c.seed = 11;
  c.ranges.forward_speed = {0.5, 2.0};
  c.ranges.wind_speed = {0.5, 1.5};
  c.ranges.speed_ratio = {0.8, 1.25};
  return c;
}

TrainConfig WindFilterRecipe::default_observability_train() {
  TrainConfig c;
  c.epochs = 100;
  c.seed = 2;
  return c;
}

WindFilterNets train_wind_filter_nets(const TrainingDataset& data, const WindFilterRecipe& recipe) {
  WindFilterNets out;
  const auto top = most_observable(data, recipe.top_fraction);
  const auto split = split_dataset(top, recipe.test_fraction, recipe.split_seed);
  out.wind = train(make_wind_net(recipe.wind_net_seed), split.train, &split.test, recipe.wind_train);

  auto logs = log_observability_targets(data);
  if (recipe.observability_samples > 0 && recipe.observability_samples < logs.size()) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(recipe.observability_samples));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    logs = logs.subset(rows);
  }
  const auto osplit = split_dataset(logs, recipe.test_fraction, recipe.split_seed);
  auto report = train_observability_estimator(make_wind_observability_net(recipe.observability_net_seed),
                                              osplit.train, osplit.test, recipe.observability_train);
  out.observability = std::move(report.result);
  out.within_one_order = report.within_one_order;
  return out;
}

Vector predicted_variance_series(const EstimatorNet& observability_net, const trajectory::Trajectory& traj) {
  const Eigen::Index count = traj.length() - kWindNetWindow + 1;
  if (count < 1) throw InputError("trajectory is shorter than the wind window");
  Matrix batch(count, observability_net.input_size());
  for (Eigen::Index k = 0; k < count; ++k) batch.row(k) = wind_window(traj, k).transpose();
  const Vector logv = observability_net.forward_batch(batch).col(0);
  return (logv.array() * std::log(10.0)).exp();
}

}  // namespace bounds::estimators
