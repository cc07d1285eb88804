#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mealcast/encoding.hpp"
#include "mealcast/network.hpp"
#include "mealcast/training.hpp"

namespace mealcast {

struct CandidateSpec {
  Topology topology;
  std::vector<ActivationKind> activations;
  TrainerKind trainer = TrainerKind::levenberg_marquardt;
  int repeats = 3;
  std::uint64_t seed_base = 1;

  /// "8-10-10-1:logsig-logsig-tansig"
  std::string label() const;
  void validate() const;
};

/// Parses "topology:activations[;topology:activations...]".
std::vector<CandidateSpec> parse_grid(std::string_view text, TrainerKind trainer, int repeats,
                                      std::uint64_t seed_base);

struct CandidateResult {
  CandidateSpec spec;
  std::size_t grid_index = 0;
  std::uint64_t seed = 0;  // seed of the reported (best) repeat
  double train_r = 0.0;
  double test_r = 0.0;
  double train_mse = 0.0;
  double test_mse = 0.0;
  TrainHistory history;
  std::optional<MlpModel> model;
  std::string error;  // non-empty when every repeat failed

  bool ok() const { return error.empty(); }
};

/// The ten reference architectures, all trained with
/// Levenberg-Marquardt.
std::vector<CandidateSpec> default_grid(int repeats = 3, std::uint64_t seed_base = 1);

struct GridOptions {
  double weight_range = kDefaultWeightRange;
  unsigned threads = 0;  // 0 = hardware concurrency
  /// Called with the input matrix handed to each trainer call.
  std::function<void(const Eigen::MatrixXd&)> train_observer;
};

/// Trains every candidate `repeats` times (seeds seed_base + i) and keeps the
/// repeat with the highest test R. Results follow grid order and do not
/// depend on scheduling.
std::vector<CandidateResult> run_grid(const FeatureMatrix& train, const FeatureMatrix& test,
                                      const std::vector<CandidateSpec>& grid, const TrainConfig& cfg,
                                      const GridOptions& options = {});

/// Highest test R, then lowest test MSE, then earliest grid position. Failed
/// candidates are ignored. Throws when nothing is eligible.
const CandidateResult& select_best(const std::vector<CandidateResult>& results);

/// Delimited results table: no, model, trainer,
/// activations, hidden layers, hidden neurons, train R, test R, test MSE,
/// epochs, stop reason, error.
std::string format_grid_csv(const std::vector<CandidateResult>& results);

}  // namespace mealcast
