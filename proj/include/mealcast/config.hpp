#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "mealcast/network.hpp"
#include "mealcast/training.hpp"

namespace mealcast {

/// Everything a CLI run needs besides file paths. `train.seed` drives the
/// split, weight initialization, and pattern shuffling; grid searches use it
/// as the first repeat seed.
struct PipelineConfig {
  TrainConfig train;
  std::string topology = "8-10-10-1";
  std::string activations = "logsig-logsig-tansig";
  double train_fraction = 0.70;
  double outlier_k = 3.0;
  double weight_range = kDefaultWeightRange;
  int repeats = 3;
  unsigned threads = 0;
  /// Empty means the default ten-candidate grid.
  std::string grid;

  /// Applies one `key=value` setting; throws a validation error on an
  /// unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);
  void validate() const;
};

/// Plain-text `key=value` lines. Blank lines and everything after a `#` are
/// ignored.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);
/// Every key with its current value, loadable by parse_config.
std::string format_config(const PipelineConfig& cfg);

}  // namespace mealcast
