#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mealcast/dataio.hpp"
#include "mealcast/metrics.hpp"

namespace mealcast {

/// exit_code: 0 success, 1 validation error, 2 runtime error.
struct CommandOutcome {
  int exit_code = 0;
  std::string summary;
  std::vector<std::string> artifacts;

  bool ok() const { return exit_code == 0; }
};

/// Writes a synthetic dataset CSV.
CommandOutcome cmd_synth(std::size_t n, std::uint64_t seed, const std::string& out_path,
                         const SynthProfile& profile = {});

/// clean -> split -> encode -> train -> persist. Besides the model file it
/// writes `<model_out>.history.csv`, `<model_out>.metrics.csv`, and the
/// split itself as `<model_out>.train.csv` / `<model_out>.test.csv`.
/// An empty config path means all defaults.
CommandOutcome cmd_train(const std::string& data_path, const std::string& config_path,
                         const std::string& model_out, std::optional<std::uint64_t> seed = {});

/// Runs the configured grid (default: ten candidates). Writes the results
/// table and `<results_out>.best_model.txt`.
CommandOutcome cmd_search(const std::string& data_path, const std::string& config_path,
                          const std::string& results_out, std::optional<std::uint64_t> seed = {});

/// Per-row metrics of the model on `data_path` in normalized demand units.
/// Writes the report table and `<report_out>.series.csv`.
CommandOutcome cmd_evaluate(const std::string& model_path, const std::string& data_path,
                            const std::string& report_out, RowMetric mode);

/// Integer demand forecast for one row; the summary is the number.
CommandOutcome cmd_predict(const std::string& model_path, const RawRow& row);

}  // namespace mealcast
