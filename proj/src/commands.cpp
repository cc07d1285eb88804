#include "mealcast/commands.hpp"

#include <exception>
#include <functional>
#include <sstream>

#include "mealcast/config.hpp"
#include "mealcast/encoding.hpp"
#include "mealcast/error.hpp"
#include "mealcast/model_io.hpp"
#include "mealcast/network.hpp"
#include "mealcast/search.hpp"
#include "mealcast/training.hpp"
#include "text_util.hpp"

namespace mealcast {

namespace {

using detail::format_fixed;

CommandOutcome guarded(const char* command, const std::function<CommandOutcome()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {static_cast<int>(e.kind()), std::string(command) + ": " + e.what(), {}};
  } catch (const std::exception& e) {
    return {static_cast<int>(ErrorKind::runtime), std::string(command) + ": " + e.what(), {}};
  }
}

PipelineConfig resolve_config(const std::string& config_path, std::optional<std::uint64_t> seed) {
  PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  if (seed) cfg.train.seed = *seed;
  cfg.validate();
  return cfg;
}

struct PreparedData {
  CleaningReport cleaning;
  std::size_t raw_rows = 0;
  SplitResult split;
  FeatureMatrix train;
  FeatureMatrix test;
};

PreparedData prepare(const std::string& data_path, const PipelineConfig& cfg) {
  PreparedData p;
  const auto raw = load_csv(data_path);
  p.raw_rows = raw.size();
  const auto books = build_codebooks();
  auto cleaned = clean(raw, cfg.outlier_k, books);
  p.cleaning = std::move(cleaned.report);
  p.split = split(cleaned.data, cfg.train_fraction, cfg.train.seed);
  const auto bounds = demand_bounds(p.split.train);
  p.train = encode_dataset(p.split.train, books, bounds);
  p.test = encode_dataset(p.split.test, books, bounds);
  return p;
}

std::span<const double> view(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

std::string history_csv(const TrainHistory& h) {
  std::string out = "epoch,mse,stop_reason\n";
  if (h.mse.empty()) return out + "0,," + std::string(to_string(h.stop)) + '\n';
  for (std::size_t i = 0; i < h.mse.size(); ++i) {
    out += std::to_string(i + 1) + ',' + detail::format_exact(h.mse[i]) + ',';
    if (i + 1 == h.mse.size()) out += to_string(h.stop);
    out += '\n';
  }
  return out;
}

std::string split_metrics_row(const char* name, const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  return std::string(name) + ',' + format_fixed(pearson_r(view(y), view(yhat)), 6) + ',' +
         format_fixed(mse(view(y), view(yhat)), 6) + ',' + format_fixed(r2_uncentered(view(y), view(yhat)), 6) + ',' +
         format_fixed(mape_shifted(view(y), view(yhat)), 6) + '\n';
}

}  // namespace

CommandOutcome cmd_synth(std::size_t n, std::uint64_t seed, const std::string& out_path, const SynthProfile& profile) {
  return guarded("synth", [&] {
    if (n == 0) throw validation_error("row count must be at least 1");
    if (out_path.empty()) throw validation_error("no output path given");
    const auto ds = synthesize(n, seed, profile);
    save_csv(ds, out_path);
    return CommandOutcome{0, "wrote " + std::to_string(ds.size()) + " rows to " + out_path, {out_path}};
  });
}

CommandOutcome cmd_train(const std::string& data_path, const std::string& config_path, const std::string& model_out,
                         std::optional<std::uint64_t> seed) {
  return guarded("train", [&] {
    if (model_out.empty()) throw validation_error("no model output path given");
    const auto cfg = resolve_config(config_path, seed);
    cfg.train.validate();
    auto data = prepare(data_path, cfg);

    auto model = init_model(Topology::parse(cfg.topology), parse_activations(cfg.activations), cfg.train.seed,
                            cfg.weight_range);
    model.set_target_bounds(data.train.bounds);
    model.set_codebooks(data.train.codebooks);
    auto result = train(std::move(model), data.train.inputs, data.train.targets, cfg.train);

    const Eigen::VectorXd train_pred = predict_rows(result.model, data.train.inputs);
    const Eigen::VectorXd test_pred = predict_rows(result.model, data.test.inputs);
    if (!train_pred.allFinite() || !test_pred.allFinite()) throw runtime_error("trained model produces non-finite outputs");

    CommandOutcome out;
    const std::string history_path = model_out + ".history.csv";
    const std::string metrics_path = model_out + ".metrics.csv";
    const std::string train_path = model_out + ".train.csv";
    const std::string test_path = model_out + ".test.csv";
    save_model(result.model, model_out);
    detail::write_file(history_path, history_csv(result.history));
    detail::write_file(metrics_path, "set,pearson_r,mse,r2_uncentered,mape_shifted_pct\n" +
                                         split_metrics_row("train", data.train.targets, train_pred) +
                                         split_metrics_row("test", data.test.targets, test_pred));
    save_csv(data.split.train, train_path);
    save_csv(data.split.test, test_path);
    out.artifacts = {model_out, history_path, metrics_path, train_path, test_path};

    std::ostringstream s;
    s << "trained " << cfg.topology << " (" << cfg.activations << ") with " << to_string(cfg.train.trainer) << ": "
      << result.history.mse.size() << " epochs, stop: " << to_string(result.history.stop) << "; rows kept "
      << data.cleaning.kept << "/" << data.raw_rows << " (missing " << data.cleaning.count(DropReason::missing_field)
      << ", outliers " << data.cleaning.count(DropReason::outlier) << "), train " << data.train.rows() << ", test "
      << data.test.rows() << "; train R " << format_fixed(pearson_r(view(data.train.targets), view(train_pred)), 6)
      << ", test R " << format_fixed(pearson_r(view(data.test.targets), view(test_pred)), 6) << ", test MSE "
      << format_fixed(mse(view(data.test.targets), view(test_pred)), 6);
    out.summary = s.str();
    return out;
  });
}

CommandOutcome cmd_search(const std::string& data_path, const std::string& config_path, const std::string& results_out,
                          std::optional<std::uint64_t> seed) {
  return guarded("search", [&] {
    if (results_out.empty()) throw validation_error("no results output path given");
    const auto cfg = resolve_config(config_path, seed);
    auto data = prepare(data_path, cfg);

    const auto grid = cfg.grid.empty() ? default_grid(cfg.repeats, cfg.train.seed)
                                       : parse_grid(cfg.grid, cfg.train.trainer, cfg.repeats, cfg.train.seed);
    GridOptions options;
    options.weight_range = cfg.weight_range;
    options.threads = cfg.threads;
    const auto results = run_grid(data.train, data.test, grid, cfg.train, options);

    CommandOutcome out;
    detail::write_file(results_out, format_grid_csv(results));
    out.artifacts.push_back(results_out);

    std::size_t failed = 0;
    std::string diagnostics;
    for (const auto& r : results) {
      if (r.ok()) continue;
      ++failed;
      diagnostics += "\n  candidate " + std::to_string(r.grid_index + 1) + " (" + r.spec.label() + "): " + r.error;
    }
    if (results.empty() || failed == results.size()) {
      out.exit_code = static_cast<int>(ErrorKind::runtime);
      out.summary = "search: no candidate trained successfully (" + std::to_string(results.size()) + " candidates)" +
                    diagnostics;
      return out;
    }

    const auto& best = select_best(results);
    const std::string best_path = results_out + ".best_model.txt";
    save_model(*best.model, best_path);
    out.artifacts.push_back(best_path);
    out.summary = "searched " + std::to_string(results.size()) + " candidates (" + std::to_string(failed) +
                  " failed); best #" + std::to_string(best.grid_index + 1) + " " + best.spec.label() + " test R " +
                  format_fixed(best.test_r, 6) + ", test MSE " + format_fixed(best.test_mse, 6) + diagnostics;
    return out;
  });
}

CommandOutcome cmd_evaluate(const std::string& model_path, const std::string& data_path, const std::string& report_out,
                            RowMetric mode) {
  return guarded("evaluate", [&] {
    if (report_out.empty()) throw validation_error("no report output path given");
    const auto model = load_model(model_path);
    const auto ds = load_csv(data_path);
    if (ds.empty()) throw validation_error(data_path + " has no data rows");
    const Codebooks books = model.codebooks().empty() ? build_codebooks() : model.codebooks();
    const auto fm = encode_dataset(ds, books, model.target_bounds());
    const Eigen::VectorXd pred = predict_rows(model, fm.inputs);
    const auto report = build_report(view(fm.targets), view(pred), mode);

    const std::string series_path = report_out + ".series.csv";
    detail::write_file(report_out, format_report_csv(report));
    detail::write_file(series_path, format_series_csv(report));
    return CommandOutcome{0,
                          "evaluated " + std::to_string(report.rows.size()) + " rows (" +
                              std::string(to_string(mode)) + "): MAPE " + format_fixed(report.averages.mape_pct, 6) +
                              ", MSE " + format_fixed(report.averages.mse, 6) + ", R2 " +
                              format_fixed(report.averages.r2_pct, 6),
                          {report_out, series_path}};
  });
}

CommandOutcome cmd_predict(const std::string& model_path, const RawRow& row) {
  return guarded("predict", [&] {
    const auto model = load_model(model_path);
    const Codebooks books = model.codebooks().empty() ? build_codebooks() : model.codebooks();
    return CommandOutcome{0, std::to_string(predict_demand(model, row, books)), {}};
  });
}

}  // namespace mealcast
