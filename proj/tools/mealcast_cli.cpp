// Batch front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "mealcast/mealcast.h"

namespace {

int report(int code, mc_outcome* outcome) {
  if (outcome) {
    if (code == 0) {
      std::cout << mc_outcome_summary(outcome) << '\n';
      for (size_t i = 0; i < mc_outcome_artifact_count(outcome); ++i)
        std::cout << "  wrote " << mc_outcome_artifact(outcome, i) << '\n';
    } else {
      std::cerr << "error: " << mc_outcome_summary(outcome) << '\n';
    }
    mc_outcome_free(outcome);
  } else if (code != 0) {
    std::cerr << "error: " << mc_last_error() << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mealcast: refectory meal demand forecasting"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::string config_path;
  app.add_option("--seed", seed, "Random seed (overrides the config file)");
  app.add_option("--config", config_path, "key=value configuration file");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic refectory dataset");
  std::size_t synth_n = 0;
  std::string synth_out;
  mc_synth_profile profile;
  mc_synth_profile_default(&profile);
  synth->add_option("-n,--rows", synth_n, "Number of rows (days)")->required();
  synth->add_option("-o,--out", synth_out, "Output CSV path")->required();
  synth->add_option("--capacity", profile.capacity, "Staff capacity");
  synth->add_option("--holiday-rate", profile.holiday_rate, "Probability that a day is an official holiday");
  synth->add_option("--noise", profile.noise_persons, "Half-width of demand noise in persons");
  synth->add_option("--missing", profile.missing_defects, "Rows with a blanked field");
  synth->add_option("--outliers", profile.outlier_defects, "Rows with a gross demand value");

  // train
  auto* train = app.add_subcommand("train", "Clean, split, encode, and train one model");
  std::string train_data, model_out;
  train->add_option("-d,--data", train_data, "Input CSV")->required();
  train->add_option("-m,--model-out", model_out, "Model output path")->required();

  // search
  auto* search = app.add_subcommand("search", "Train the architecture grid and keep the best model");
  std::string search_data, results_out;
  search->add_option("-d,--data", search_data, "Input CSV")->required();
  search->add_option("-o,--results-out", results_out, "Grid results CSV path")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Per-row MAPE/MSE/R2 report for a model on a dataset");
  std::string eval_model, eval_data, report_out, mode = "shifted";
  evaluate->add_option("-m,--model", eval_model, "Model file")->required();
  evaluate->add_option("-d,--data", eval_data, "Input CSV")->required();
  evaluate->add_option("-o,--report-out", report_out, "Report CSV path")->required();
  evaluate->add_option("--mode", mode, "Row metric: shifted or plain")->check(CLI::IsMember({"shifted", "plain"}));

  // predict
  auto* predict = app.add_subcommand("predict", "Forecast demand for one menu/calendar row");
  std::string predict_model, row_json;
  std::string fields[MC_FEATURE_COUNT];
  predict->add_option("-m,--model", predict_model, "Model file")->required();
  predict->add_option("--row", row_json, "Row as a JSON object keyed by feature name");
  for (size_t f = 0; f < MC_FEATURE_COUNT; ++f) {
    std::string flag = std::string("--") + mc_feature_name(f);
    for (auto& c : flag)
      if (c == '_') c = '-';
    predict->add_option(flag, fields[f], std::string("Label for ") + mc_feature_name(f));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return MC_ERR_VALIDATION;
  }

  const uint64_t* seed_ptr = seed ? &*seed : nullptr;
  const char* cfg = config_path.empty() ? nullptr : config_path.c_str();
  mc_outcome* outcome = nullptr;

  if (*synth) {
    const int code = mc_cmd_synth(synth_n, seed.value_or(42), &profile, synth_out.c_str(), &outcome);
    return report(code, outcome);
  }
  if (*train) {
    const int code = mc_cmd_train(train_data.c_str(), cfg, model_out.c_str(), seed_ptr, &outcome);
    return report(code, outcome);
  }
  if (*search) {
    const int code = mc_cmd_search(search_data.c_str(), cfg, results_out.c_str(), seed_ptr, &outcome);
    return report(code, outcome);
  }
  if (*evaluate) {
    const auto m = mode == "plain" ? MC_ROW_METRIC_PLAIN : MC_ROW_METRIC_SHIFTED;
    const int code = mc_cmd_evaluate(eval_model.c_str(), eval_data.c_str(), report_out.c_str(), m, &outcome);
    return report(code, outcome);
  }
  if (*predict) {
    if (!row_json.empty()) {
      try {
        const auto j = nlohmann::json::parse(row_json);
        if (!j.is_object()) throw std::runtime_error("--row must be a JSON object");
        for (size_t f = 0; f < MC_FEATURE_COUNT; ++f) {
          const auto it = j.find(mc_feature_name(f));
          if (it != j.end() && fields[f].empty()) fields[f] = it->get<std::string>();
        }
      } catch (const std::exception& e) {
        std::cerr << "error: predict: invalid --row: " << e.what() << '\n';
        return MC_ERR_VALIDATION;
      }
    }
    const char* labels[MC_FEATURE_COUNT];
    for (size_t f = 0; f < MC_FEATURE_COUNT; ++f) {
      if (fields[f].empty()) {
        std::cerr << "error: predict: missing value for feature '" << mc_feature_name(f) << "'\n";
        return MC_ERR_VALIDATION;
      }
      labels[f] = fields[f].c_str();
    }
    const int code = mc_cmd_predict(predict_model.c_str(), labels, &outcome);
    if (code == 0) {
      std::cout << mc_outcome_summary(outcome) << '\n';
      mc_outcome_free(outcome);
      return 0;
    }
    return report(code, outcome);
  }
  return MC_ERR_VALIDATION;
}
