#include "mealcast/mealcast.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "mealcast/commands.hpp"
#include "mealcast/dataio.hpp"
#include "mealcast/error.hpp"
#include "mealcast/metrics.hpp"
#include "mealcast/model_io.hpp"
#include "mealcast/network.hpp"

struct mc_dataset {
  mealcast::Dataset data;
};

struct mc_model {
  mealcast::MlpModel model;
};

struct mc_outcome {
  mealcast::CommandOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
mc_status guard(F&& body) {
  try {
    body();
    return MC_OK;
  } catch (const mealcast::Error& e) {
    g_last_error = e.what();
    return e.kind() == mealcast::ErrorKind::validation ? MC_ERR_VALIDATION : MC_ERR_RUNTIME;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MC_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MC_ERR_RUNTIME;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw mealcast::validation_error(what);
}

mealcast::SynthProfile to_profile(const mc_synth_profile* p) {
  mealcast::SynthProfile out;
  if (p) {
    out.capacity = p->capacity;
    out.holiday_rate = p->holiday_rate;
    out.noise_persons = p->noise_persons;
    out.missing_defects = p->missing_defects;
    out.outlier_defects = p->outlier_defects;
  }
  return out;
}

mealcast::RawRow to_row(const char* const labels[MC_FEATURE_COUNT]) {
  require(labels != nullptr, "labels is NULL");
  mealcast::RawRow row;
  for (std::size_t f = 0; f < mealcast::kFeatureCount; ++f) {
    require(labels[f] != nullptr, "a label is NULL");
    row.labels[f] = labels[f];
  }
  return row;
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

int finish(mealcast::CommandOutcome o, mc_outcome** outcome) {
  const int code = o.exit_code;
  if (code != 0) g_last_error = o.summary;
  if (outcome) *outcome = new (std::nothrow) mc_outcome{std::move(o)};
  return code;
}

int command_failure(mc_status st, mc_outcome** outcome) {
  return finish(mealcast::CommandOutcome{static_cast<int>(st), g_last_error, {}}, outcome);
}

mc_status metric(const double* y, const double* yhat, size_t n, double* out,
                 double (*fn)(std::span<const double>, std::span<const double>)) {
  return guard([&] {
    require(y && yhat && out, "NULL argument");
    *out = fn({y, n}, {yhat, n});
  });
}

}  // namespace

extern "C" {

const char* mc_version(void) { return "0.1.0"; }

const char* mc_last_error(void) { return g_last_error.c_str(); }

void mc_synth_profile_default(mc_synth_profile* profile) {
  if (!profile) return;
  const mealcast::SynthProfile d;
  *profile = {d.capacity, d.holiday_rate, d.noise_persons, d.missing_defects, d.outlier_defects};
}

const char* mc_feature_name(size_t index) {
  return index < mealcast::kFeatureCount ? mealcast::kFeatureNames[index].data() : nullptr;
}

mc_status mc_dataset_load_csv(const char* path, mc_dataset** out) {
  return guard([&] {
    require(path && out, "NULL argument");
    *out = new mc_dataset{mealcast::load_csv(path)};
  });
}

mc_status mc_dataset_synthesize(size_t n, uint64_t seed, const mc_synth_profile* profile, mc_dataset** out) {
  return guard([&] {
    require(out != nullptr, "NULL argument");
    *out = new mc_dataset{mealcast::synthesize(n, seed, to_profile(profile))};
  });
}

mc_status mc_dataset_save_csv(const mc_dataset* ds, const char* path) {
  return guard([&] {
    require(ds && path, "NULL argument");
    mealcast::save_csv(ds->data, path);
  });
}

size_t mc_dataset_size(const mc_dataset* ds) { return ds ? ds->data.size() : 0; }

const char* mc_dataset_label(const mc_dataset* ds, size_t row, size_t feature) {
  if (!ds || row >= ds->data.size() || feature >= mealcast::kFeatureCount) return nullptr;
  return ds->data.rows[row].labels[feature].c_str();
}

mc_status mc_dataset_demand(const mc_dataset* ds, size_t row, int64_t* demand) {
  return guard([&] {
    require(ds && demand, "NULL argument");
    require(row < ds->data.size(), "row index out of range");
    const auto& d = ds->data.rows[row].demand;
    require(d.has_value(), "row has no demand value");
    *demand = *d;
  });
}

void mc_dataset_free(mc_dataset* ds) { delete ds; }

mc_status mc_model_load(const char* path, mc_model** out) {
  return guard([&] {
    require(path && out, "NULL argument");
    *out = new mc_model{mealcast::load_model(path)};
  });
}

mc_status mc_model_save(const mc_model* m, const char* path) {
  return guard([&] {
    require(m && path, "NULL argument");
    mealcast::save_model(m->model, path);
  });
}

mc_status mc_model_topology(const mc_model* m, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    require(m != nullptr, "NULL model");
    const auto t = m->model.topology().to_string();
    if (needed) *needed = t.size() + 1;
    require(buf != nullptr && cap > t.size(), "topology buffer too small");
    std::memcpy(buf, t.data(), t.size());
    buf[t.size()] = '\0';
  });
}

size_t mc_model_input_dim(const mc_model* m) { return m ? static_cast<size_t>(m->model.input_dim()) : 0; }

mc_status mc_model_forward(const mc_model* m, const double* x, size_t n, double* out, size_t out_cap) {
  return guard([&] {
    require(m && x && out, "NULL argument");
    const Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(n));
    const Eigen::VectorXd y = mealcast::forward(m->model, xv);
    require(out_cap >= static_cast<size_t>(y.size()), "output buffer too small");
    for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y(i);
  });
}

mc_status mc_model_predict(const mc_model* m, const char* const labels[MC_FEATURE_COUNT], int64_t* demand) {
  return guard([&] {
    require(m && demand, "NULL argument");
    const auto& books = m->model.codebooks().empty() ? mealcast::build_codebooks() : m->model.codebooks();
    *demand = mealcast::predict_demand(m->model, to_row(labels), books);
  });
}

void mc_model_free(mc_model* m) { delete m; }

mc_status mc_metric_mape(const double* y, const double* yhat, size_t n, double* out) {
  return metric(y, yhat, n, out, &mealcast::mape);
}

mc_status mc_metric_mape_shifted(const double* y, const double* yhat, size_t n, double shift, double* out) {
  return guard([&] {
    require(y && yhat && out, "NULL argument");
    *out = mealcast::mape_shifted({y, n}, {yhat, n}, shift);
  });
}

mc_status mc_metric_mse(const double* y, const double* yhat, size_t n, double* out) {
  return metric(y, yhat, n, out, &mealcast::mse);
}

mc_status mc_metric_r2(const double* y, const double* yhat, size_t n, double* out) {
  return metric(y, yhat, n, out, &mealcast::r2_uncentered);
}

mc_status mc_metric_pearson(const double* y, const double* yhat, size_t n, double* out) {
  return metric(y, yhat, n, out, &mealcast::pearson_r);
}

int mc_cmd_synth(size_t n, uint64_t seed, const mc_synth_profile* profile, const char* out_path, mc_outcome** outcome) {
  return finish(mealcast::cmd_synth(n, seed, str(out_path), to_profile(profile)), outcome);
}

int mc_cmd_train(const char* data_path, const char* config_path, const char* model_out, const uint64_t* seed,
                 mc_outcome** outcome) {
  std::optional<std::uint64_t> s;
  if (seed) s = *seed;
  return finish(mealcast::cmd_train(str(data_path), str(config_path), str(model_out), s), outcome);
}

int mc_cmd_search(const char* data_path, const char* config_path, const char* results_out, const uint64_t* seed,
                  mc_outcome** outcome) {
  std::optional<std::uint64_t> s;
  if (seed) s = *seed;
  return finish(mealcast::cmd_search(str(data_path), str(config_path), str(results_out), s), outcome);
}

int mc_cmd_evaluate(const char* model_path, const char* data_path, const char* report_out, mc_row_metric mode,
                    mc_outcome** outcome) {
  if (mode != MC_ROW_METRIC_PLAIN && mode != MC_ROW_METRIC_SHIFTED) {
    g_last_error = "evaluate: unknown row metric";
    return command_failure(MC_ERR_VALIDATION, outcome);
  }
  const auto m = mode == MC_ROW_METRIC_PLAIN ? mealcast::RowMetric::plain : mealcast::RowMetric::shifted;
  return finish(mealcast::cmd_evaluate(str(model_path), str(data_path), str(report_out), m), outcome);
}

int mc_cmd_predict(const char* model_path, const char* const labels[MC_FEATURE_COUNT], mc_outcome** outcome) {
  mealcast::RawRow row;
  const mc_status st = guard([&] { row = to_row(labels); });
  if (st != MC_OK) return command_failure(st, outcome);
  return finish(mealcast::cmd_predict(str(model_path), row), outcome);
}

int mc_outcome_exit_code(const mc_outcome* o) { return o ? o->outcome.exit_code : MC_ERR_RUNTIME; }

const char* mc_outcome_summary(const mc_outcome* o) { return o ? o->outcome.summary.c_str() : ""; }

size_t mc_outcome_artifact_count(const mc_outcome* o) { return o ? o->outcome.artifacts.size() : 0; }

const char* mc_outcome_artifact(const mc_outcome* o, size_t index) {
  if (!o || index >= o->outcome.artifacts.size()) return nullptr;
  return o->outcome.artifacts[index].c_str();
}

void mc_outcome_free(mc_outcome* o) { delete o; }

}  // extern "C"
