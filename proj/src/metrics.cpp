#include "mealcast/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mealcast/error.hpp"
#include "text_util.hpp"

namespace mealcast {

namespace {

void check_pair(std::span<const double> y, std::span<const double> yhat, const char* what) {
  if (y.size() != yhat.size())
    throw validation_error(std::string(what) + ": " + std::to_string(y.size()) + " actual vs " +
                           std::to_string(yhat.size()) + " predicted values");
  if (y.empty()) throw validation_error(std::string(what) + ": no values");
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double mape(std::span<const double> y, std::span<const double> yhat) {
  check_pair(y, yhat, "mape");
  double s = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (y[t] == 0.0)
      throw validation_error("mape: actual value " + std::to_string(t) +
                             " is zero (division by zero); use mape_shifted for series containing zeros");
    s += std::abs((y[t] - yhat[t]) / y[t]);
  }
  return 100.0 * s / static_cast<double>(y.size());
}

double mape_shifted(std::span<const double> y, std::span<const double> yhat, double shift) {
  check_pair(y, yhat, "mape_shifted");
  double s = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double denom = y[t] + shift;
    if (denom == 0.0) throw validation_error("mape_shifted: shifted denominator is zero at " + std::to_string(t));
    s += std::abs(y[t] - yhat[t]) / denom;
  }
  return 100.0 * s / static_cast<double>(y.size());
}

double mse(std::span<const double> y, std::span<const double> yhat) {
  check_pair(y, yhat, "mse");
  double s = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) s += (y[t] - yhat[t]) * (y[t] - yhat[t]);
  return s / static_cast<double>(y.size());
}

double r2_uncentered(std::span<const double> y, std::span<const double> yhat) {
  check_pair(y, yhat, "r2_uncentered");
  double sse = 0.0, spred = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    sse += (y[t] - yhat[t]) * (y[t] - yhat[t]);
    spred += yhat[t] * yhat[t];
  }
  if (spred == 0.0) throw validation_error("r2_uncentered: all predictions are zero");
  return 1.0 - sse / spred;
}

double r2_centered(std::span<const double> y, std::span<const double> yhat) {
  check_pair(y, yhat, "r2_centered");
  const double my = mean(y);
  double sse = 0.0, sst = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    sse += (y[t] - yhat[t]) * (y[t] - yhat[t]);
    sst += (y[t] - my) * (y[t] - my);
  }
  if (sst == 0.0) throw validation_error("r2_centered: actual values are constant");
  return 1.0 - sse / sst;
}

double pearson_r(std::span<const double> y, std::span<const double> yhat) {
  check_pair(y, yhat, "pearson_r");
  const double my = mean(y), mp = mean(yhat);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double a = y[t] - my, b = yhat[t] - mp;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw validation_error("pearson_r: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::string_view to_string(RowMetric m) { return m == RowMetric::plain ? "plain" : "shifted"; }

RowMetric parse_row_metric(std::string_view name) {
  if (name == "plain") return RowMetric::plain;
  if (name == "shifted") return RowMetric::shifted;
  throw validation_error("unknown row metric '" + std::string(name) + "' (expected plain or shifted)");
}

MetricsReport build_report(std::span<const double> y, std::span<const double> yhat, RowMetric mode) {
  check_pair(y, yhat, "build_report");
  MetricsReport report;
  report.mode = mode;
  report.rows.reserve(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    const auto a = y.subspan(t, 1), p = yhat.subspan(t, 1);
    MetricsRow row;
    row.actual = y[t];
    row.predicted = yhat[t];
    row.mse = mse(a, p);
    if (mode == RowMetric::shifted) {
      row.mape_pct = mape_shifted(a, p, 1.0);
      row.r2_pct = 100.0 - row.mape_pct;
    } else {
      row.mape_pct = mape(a, p);
      row.r2_pct = 100.0 * r2_uncentered(a, p);
    }
    report.rows.push_back(row);
  }
  for (const auto& r : report.rows) {
    report.averages.mape_pct += r.mape_pct;
    report.averages.mse += r.mse;
    report.averages.r2_pct += r.r2_pct;
  }
  const auto n = static_cast<double>(report.rows.size());
  report.averages.mape_pct /= n;
  report.averages.mse /= n;
  report.averages.r2_pct /= n;
  return report;
}

std::string format_report_csv(const MetricsReport& report) {
  using detail::format_fixed;
  std::string out = "no,actual,predicted,mape_pct,mse,r2_pct\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out += std::to_string(i + 1) + ',' + format_fixed(r.actual, 6) + ',' + format_fixed(r.predicted, 6) + ',' +
           format_fixed(r.mape_pct, 6) + ',' + format_fixed(r.mse, 6) + ',' + format_fixed(r.r2_pct, 6) + '\n';
  }
  out += "average,,," + format_fixed(report.averages.mape_pct, 6) + ',' + format_fixed(report.averages.mse, 6) + ',' +
         format_fixed(report.averages.r2_pct, 6) + '\n';
  return out;
}

std::string format_series_csv(const MetricsReport& report) {
  std::string out = "actual,predicted\n";
  for (const auto& r : report.rows)
    out += detail::format_fixed(r.actual, 6) + ',' + detail::format_fixed(r.predicted, 6) + '\n';
  return out;
}

}  // namespace mealcast
