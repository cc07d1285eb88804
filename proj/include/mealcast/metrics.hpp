#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mealcast {

/// MAPE as a percentage: 100/T * sum |(y - yhat) / y|. Throws if any y is 0.
double mape(std::span<const double> y, std::span<const double> yhat);

/// 100/T * sum |y - yhat| / (y + shift). With shift = 1 this is the per-row
/// MAPE used for result tables of normalized demand (it stays finite
/// for zero-demand days).
double mape_shifted(std::span<const double> y, std::span<const double> yhat, double shift = 1.0);

/// 1/T * sum (y - yhat)^2
double mse(std::span<const double> y, std::span<const double> yhat);

/// 1 - sum (y - yhat)^2 / sum yhat^2. This is not the centered coefficient
/// of determination; the denominator is the raw sum of squared predictions.
double r2_uncentered(std::span<const double> y, std::span<const double> yhat);

/// Standard centered R^2 = 1 - SSE / sum (y - mean y)^2, for comparison.
double r2_centered(std::span<const double> y, std::span<const double> yhat);

/// Sample Pearson correlation. Throws if either vector is constant.
double pearson_r(std::span<const double> y, std::span<const double> yhat);

enum class RowMetric { plain, shifted };
std::string_view to_string(RowMetric m);
RowMetric parse_row_metric(std::string_view name);

struct MetricsRow {
  double actual = 0.0;
  double predicted = 0.0;
  double mape_pct = 0.0;
  double mse = 0.0;
  double r2_pct = 0.0;
};

struct MetricsAverages {
  double mape_pct = 0.0;
  double mse = 0.0;
  double r2_pct = 0.0;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;
  MetricsAverages averages;
  RowMetric mode = RowMetric::shifted;
};

/// Per-prediction rows (T = 1 each) plus arithmetic means. In shifted mode
/// r2_pct = 100 - mape_pct; in plain mode r2_pct = 100 * r2_uncentered on the pair.
MetricsReport build_report(std::span<const double> y, std::span<const double> yhat, RowMetric mode);

/// Delimited table: no,actual,predicted,mape,mse,r2 then an `average` row.
/// Fixed 6-decimal formatting.
std::string format_report_csv(const MetricsReport& report);
/// Two-column actual,predicted series for plotting.
std::string format_series_csv(const MetricsReport& report);

}  // namespace mealcast
