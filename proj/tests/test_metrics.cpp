#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mealcast/error.hpp"
#include "mealcast/metrics.hpp"
#include "mealcast/rng.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace mealcast;

namespace {

struct Pair {
  std::vector<double> y, yhat;
};

Pair random_pair(std::uint64_t seed, std::size_t n, double lo = 0.05) {
  Rng rng(seed);
  Pair p;
  for (std::size_t i = 0; i < n; ++i) {
    p.y.push_back(rng.uniform(lo, 1.0));
    p.yhat.push_back(rng.uniform(lo, 1.0));
  }
  return p;
}

}  // namespace

TEST(Mape, HandValues) {
  EXPECT_DOUBLE_EQ(mape(std::vector{1.0, 2.0}, std::vector{1.0, 2.0}), 0.0);
  EXPECT_NEAR(mape(std::vector{1.0, 1.0}, std::vector{0.9, 1.1}), 10.0, 1e-12);
}

TEST(Mape, ZeroActualPointsToShiftedVariant) {
  try {
    mape(std::vector{0.0, 1.0}, std::vector{0.1, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("mape_shifted"), std::string::npos);
  }
}

TEST(Mape, MatchesOracleOnRandomVectors) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto p = random_pair(s, 50);
    EXPECT_NEAR(mape(p.y, p.yhat), oracle::mape(p.y, p.yhat), 1e-12);
    EXPECT_NEAR(mape_shifted(p.y, p.yhat), oracle::mape_shifted(p.y, p.yhat), 1e-12);
    EXPECT_NEAR(mape_shifted(p.y, p.yhat, 2.5), oracle::mape_shifted(p.y, p.yhat, 2.5), 1e-12);
    EXPECT_NEAR(mse(p.y, p.yhat), oracle::mse(p.y, p.yhat), 1e-12);
    EXPECT_NEAR(r2_uncentered(p.y, p.yhat), oracle::r2_uncentered(p.y, p.yhat), 1e-12);
    EXPECT_NEAR(r2_centered(p.y, p.yhat), oracle::r2_centered(p.y, p.yhat), 1e-12);
    EXPECT_NEAR(pearson_r(p.y, p.yhat), oracle::pearson(p.y, p.yhat), 1e-12);
  }
}

TEST(MapeShifted, ZeroActualIsFinite) {
  EXPECT_NEAR(mape_shifted(std::vector{0.0}, std::vector{0.005}), 0.5, 1e-12);
  EXPECT_THROW(mape_shifted(std::vector{-1.0}, std::vector{0.0}), Error);
}

TEST(Mse, HandValue) { EXPECT_DOUBLE_EQ(mse(std::vector{1.0, 2.0}, std::vector{0.0, 4.0}), 2.5); }

TEST(R2Paper, PerfectPredictionIsOne) {
  const std::vector y{0.2, 0.5, 0.9};
  EXPECT_DOUBLE_EQ(r2_uncentered(y, y), 1.0);
}

TEST(R2Paper, DiffersFromCenteredUnderConstantShift) {
  const std::vector y{0.2, 0.4, 0.6, 0.8};
  std::vector<double> yhat;
  for (double v : y) yhat.push_back(v + 0.1);
  const double r2 = r2_uncentered(y, yhat);
  EXPECT_NEAR(r2, 1.0 - 0.04 / (0.09 + 0.25 + 0.49 + 0.81), 1e-15);
  EXPECT_NEAR(r2_centered(y, yhat), 1.0 - 0.04 / 0.2, 1e-15);
  EXPECT_GT(std::fabs(r2 - r2_centered(y, yhat)), 0.1);
}

TEST(R2Paper, AllZeroPredictionsThrow) {
  EXPECT_THROW(r2_uncentered(std::vector{1.0, 2.0}, std::vector{0.0, 0.0}), Error);
}

TEST(Pearson, PerfectAndAnticorrelated) {
  const std::vector y{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(pearson_r(y, std::vector{2.0, 4.0, 6.0}), 1.0);
  EXPECT_DOUBLE_EQ(pearson_r(y, std::vector{3.0, 2.0, 1.0}), -1.0);
  EXPECT_THROW(pearson_r(y, std::vector{1.0, 1.0, 1.0}), Error);
}

TEST(Metrics, LengthMismatchAndEmptyThrow) {
  EXPECT_THROW(mse(std::vector{1.0}, std::vector{1.0, 2.0}), Error);
  EXPECT_THROW(mse(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(Report, ReferenceResultRowsReproduce) {
  std::vector<double> y, yhat;
  for (const auto& r : reference::kResultRows) {
    y.push_back(r.actual);
    yhat.push_back(r.predicted);
  }
  const auto rep = build_report(y, yhat, RowMetric::shifted);
  ASSERT_EQ(rep.rows.size(), reference::kResultRows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& want = reference::kResultRows[i];
    EXPECT_NEAR(rep.rows[i].mape_pct, want.mape_pct, 5e-4) << i + 1;
    EXPECT_NEAR(rep.rows[i].mse, want.mse, 5e-4) << i + 1;
    EXPECT_NEAR(rep.rows[i].r2_pct, want.r2_pct, 5e-4) << i + 1;
  }
  EXPECT_NEAR(rep.rows[22].mape_pct, 0.5, 1e-12);
  EXPECT_NEAR(rep.averages.mape_pct, reference::kAverageMapePct, 0.01);
  EXPECT_NEAR(rep.averages.mse, reference::kAverageMse, 0.01);
  EXPECT_NEAR(rep.averages.r2_pct, reference::kAverageR2Pct, 0.01);
}

TEST(Report, AveragesAreArithmeticMeans) {
  const auto p = random_pair(4, 25);
  for (auto mode : {RowMetric::shifted, RowMetric::plain}) {
    const auto rep = build_report(p.y, p.yhat, mode);
    double m = 0, s = 0, r = 0;
    for (const auto& row : rep.rows) {
      m += row.mape_pct;
      s += row.mse;
      r += row.r2_pct;
      EXPECT_GE(row.mse, 0.0);
    }
    EXPECT_NEAR(rep.averages.mape_pct, m / 25, 1e-12);
    EXPECT_NEAR(rep.averages.mse, s / 25, 1e-12);
    EXPECT_NEAR(rep.averages.r2_pct, r / 25, 1e-12);
  }
}

TEST(Report, PerfectPredictionAverages) {
  const std::vector y{0.1, 0.6, 0.9};
  for (auto mode : {RowMetric::shifted, RowMetric::plain}) {
    const auto rep = build_report(y, y, mode);
    EXPECT_DOUBLE_EQ(rep.averages.mape_pct, 0.0);
    EXPECT_DOUBLE_EQ(rep.averages.mse, 0.0);
    EXPECT_DOUBLE_EQ(rep.averages.r2_pct, 100.0);
  }
}

TEST(Report, CsvLayoutIsFixedSixDecimals) {
  const auto rep = build_report(std::vector{0.0, 0.5}, std::vector{0.005, 0.5}, RowMetric::shifted);
  const auto csv = format_report_csv(rep);
  EXPECT_EQ(csv,
            "no,actual,predicted,mape_pct,mse,r2_pct\n"
            "1,0.000000,0.005000,0.500000,0.000025,99.500000\n"
            "2,0.500000,0.500000,0.000000,0.000000,100.000000\n"
            "average,,,0.250000,0.000013,99.750000\n");
  EXPECT_EQ(format_series_csv(rep), "actual,predicted\n0.000000,0.005000\n0.500000,0.500000\n");
}

TEST(RowMetricNames, RoundTrip) {
  EXPECT_EQ(parse_row_metric("plain"), RowMetric::plain);
  EXPECT_EQ(parse_row_metric("shifted"), RowMetric::shifted);
  EXPECT_THROW(parse_row_metric("centered"), Error);
}
