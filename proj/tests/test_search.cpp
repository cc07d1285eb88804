#include <gtest/gtest.h>

#include <atomic>

#include "mealcast/dataio.hpp"
#include "mealcast/encoding.hpp"
#include "mealcast/error.hpp"
#include "mealcast/search.hpp"

using namespace mealcast;

namespace {

struct Fixture {
  FeatureMatrix train, test;
};

Fixture fixture(std::size_t n = 200, std::uint64_t seed = 3) {
  const auto s = split(synthesize(n, seed), 0.7, seed);
  const auto books = build_codebooks();
  const auto b = demand_bounds(s.train);
  return {encode_dataset(s.train, books, b), encode_dataset(s.test, books, b)};
}

TrainConfig quick() {
  TrainConfig cfg;
  cfg.max_epochs = 15;
  return cfg;
}

}  // namespace

TEST(Grid, DefaultHasTenLmCandidates) {
  const auto g = default_grid();
  ASSERT_EQ(g.size(), 10u);
  for (const auto& c : g) {
    EXPECT_EQ(c.trainer, TrainerKind::levenberg_marquardt);
    EXPECT_EQ(c.topology.input_dim(), 8);
    EXPECT_EQ(c.topology.output_dim(), 1);
    EXPECT_EQ(c.activations.size(), c.topology.weight_layers());
    EXPECT_NO_THROW(c.validate());
  }
  EXPECT_EQ(g[0].label(), "8-5-1:logsig-tansig");
  EXPECT_EQ(g[1].label(), "8-5-1:tansig-tansig");
  EXPECT_EQ(g[6].label(), "8-10-10-1:logsig-logsig-tansig");
  EXPECT_EQ(g[9].topology.to_string(), "8-10-15-1");
}

TEST(Grid, ParseDeclaredGrid) {
  const auto g = parse_grid("8-5-1:logsig-tansig; 8-4-4-1:tansig-tansig-purelin", TrainerKind::momentum_gd, 2, 7);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].label(), "8-4-4-1:tansig-tansig-purelin");
  EXPECT_EQ(g[1].trainer, TrainerKind::momentum_gd);
  EXPECT_EQ(g[1].repeats, 2);
  EXPECT_EQ(g[1].seed_base, 7u);
  EXPECT_THROW(parse_grid("8-5-1", TrainerKind::momentum_gd, 1, 1), Error);
  EXPECT_THROW(parse_grid("8-5-1:logsig", TrainerKind::momentum_gd, 1, 1), Error);
  EXPECT_THROW(parse_grid("", TrainerKind::momentum_gd, 1, 1), Error);
}

TEST(RunGrid, ResultsFollowGridOrderAndBestRepeat) {
  const auto f = fixture();
  const auto grid = parse_grid("8-5-1:logsig-tansig;8-5-5-1:logsig-tansig-tansig", TrainerKind::levenberg_marquardt, 2, 1);
  const auto res = run_grid(f.train, f.test, grid, quick());
  ASSERT_EQ(res.size(), 2u);
  for (std::size_t i = 0; i < res.size(); ++i) {
    EXPECT_EQ(res[i].grid_index, i);
    EXPECT_TRUE(res[i].ok());
    ASSERT_TRUE(res[i].model.has_value());
    EXPECT_TRUE(res[i].seed == 1 || res[i].seed == 2);
    EXPECT_EQ(res[i].model->topology(), grid[i].topology);
    EXPECT_EQ(res[i].model->codebooks(), f.train.codebooks);
  }
}

TEST(RunGrid, IndependentOfThreadCount) {
  const auto f = fixture();
  const auto grid = default_grid(1, 5);
  GridOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = format_grid_csv(run_grid(f.train, f.test, grid, quick(), one));
  const auto b = format_grid_csv(run_grid(f.train, f.test, grid, quick(), many));
  EXPECT_EQ(a, b);
}

TEST(RunGrid, TrainersNeverSeeTestPatterns) {
  const auto f = fixture();
  GridOptions opt;
  std::atomic<int> calls{0};
  std::atomic<bool> leaked{false};
  opt.train_observer = [&](const Eigen::MatrixXd& x) {
    ++calls;
    if (x.rows() != f.train.rows() || x != f.train.inputs) leaked = true;
  };
  run_grid(f.train, f.test, default_grid(1, 1), quick(), opt);
  EXPECT_EQ(calls.load(), 10);
  EXPECT_FALSE(leaked.load());
}

TEST(RunGrid, FailuresAreRecordedPerCandidate) {
  const auto f = fixture();
  TrainConfig bad = quick();
  bad.max_epochs = 0;
  const auto res = run_grid(f.train, f.test, default_grid(1, 1), bad);
  ASSERT_EQ(res.size(), 10u);
  for (const auto& r : res) {
    EXPECT_FALSE(r.ok());
    EXPECT_NE(r.error.find("max_epochs"), std::string::npos) << r.error;
  }
  EXPECT_THROW(select_best(res), Error);
}

TEST(RunGrid, RejectsMismatchedInputs) {
  auto f = fixture();
  auto test = f.test;
  test.bounds = NormBounds{0.0, 1.0};
  EXPECT_THROW(run_grid(f.train, test, default_grid(1, 1), quick()), Error);
  EXPECT_TRUE(run_grid(f.train, f.test, {}, quick()).empty());
}

TEST(SelectBest, OrdersByTestRThenMseThenPosition) {
  std::vector<CandidateResult> r(3);
  for (std::size_t i = 0; i < 3; ++i) r[i].grid_index = i;
  r[0].test_r = 0.9;
  r[0].test_mse = 0.01;
  r[1].test_r = 0.95;
  r[1].test_mse = 0.02;
  r[2].test_r = 0.95;
  r[2].test_mse = 0.01;
  EXPECT_EQ(select_best(r).grid_index, 2u);
  r[2].test_mse = 0.02;
  EXPECT_EQ(select_best(r).grid_index, 1u);
  r[1].error = "failed";
  EXPECT_EQ(select_best(r).grid_index, 2u);
}

TEST(GridCsv, HeaderAndRowShape) {
  const auto f = fixture();
  const auto res = run_grid(f.train, f.test, parse_grid("8-10-5-1:logsig-tansig-tansig", TrainerKind::levenberg_marquardt, 1, 1), quick());
  const auto csv = format_grid_csv(res);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "no,model,trainer,activations,hidden_layers,hidden_neurons,train_r,test_r,train_mse,test_mse,epochs,stop,seed,error");
  EXPECT_NE(csv.find("\n1,8-10-5-1,trainlm,logsig-tansig-tansig,2,10-5,"), std::string::npos) << csv;
}
