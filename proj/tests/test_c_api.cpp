#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "mealcast/mealcast.h"

namespace fs = std::filesystem;

TEST(CApi, VersionAndFeatureNames) {
  EXPECT_STREQ(mc_version(), "0.1.0");
  EXPECT_STREQ(mc_feature_name(0), "soup");
  EXPECT_STREQ(mc_feature_name(7), "season");
  EXPECT_EQ(mc_feature_name(8), nullptr);
}

TEST(CApi, MetricsAndErrors) {
  const double y[] = {1.0, 1.0};
  const double yhat[] = {0.9, 1.1};
  double out = 0;
  ASSERT_EQ(mc_metric_mape(y, yhat, 2, &out), MC_OK);
  EXPECT_NEAR(out, 10.0, 1e-12);
  ASSERT_EQ(mc_metric_mse(y, yhat, 2, &out), MC_OK);
  EXPECT_NEAR(out, 0.01, 1e-15);
  const double zero[] = {0.0, 1.0};
  EXPECT_EQ(mc_metric_mape(zero, yhat, 2, &out), MC_ERR_VALIDATION);
  EXPECT_NE(std::string(mc_last_error()).find("mape_shifted"), std::string::npos);
  ASSERT_EQ(mc_metric_mape_shifted(zero, yhat, 2, 1.0, &out), MC_OK);
  EXPECT_EQ(mc_metric_r2(nullptr, yhat, 2, &out), MC_ERR_VALIDATION);
}

TEST(CApi, DatasetLifecycle) {
  mc_synth_profile p;
  mc_synth_profile_default(&p);
  EXPECT_EQ(p.capacity, 110);
  mc_dataset* ds = nullptr;
  ASSERT_EQ(mc_dataset_synthesize(20, 3, &p, &ds), MC_OK);
  EXPECT_EQ(mc_dataset_size(ds), 20u);
  EXPECT_STREQ(mc_dataset_label(ds, 0, 5), "Pazartesi");
  EXPECT_EQ(mc_dataset_label(ds, 20, 0), nullptr);
  int64_t demand = -1;
  EXPECT_EQ(mc_dataset_demand(ds, 0, &demand), MC_OK);
  EXPECT_GE(demand, 0);
  const auto path = (fs::temp_directory_path() / ("mealcast_capi_" + std::to_string(::getpid()) + ".csv")).string();
  ASSERT_EQ(mc_dataset_save_csv(ds, path.c_str()), MC_OK);
  mc_dataset* back = nullptr;
  ASSERT_EQ(mc_dataset_load_csv(path.c_str(), &back), MC_OK);
  EXPECT_EQ(mc_dataset_size(back), 20u);
  mc_dataset_free(back);
  mc_dataset_free(ds);
  mc_dataset_free(nullptr);
  EXPECT_EQ(mc_dataset_load_csv("/nonexistent.csv", &back), MC_ERR_VALIDATION);
  fs::remove(path);
}

TEST(CApi, CommandsAndModel) {
  const auto dir = fs::temp_directory_path() / ("mealcast_capi_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto data = (dir / "d.csv").string();
  const auto model_path = (dir / "m.txt").string();
  mc_synth_profile p;
  mc_synth_profile_default(&p);
  mc_outcome* o = nullptr;
  ASSERT_EQ(mc_cmd_synth(300, 4, &p, data.c_str(), &o), 0);
  EXPECT_EQ(mc_outcome_artifact_count(o), 1u);
  EXPECT_EQ(std::string(mc_outcome_artifact(o, 0)), data);
  mc_outcome_free(o);

  const uint64_t seed = 2;
  ASSERT_EQ(mc_cmd_train(data.c_str(), nullptr, model_path.c_str(), &seed, &o), 0);
  EXPECT_EQ(mc_outcome_exit_code(o), 0);
  EXPECT_EQ(mc_outcome_artifact_count(o), 5u);
  mc_outcome_free(o);

  mc_model* m = nullptr;
  ASSERT_EQ(mc_model_load(model_path.c_str(), &m), MC_OK);
  EXPECT_EQ(mc_model_input_dim(m), 8u);
  size_t needed = 0;
  char small[4];
  EXPECT_EQ(mc_model_topology(m, small, sizeof small, &needed), MC_ERR_VALIDATION);
  std::vector<char> buf(needed);
  ASSERT_EQ(mc_model_topology(m, buf.data(), buf.size(), &needed), MC_OK);
  EXPECT_STREQ(buf.data(), "8-10-10-1");
  const double x[8] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0, 0.5};
  double y = -1;
  ASSERT_EQ(mc_model_forward(m, x, 8, &y, 1), MC_OK);
  EXPECT_TRUE(y > -1.0 && y < 1.5);
  EXPECT_EQ(mc_model_forward(m, x, 7, &y, 1), MC_ERR_VALIDATION);
  const char* labels[8] = {"Mercimek Çorbası", "Bamya", "Makarna", "Turşu", "Ayran", "Salı", "Yok", "Kış"};
  int64_t demand = -1;
  ASSERT_EQ(mc_model_predict(m, labels, &demand), MC_OK);
  EXPECT_GT(demand, 0);
  labels[0] = "Kremalı Mantar";
  EXPECT_EQ(mc_model_predict(m, labels, &demand), MC_ERR_VALIDATION);
  EXPECT_NE(std::string(mc_last_error()).find("soup"), std::string::npos);
  mc_model_free(m);

  labels[0] = "Mercimek Çorbası";
  ASSERT_EQ(mc_cmd_predict(model_path.c_str(), labels, &o), 0);
  EXPECT_EQ(std::stoll(mc_outcome_summary(o)), demand);
  mc_outcome_free(o);

  EXPECT_EQ(mc_cmd_train("/nonexistent.csv", nullptr, model_path.c_str(), nullptr, nullptr), 1);
  EXPECT_NE(std::string(mc_last_error()).find("train"), std::string::npos);
  fs::remove_all(dir);
}
