// Copyright 2026 The invgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "invgame/error.hpp"
#include "invgame/experiments.hpp"

namespace invgame {
namespace {

WeightPair pair(std::vector<double> a, std::vector<double> b) {
  return {WeightVector::on_simplex(std::move(a)), WeightVector::on_simplex(std::move(b))};
}

// Small E1 configuration that runs in well under a second.
ExperimentConfig tiny_e1() {
  auto cfg = ExperimentConfig::defaults(ExperimentId::kE1);
  cfg.T = {200, 400};
  cfg.seeds = {0, 1, 2};
  cfg.fit.restarts = 4;
  cfg.fit.max_iter = 300;
  return cfg;
}

TEST(Metrics, MaeRmseExamples) {
  auto truth = pair({0.3, 0.7}, {0.4, 0.6});
  auto same = mae_rmse(truth, truth);
  EXPECT_EQ(same.mae, 0.0);
  EXPECT_EQ(same.rmse, 0.0);
  auto e = mae_rmse(pair({0.4, 0.6}, {0.5, 0.5}), truth);
  EXPECT_NEAR(e.mae, 0.1, 1e-12);
  EXPECT_NEAR(e.rmse, 0.1, 1e-12);
  auto r = mae_rmse(pair({0.5, 0.5}, {0.4, 0.6}), pair({0.3, 0.7}, {0.4, 0.6}));
  // residuals (0.2, -0.2, 0, 0)
  EXPECT_NEAR(r.mae, 0.1, 1e-12);
  auto one = mae_rmse(pair({0.2, 0.0, 0.8}, {1.0}), pair({0.0, 0.0, 1.0}, {1.0}));
  // residuals (0.2, 0, -0.2, 0): MAE 0.1, RMSE sqrt(0.02)
  EXPECT_NEAR(one.rmse, std::sqrt(0.02), 1e-12);
  EXPECT_THROW(mae_rmse(pair({1.0}, {1.0}), truth), InvalidArgument);
}

TEST(Metrics, Accuracy) {
  Dataset d;
  for (int i = 0; i < 3; ++i) d.add(JointAction::from_index(1));
  d.add(JointAction::from_index(2));
  EXPECT_DOUBLE_EQ(
      decision_accuracy(JointDistribution::point_mass(JointAction::from_index(1)), d),
      75.0);
  // Uniform model: ties go to a(1).
  EXPECT_DOUBLE_EQ(decision_accuracy(JointDistribution::uniform(), d), 75.0);
  EXPECT_THROW(decision_accuracy(JointDistribution::uniform(), Dataset{}),
               InvalidArgument);
}

TEST(Spread, MedianAndIqr) {
  auto s = median_iqr({4, 1, 3, 2});
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.iqr, 3.25 - 1.75);
  auto t = median_iqr({5});
  EXPECT_EQ(t.median, 5);
  EXPECT_EQ(t.iqr, 0);
  EXPECT_THROW(median_iqr({}), InvalidArgument);
}

TEST(Config, ValidationAndDefaults) {
  auto cfg = ExperimentConfig::defaults(ExperimentId::kE1);
  EXPECT_EQ(cfg.T.size(), 3u);
  EXPECT_EQ(cfg.seeds.size(), 10u);
  cfg.seeds.clear();
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  auto e4 = ExperimentConfig::defaults(ExperimentId::kE4);
  auto specs = e4.method_specs();
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_TRUE(specs[1].fixed_lambda.has_value());
  auto bad = ExperimentConfig::defaults(ExperimentId::kE2);
  bad.methods = {"ce-ml", "nope"};
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(ExperimentConfig::from_json({{"T", {500}}}), InvalidArgument);
  EXPECT_THROW(parse_experiment_id("e5"), InvalidArgument);
  EXPECT_EQ(parse_experiment_id("E3"), ExperimentId::kE3);
}

TEST(Config, JsonRoundTrip) {
  auto cfg = ExperimentConfig::defaults(ExperimentId::kE4);
  cfg.noise = 0.7;
  cfg.sweep.v_steps = 2;
  auto back = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
}

TEST(Run, RowCardinalityAndOrder) {
  auto cfg = tiny_e1();
  auto report = run_experiment(cfg);
  ASSERT_EQ(report.rows.size(), 2u * 3u * 3u);
  EXPECT_EQ(report.rows[0].T, 200);
  EXPECT_EQ(report.rows[0].method, "ce-ml");
  EXPECT_EQ(report.rows[1].method, "lbr-ml");
  EXPECT_EQ(report.rows[3].seed, 1u);
  for (const auto& row : report.rows) {
    EXPECT_FALSE(row.error.has_value()) << *row.error;
    EXPECT_GE(row.nll, row.empirical_nll - 1e-9);
    ASSERT_TRUE(row.metrics.mae.has_value());
    if (row.method == "ce-ml") EXPECT_TRUE(row.fitted_is_ce.value_or(false));
  }
  ASSERT_EQ(report.aggregates.size(), 6u);
  EXPECT_EQ(report.aggregates, aggregate_rows(report.rows));
  EXPECT_EQ(report.aggregates[0].ok_rows, 3);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  auto cfg = tiny_e1();
  cfg.jobs = 1;
  auto a = run_experiment(cfg);
  cfg.jobs = 3;
  auto b = run_experiment(cfg);
  EXPECT_EQ(format_rows_csv(a), format_rows_csv(b));
  EXPECT_EQ(a, b);
}

TEST(Report, JsonRoundTrip) {
  auto report = run_experiment(tiny_e1());
  auto back = ExperimentReport::from_json(report.to_json());
  EXPECT_EQ(back, report);
  EXPECT_EQ(report.to_json().at("schema_version"), kReportSchemaVersion);
}

TEST(Report, CsvShapes) {
  auto report = run_experiment(tiny_e1());
  auto rows = format_rows_csv(report);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 1 + 18);
  auto plot = format_plot_csv(report);
  EXPECT_EQ(plot.rfind("action_index,empirical_p,model_p,method,experiment,T", 0), 0u);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 1 + 3 * 2 * 4);
  EXPECT_NE(format_summary_table(report).find("ce-ml"), std::string::npos);
}

TEST(Data, ProtocolsAreDeterministic) {
  for (auto id : {ExperimentId::kE1, ExperimentId::kE2, ExperimentId::kE3,
                  ExperimentId::kE4}) {
    auto cfg = ExperimentConfig::defaults(id);
    EXPECT_EQ(generate_experiment_data(cfg, 300, 4), generate_experiment_data(cfg, 300, 4));
    EXPECT_EQ(generate_experiment_data(cfg, 300, 4).size(), 300);
  }
  EXPECT_FALSE(experiment_truth(ExperimentConfig::defaults(ExperimentId::kE4)).has_value());
  EXPECT_TRUE(experiment_truth(ExperimentConfig::defaults(ExperimentId::kE2)).has_value());
}

}  // namespace
}  // namespace invgame
