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

#ifndef INVGAME_EXPERIMENTS_HPP_
#define INVGAME_EXPERIMENTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "invgame/dataset.hpp"
#include "invgame/distribution.hpp"
#include "invgame/estimation.hpp"
#include "invgame/game.hpp"
#include "invgame/scenarios.hpp"

namespace invgame {

struct ErrorSummary {
  double mae;
  double rmse;
};

// Residuals pooled over every weight entry of both players. Throws
// InvalidArgument on a dimension mismatch.
ErrorSummary mae_rmse(const WeightPair& estimate, const WeightPair& truth);

// 100 x share of records equal to the model's argmax (lowest index on ties).
// Throws InvalidArgument on an empty dataset.
double decision_accuracy(const JointDistribution& model, const Dataset& d);

struct Metrics {
  std::optional<double> mae;  // absent without ground-truth weights
  std::optional<double> rmse;
  double tv = 0.0;
  double accuracy = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class ExperimentId { kE1, kE2, kE3, kE4 };

std::string to_string(ExperimentId id);
// Accepts "e1".."e4" in either case.
ExperimentId parse_experiment_id(const std::string& s);

// A fitting method as listed in a config: "ce-ml", "lbr-ml", "ice", or
// "lbr-ml-fixed" (LBR-ML with rationality held at the config's fixed_lambda).
struct MethodSpec {
  std::string name;
  Method method;
  std::optional<Rationality> fixed_lambda;
};

struct ExperimentConfig {
  ExperimentId id = ExperimentId::kE1;
  std::vector<int> T = {500, 1000, 2000};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::string> methods = {"ce-ml", "lbr-ml", "ice"};
  // Decision state of the E2/E3 traffic game.
  KinematicState state{10.0, 10.0, 20.0, 30.0};
  // E3: 1-based index of the CE vertex used as the signal device.
  int device_vertex = 4;
  // E4 scenario sweep and driver noise.
  SweepGrid sweep;
  double noise = kDefaultDriverNoise;
  Rationality fixed_lambda{1.0, 1.0};
  FitConfig fit;
  int jobs = 0;  // 0: OpenMP default

  // Throws InvalidArgument naming the offending field.
  void validate() const;
  std::vector<MethodSpec> method_specs() const;
  static ExperimentConfig defaults(ExperimentId id);
  // Missing keys take the experiment's defaults.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

struct ReportRow {
  std::string method;
  int T = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;  // set when the fit failed
  Metrics metrics;
  std::vector<double> w1, w2;
  std::optional<std::array<double, 5>> y;
  std::optional<std::array<double, 2>> lambda;
  double nll = 0.0;
  double empirical_nll = 0.0;
  std::array<double, 4> empirical{};
  std::array<double, 4> fitted{};
  // CE-ML on a single decision state: whether the fit is a CE of its game.
  std::optional<bool> fitted_is_ce;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Spread {
  double median = 0.0;
  double iqr = 0.0;
  friend bool operator==(const Spread&, const Spread&) = default;
};

struct Aggregate {
  std::string method;
  int T = 0;
  int ok_rows = 0;
  int failed_rows = 0;
  std::optional<Spread> mae, rmse;
  std::optional<Spread> tv, accuracy;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::vector<Aggregate> aggregates;

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
  friend bool operator==(const ExperimentReport&,
                         const ExperimentReport&) = default;
};

// Median and interquartile range (linear interpolation between order
// statistics). Throws InvalidArgument on an empty sample.
Spread median_iqr(std::vector<double> values);

// Aggregates per (method, T) in row order of first appearance.
std::vector<Aggregate> aggregate_rows(const std::vector<ReportRow>& rows);

// The data protocol of an experiment at one (T, seed) cell.
Dataset generate_experiment_data(const ExperimentConfig& cfg, int T,
                                 std::uint64_t seed);
FeatureSource experiment_features(const ExperimentConfig& cfg);
std::optional<WeightPair> experiment_truth(const ExperimentConfig& cfg);

// Rows are ordered by (T, seed, method) as listed in the config, whatever the
// thread count. Fit failures become rows with `error` set.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes rows.csv, aggregates.csv, report.json and plot_data.csv into dir
// (created if needed). Throws Error with the path on I/O failure.
void emit_report(const ExperimentReport& r, const std::string& dir);

std::string format_rows_csv(const ExperimentReport& r);
std::string format_aggregates_csv(const ExperimentReport& r);
// Mean empirical and model probability per (method, T, action) over seeds.
std::string format_plot_csv(const ExperimentReport& r);
// Aligned text table: one line per (method, T) with median MAE/RMSE/TV and
// accuracy.
std::string format_summary_table(const ExperimentReport& r);

}  // namespace invgame

#endif  // INVGAME_EXPERIMENTS_HPP_
