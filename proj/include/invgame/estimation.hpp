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

#ifndef INVGAME_ESTIMATION_HPP_
#define INVGAME_ESTIMATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "invgame/dataset.hpp"
#include "invgame/distribution.hpp"
#include "invgame/equilibrium.hpp"
#include "invgame/game.hpp"
#include "invgame/lbr.hpp"
#include "invgame/optimize.hpp"

namespace invgame {

inline constexpr double kProbabilityFloor = 1e-12;

struct CountVector {
  std::array<long long, 4> n{};

  long long total() const { return n[0] + n[1] + n[2] + n[3]; }
  // n / T. Throws InvalidArgument when T == 0.
  JointDistribution empirical() const;
  CountVector& operator+=(const CountVector& other);
  friend bool operator==(const CountVector&, const CountVector&) = default;
};

// Throws InvalidArgument on an empty dataset.
CountVector counts(const Dataset& d);

// -sum_l n_l log(max(p_l, floor)).
double nll(const std::array<double, 4>& p, const CountVector& n,
           double floor = kProbabilityFloor);
double nll(const JointDistribution& p, const CountVector& n,
           double floor = kProbabilityFloor);

// Where the features of each observation come from: one map for the whole
// dataset, or a map built from each record's kinematic context.
class FeatureSource {
 public:
  using Builder = std::function<FeatureMap(const TrafficContext&)>;

  static FeatureSource fixed(FeatureMap features);
  static FeatureSource per_record(Builder builder, int dim1, int dim2);

  bool is_fixed() const { return !builder_; }
  int dim(Player p) const { return p == Player::kOne ? dim1_ : dim2_; }
  // Throws InvalidArgument for a per-record source and a record without
  // context.
  FeatureMap features_for(const Record& r) const;

 private:
  FeatureSource() = default;
  std::optional<FeatureMap> fixed_;
  Builder builder_;
  int dim1_ = 0;
  int dim2_ = 0;
};

// Observations sharing one feature map, pooled into counts.
struct ObservationCell {
  FeatureMap features;
  CountVector counts;
};

// Cells in order of first occurrence; records with identical context share a
// cell. Throws InvalidArgument on an empty dataset.
std::vector<ObservationCell> group_observations(const Dataset& d,
                                                const FeatureSource& source);

struct FitConfig {
  int restarts = 32;
  int max_iter = 2000;
  std::uint64_t seed = 42;
  std::vector<double> lambda_grid = {0.5, 1.0, 2.0, 3.0};
  double lambda_max = 10.0;
  double floor = kProbabilityFloor;
  // LBR-ML only: hold rationality fixed instead of estimating it.
  std::optional<Rationality> fixed_lambda;
  int jobs = 0;
  bool parallel = true;

  OptimizeConfig optimizer() const;
  // Throws InvalidArgument on unknown keys or out-of-range values.
  static FitConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

FitConfig load_fit_config(const std::string& path);

struct FitDiagnostics {
  int restarts = 0;
  int best_restart = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

struct CeMlEstimate {
  WeightPair w;
  MixtureWeights y;
  GameClass game_class;
  double nll;
  JointDistribution fitted_distribution;
  FitDiagnostics diagnostics;
};

struct LbrMlEstimate {
  WeightPair w;
  Rationality lambda;
  double nll;
  JointDistribution fitted_distribution;
  FitDiagnostics diagnostics;
};

struct IceEstimate {
  WeightPair w;
  double violation;
  double nll;
  JointDistribution fitted_distribution;
  FitDiagnostics diagnostics;
};

// Throws NumericalError when no start reaches an (anti-)coordination game.
CeMlEstimate fit_ce_ml(const Dataset& d, const FeatureSource& source,
                       const FitConfig& cfg);
CeMlEstimate fit_ce_ml(const Dataset& d, const FeatureMap& features,
                       const FitConfig& cfg);
LbrMlEstimate fit_lbr_ml(const Dataset& d, const FeatureSource& source,
                         const FitConfig& cfg);
LbrMlEstimate fit_lbr_ml(const Dataset& d, const FeatureMap& features,
                         const FitConfig& cfg);
IceEstimate fit_ice(const Dataset& d, const FeatureSource& source,
                    const FitConfig& cfg);
IceEstimate fit_ice(const Dataset& d, const FeatureMap& features,
                    const FitConfig& cfg);

// Hinge loss sum_k max(0, -c_k) of the CE constraints under each cell's
// empirical distribution, weighted by the cell's share of the data.
double ice_violation(const std::vector<ObservationCell>& cells,
                     std::span<const double> w1, std::span<const double> w2);

enum class Method { kCeMl, kLbrMl, kIce };

std::string to_string(Method m);
// Accepts "ce-ml", "lbr-ml", "ice". Throws InvalidArgument otherwise.
Method parse_method(const std::string& name);

// Method-independent view of a fit, as written by the CLI.
struct EstimateResult {
  Method method;
  WeightPair w;
  std::optional<MixtureWeights> y;
  std::optional<Rationality> lambda;
  std::optional<double> violation;
  double nll;
  JointDistribution fitted_distribution;
  FitDiagnostics diagnostics;

  nlohmann::json to_json() const;
};

EstimateResult to_result(const CeMlEstimate& e);
EstimateResult to_result(const LbrMlEstimate& e);
EstimateResult to_result(const IceEstimate& e);

EstimateResult fit(Method m, const Dataset& d, const FeatureSource& source,
                   const FitConfig& cfg);

}  // namespace invgame

#endif  // INVGAME_ESTIMATION_HPP_
