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

#ifndef INVGAME_OPTIMIZE_HPP_
#define INVGAME_OPTIMIZE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace invgame {

// A contiguous group of parameters with its own feasible set. Simplex blocks
// are searched through a softmax over dim-1 free coordinates, box blocks
// through a logistic map per coordinate.
struct ParameterBlock {
  enum class Kind { kSimplex, kBox };
  Kind kind = Kind::kBox;
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;

  static ParameterBlock simplex(int dim);
  static ParameterBlock box(double lo, double hi, int dim = 1);
  // Number of unconstrained coordinates this block occupies.
  int free_dim() const { return kind == Kind::kSimplex ? dim - 1 : dim; }
};

// Objectives take the parameters in natural (feasible) coordinates, blocks
// concatenated in order. Must be safe to call concurrently.
using Objective = std::function<double(std::span<const double>)>;

struct OptimizeConfig {
  int restarts = 32;
  int max_iter = 2000;
  std::uint64_t seed = 42;
  // Simplex-size stopping threshold in unconstrained coordinates.
  double size_tol = 1e-8;
  double initial_step = 0.5;
  // Iterations without any change of the best value after which a run counts
  // as converged. 0: 50 * (free dimension + 1).
  int stall_iter = 0;
  bool parallel = true;
  int jobs = 0;  // 0: OpenMP default
};

struct RestartOutcome {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int best_restart = 0;
  // Best objective value after each iteration of the winning restart
  // (nonincreasing), starting with its initial value.
  std::vector<double> trace;
  std::vector<RestartOutcome> restarts;
};

// Values this large or non-finite are treated as divergence.
inline constexpr double kDivergedValue = 1e100;

// Multi-start Nelder-Mead. The first starts come from initial_points (natural
// coordinates); the rest are drawn uniformly over each block. Each restart has
// its own RNG stream derived from (seed, restart index), and ties in the final
// reduction go to the lower restart index, so results do not depend on
// threading. Throws NumericalError when every start diverges.
OptimizeResult optimize(const Objective& objective,
                        const std::vector<ParameterBlock>& blocks,
                        const OptimizeConfig& cfg,
                        const std::vector<std::vector<double>>& initial_points = {});

// Single Nelder-Mead run from a natural-coordinate start.
RestartOutcome optimize_from(const Objective& objective,
                             const std::vector<ParameterBlock>& blocks,
                             const std::vector<double>& start,
                             const OptimizeConfig& cfg,
                             std::vector<double>* trace = nullptr);

// Draws a start uniformly over the feasible set of every block.
std::vector<double> random_start(const std::vector<ParameterBlock>& blocks,
                                 std::uint64_t seed, int restart);

int total_dim(const std::vector<ParameterBlock>& blocks);

// Independent seed for a numbered sub-stream (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace invgame

#endif  // INVGAME_OPTIMIZE_HPP_
