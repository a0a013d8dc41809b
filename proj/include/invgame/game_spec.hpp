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

#ifndef INVGAME_GAME_SPEC_HPP_
#define INVGAME_GAME_SPEC_HPP_

#include <optional>
#include <string>

#include <json.hpp>

#include "invgame/game.hpp"

namespace invgame {

// Game specification file:
//   {"features": {"player1": {"1": [..], "2": [..], "3": [..], "4": [..]},
//                 "player2": {...}},
//    "weights": [[...], [...]]}
// Each player's matrix may also be a list of four rows, and "features" a list
// of two matrices. Weights are optional (fit needs only features).
struct GameSpec {
  FeatureMap features;
  std::optional<WeightPair> weights;

  // Throws InvalidArgument when weights are missing or mismatched.
  Game2x2 game() const;
};

// Throws InvalidArgument naming the offending location, e.g.
// "features.player2.3".
GameSpec parse_game_spec(const nlohmann::json& j);
GameSpec load_game_spec(const std::string& path);
nlohmann::json to_json(const GameSpec& spec);

}  // namespace invgame

#endif  // INVGAME_GAME_SPEC_HPP_
