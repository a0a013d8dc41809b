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

#include "invgame/game_spec.hpp"

#include <fstream>

#include "invgame/error.hpp"

namespace invgame {

using nlohmann::json;

namespace {

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument(where + ": expected a nonempty array of numbers");
  }
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      throw InvalidArgument(where + "[" + std::to_string(k) +
                            "]: expected a number");
    }
    v.push_back(j[k].get<double>());
  }
  return v;
}

FeatureMatrix matrix(const json& j, const std::string& where) {
  std::array<std::vector<double>, 4> rows;
  if (j.is_array()) {
    if (j.size() != 4) {
      throw InvalidArgument(where + ": expected 4 rows, one per joint action");
    }
    for (int l = 0; l < 4; ++l) {
      rows[l] = number_list(j[l], where + "[" + std::to_string(l) + "]");
    }
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "1" && key != "2" && key != "3" && key != "4") {
        throw InvalidArgument(where + "." + key +
                              ": joint-action keys are \"1\"..\"4\"");
      }
    }
    for (int l = 1; l <= 4; ++l) {
      const std::string key = std::to_string(l);
      if (!j.contains(key)) throw InvalidArgument(where + "." + key + ": missing");
      rows[l - 1] = number_list(j[key], where + "." + key);
    }
  } else {
    throw InvalidArgument(where + ": expected an array or object");
  }
  try {
    return FeatureMatrix(rows);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + ": " + e.what());
  }
}

const json& player_entry(const json& f, int player) {
  if (f.is_array()) {
    if (f.size() != 2) throw InvalidArgument("features: expected 2 players");
    return f[player - 1];
  }
  const std::string named = "player" + std::to_string(player);
  const std::string short_key = std::to_string(player);
  if (f.contains(named)) return f[named];
  if (f.contains(short_key)) return f[short_key];
  throw InvalidArgument("features." + named + ": missing");
}

}  // namespace

Game2x2 GameSpec::game() const {
  if (!weights) throw InvalidArgument("game spec has no weights");
  return build_game(features, weights->w1, weights->w2);
}

GameSpec parse_game_spec(const json& j) {
  if (!j.is_object()) throw InvalidArgument("game spec: expected an object");
  if (!j.contains("features")) throw InvalidArgument("features: missing");
  const json& f = j["features"];
  if (!f.is_array() && !f.is_object()) {
    throw InvalidArgument("features: expected an array or object");
  }
  GameSpec spec;
  spec.features = {matrix(player_entry(f, 1), "features.player1"),
                   matrix(player_entry(f, 2), "features.player2")};
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_array() || w.size() != 2) {
      throw InvalidArgument("weights: expected two arrays");
    }
    std::array<WeightVector, 2> pair = {
        WeightVector::on_simplex({1.0}), WeightVector::on_simplex({1.0})};
    for (int i = 0; i < 2; ++i) {
      const std::string where = "weights[" + std::to_string(i) + "]";
      try {
        pair[i] = WeightVector::on_simplex(number_list(w[i], where));
      } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        throw InvalidArgument(msg.rfind(where, 0) == 0 ? msg
                                                       : where + ": " + msg);
      }
    }
    spec.weights = WeightPair{pair[0], pair[1]};
    if (pair[0].dim() != spec.features.player1.dim() ||
        pair[1].dim() != spec.features.player2.dim()) {
      throw InvalidArgument("weights: dimensions do not match the features");
    }
  }
  return spec;
}

GameSpec load_game_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open game spec '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  try {
    return parse_game_spec(j);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

json to_json(const GameSpec& spec) {
  auto rows = [](const FeatureMatrix& m) {
    json o;
    for (int l = 0; l < 4; ++l) o[std::to_string(l + 1)] = m.rows()[l];
    return o;
  };
  json j;
  j["features"] = {{"player1", rows(spec.features.player1)},
                   {"player2", rows(spec.features.player2)}};
  if (spec.weights) {
    j["weights"] = {spec.weights->w1.values(), spec.weights->w2.values()};
  }
  return j;
}

}  // namespace invgame
