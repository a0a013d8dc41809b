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

#include <sstream>

#include "invgame/dataset.hpp"
#include "invgame/error.hpp"
#include "invgame/game_spec.hpp"

namespace invgame {
namespace {

using nlohmann::json;

std::string error_of(const std::string& jsonl) {
  std::istringstream in(jsonl);
  try {
    read_jsonl(in);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(Jsonl, RoundTrip) {
  Dataset d;
  d.add(JointAction::from_index(1));
  d.add(JointAction::from_index(3), TrafficContext{2.0, 3.0, 1.0});
  d.add(JointAction::from_index(4), std::nullopt, JointAction::from_index(4));
  d.add(JointAction::from_index(2), TrafficContext{0.1, 1.0 / 3.0, 1.0 / 3.0 - 0.1},
        JointAction::from_index(2));
  std::ostringstream out;
  write_jsonl(out, d);
  std::istringstream in(out.str());
  EXPECT_EQ(read_jsonl(in), d);
  EXPECT_EQ(d[2].t, 3);
}

TEST(Jsonl, BlankLinesSkipped) {
  std::istringstream in("{\"a1\":1,\"a2\":2}\n\n{\"a1\":2,\"a2\":2}\n");
  auto d = read_jsonl(in);
  ASSERT_EQ(d.size(), 2);
  EXPECT_EQ(d[1].action.index(), 4);
}

TEST(Jsonl, ErrorsNameTheLine) {
  EXPECT_NE(error_of("{\"a1\":1,\"a2\":1}\n{\"a1\":3,\"a2\":1}\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of("{\"a1\":1,\"a2\":1}\nnot json\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of("{\"a1\":1}\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("{\"t\":2,\"a1\":1,\"a2\":1}\n").find("line 1"),
            std::string::npos);
  EXPECT_NE(error_of("{\"a1\":1,\"a2\":1,\"tau1\":2}\n").find("line 1"),
            std::string::npos);
}

TEST(Jsonl, MissingFile) {
  EXPECT_THROW(read_jsonl_file("/nonexistent/data.jsonl"), InvalidArgument);
}

TEST(Csv, Columns) {
  Dataset d;
  d.add(JointAction::from_index(2));
  d.add(JointAction::from_index(3), TrafficContext{2.0, 3.0, 1.0});
  std::ostringstream out;
  write_csv(out, d);
  EXPECT_EQ(out.str(), "t,a1,a2,tau1,tau2,delta\n1,1,2,,,\n2,2,1,2,3,1\n");
}

TEST(Kinematics, DerivedQuantities) {
  auto k = KinematicState::checked(10, 10, 20, 30);
  EXPECT_DOUBLE_EQ(k.tau1(), 2.0);
  EXPECT_DOUBLE_EQ(k.tau2(), 3.0);
  EXPECT_DOUBLE_EQ(k.delta(), 1.0);
  EXPECT_THROW(KinematicState::checked(0, 10, 20, 30), InvalidArgument);
  EXPECT_THROW(KinematicState::checked(10, 10, -1, 30), InvalidArgument);
}

const char* kSpec = R"({
  "features": {"player1": {"1": [1, 0], "2": [0, 1], "3": [0, 1], "4": [1, 1]},
               "player2": [[1, 0], [0, 1], [1, 1], [0, 0]]},
  "weights": [[0.3, 0.7], [0.5, 0.5]]
})";

TEST(GameSpec, ParsesBothLayouts) {
  auto spec = parse_game_spec(json::parse(kSpec));
  EXPECT_EQ(spec.features.player1.row(JointAction::from_index(4)),
            (std::vector<double>{1, 1}));
  EXPECT_EQ(spec.features.player2.row(JointAction::from_index(3)),
            (std::vector<double>{1, 1}));
  ASSERT_TRUE(spec.weights.has_value());
  auto g = spec.game();
  EXPECT_DOUBLE_EQ(g.payoff(Player::kOne, JointAction::from_index(4)), 1.0);
  EXPECT_EQ(parse_game_spec(to_json(spec)).features, spec.features);
}

std::string spec_error(json j) {
  try {
    parse_game_spec(j);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(GameSpec, ErrorsNameTheLocation) {
  auto j = json::parse(kSpec);
  j["features"]["player2"][2] = json::array({1, "x"});
  EXPECT_NE(spec_error(j).find("features.player2[2]"), std::string::npos);

  j = json::parse(kSpec);
  j["features"]["player1"].erase("3");
  EXPECT_NE(spec_error(j).find("features.player1.3"), std::string::npos);

  j = json::parse(kSpec);
  j["weights"][1] = json::array({0.5, 0.6});
  EXPECT_NE(spec_error(j).find("weights"), std::string::npos);

  j = json::parse(kSpec);
  j["features"].erase("player2");
  EXPECT_NE(spec_error(j).find("features.player2"), std::string::npos);
}

TEST(GameSpec, WeightsOptional) {
  auto j = json::parse(kSpec);
  j.erase("weights");
  auto spec = parse_game_spec(j);
  EXPECT_FALSE(spec.weights.has_value());
  EXPECT_THROW(spec.game(), InvalidArgument);
}

TEST(GameSpec, MissingFile) {
  EXPECT_THROW(load_game_spec("/nonexistent/game.json"), InvalidArgument);
}

}  // namespace
}  // namespace invgame
