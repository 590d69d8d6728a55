/*
 * Copyright 2026 The mapnarrate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mapnarrate/session.hpp"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dataset_helpers.hpp"

namespace mapnarrate {
namespace {

using namespace std::chrono_literals;
using testing_helpers::FixtureDataset;

Clock FixedClock(std::chrono::system_clock::time_point t) {
  return [t] { return t; };
}

TEST(Script, ParsesVerbs) {
  EXPECT_EQ(ParseScriptLine("pan right"), Action::PanTo(Direction::kRight));
  EXPECT_EQ(ParseScriptLine("zoom out"), Action::Zoom(false));
  EXPECT_EQ(ParseScriptLine("info"), Action::Info());
  EXPECT_EQ(ParseScriptLine("corners"), Action::Corners());
  EXPECT_FALSE(ParseScriptLine("pan"));
  EXPECT_FALSE(ParseScriptLine("pan sideways"));
  EXPECT_FALSE(ParseScriptLine("info now"));
  EXPECT_FALSE(ParseScriptLine("jump Kansas"));
  EXPECT_FALSE(ParseScriptLine("zoom in twice"));
}

TEST(Script, ErrorNamesLine) {
  std::istringstream in("pan left\n\n# comment\nfly north\n");
  try {
    ParseScript(in);
    FAIL() << "expected ScriptError";
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Script, RoundTripsThroughText) {
  for (const auto& a : {Action::PanTo(Direction::kUp), Action::Zoom(true), Action::Info(), Action::Corners()}) {
    EXPECT_EQ(ParseScriptLine(ToScriptLine(a)), a);
  }
}

TEST(Iso8601, FormatsUtcMillis) {
  const auto t = std::chrono::system_clock::time_point(std::chrono::milliseconds(1792143000125LL));
  EXPECT_EQ(Iso8601(t), "2026-10-16T09:30:00.125Z");
}

TEST(ActionLog, LineRoundTrip) {
  const ActionRecord r{"2026-10-16T09:30:00.125Z", "s1-abc", Action::PanTo(Direction::kLeft),
                       {{-98.123456789012345, 36.1, -90.2, 41.7}, 3}};
  const ActionRecord back = ParseLogLine(ToLogLine(r));
  EXPECT_EQ(back.timestamp, r.timestamp);
  EXPECT_EQ(back.session_id, r.session_id);
  EXPECT_EQ(back.action, r.action);
  EXPECT_EQ(back.viewport, r.viewport);  // exact doubles
  EXPECT_THROW(ParseLogLine("{}"), ParseError);
  EXPECT_THROW(ParseLogLine(R"({"timestamp":"t","sessionId":"s","action":"fly","arg":"","rect":[0,0,1,1],"zoom":0})"),
               ParseError);
}

TEST(Session, MissouriMove) {
  Session s("t", FixtureDataset("missouri"));
  EXPECT_EQ(s.Title().text(), "Population Density. Press m to explore the map with the keyboard.");
  EXPECT_EQ(CenterRegion(s.viewport(), s.layer()), "Kansas");
  const auto r = s.Apply(Action::PanTo(Direction::kRight));
  EXPECT_EQ(r.announcement.text(), "Moved right, now centered on Missouri.");
  EXPECT_EQ(r.announcement.kind(), AnnouncementKind::kMove);
  EXPECT_FALSE(r.out_of_bounds);
  EXPECT_EQ(r.layer_name, "state");
}

TEST(Session, InitialViewportIsPaddedBbox) {
  const auto ds = FixtureDataset("missouri");
  Session s("t", ds);
  const GeoRect& b = ds->bbox;
  EXPECT_DOUBLE_EQ(s.viewport().rect.west, b.west - 0.05 * b.width());
  EXPECT_DOUBLE_EQ(s.viewport().rect.north, b.north + 0.05 * b.height());
  EXPECT_EQ(s.viewport().zoom, 0);
}

TEST(Session, PanningOffDataAnnouncesOutOfBounds) {
  Session s("t", FixtureDataset("missouri"));
  std::vector<std::string> said;
  for (int i = 0; i < 6; ++i) said.push_back(s.Apply(Action::PanTo(Direction::kUp)).announcement.text());
  EXPECT_EQ(said.back(), "Currently out of bounds. Please move back on the map.");
  EXPECT_TRUE(s.out_of_bounds());
  // Over data but with no region under the center is not out of bounds.
  EXPECT_EQ(said[1], "Moved up, not centered on any region.");
}

TEST(Session, InfoOnEmptyViewUsesFallbacks) {
  Session s("t", FixtureDataset("missouri"));
  for (int i = 0; i < 8; ++i) s.Apply(Action::PanTo(Direction::kLeft));
  const auto r = s.Apply(Action::Info());
  EXPECT_EQ(r.announcement.kind(), AnnouncementKind::kSummary);
  EXPECT_NE(r.announcement.text().find("There are no particular regions with high population density."),
            std::string::npos);
  EXPECT_NE(r.announcement.text().find("There are no particular regions with low population density."),
            std::string::npos);
  EXPECT_EQ(r.announcement.text().find("Highest"), std::string::npos);
}

TEST(Session, ZoomAnnouncesLayer) {
  Session s("t", FixtureDataset("checkerboard"));
  std::string last;
  for (int i = 0; i < 2; ++i) last = s.Apply(Action::Zoom(true)).announcement.text();
  EXPECT_EQ(last, "Zoomed in to district-level view.");
  EXPECT_EQ(s.layer().name, "district");
  for (int i = 0; i < 6; ++i) s.Apply(Action::Zoom(true));
  EXPECT_EQ(s.viewport().zoom, 8);
  EXPECT_EQ(s.Apply(Action::Zoom(true)).announcement.text(),
            "Cannot zoom in further. Showing district-level view.");
}

TEST(Session, LogIsAppendOnlyWithNonDecreasingTimes) {
  auto t = std::chrono::system_clock::time_point(std::chrono::seconds(1'800'000'000));
  int calls = 0;
  // Clock goes backwards on the third call; the log must not.
  Clock clock = [&] {
    ++calls;
    return calls == 3 ? t - 10s : t + std::chrono::seconds(calls);
  };
  std::vector<std::string> sunk;
  Session s("abc", FixtureDataset("missouri"), {}, clock,
            [&](const ActionRecord& r) { sunk.push_back(ToLogLine(r)); });
  s.Apply(Action::PanTo(Direction::kRight));
  s.Apply(Action::Info());
  s.Apply(Action::Zoom(true));
  s.Apply(Action::Corners());
  ASSERT_EQ(s.log().size(), 4u);
  ASSERT_EQ(sunk.size(), 4u);
  for (size_t i = 1; i < s.log().size(); ++i) EXPECT_LE(s.log()[i - 1].timestamp, s.log()[i].timestamp);
  EXPECT_EQ(s.log()[2].viewport, s.viewport());
  EXPECT_EQ(s.log()[2].action, Action::Zoom(true));
  EXPECT_EQ(ParseLogLine(sunk[0]).session_id, "abc");
}

TEST(Session, ValidUnderRandomActions) {
  const auto ds = FixtureDataset("checkerboard");
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Session s("t", ds, {}, FixedClock({}));
    for (int i = 0; i < 200; ++i) {
      const int p = pick(rng);
      const Action a = p < 4 ? Action::PanTo(static_cast<Direction>(p)) : Action::Zoom(p == 4);
      const auto r = s.Apply(a);
      ASSERT_TRUE(r.viewport.rect.valid());
      ASSERT_GE(r.viewport.zoom, 0);
      ASSERT_LE(r.viewport.zoom, 8);
      ASSERT_FALSE(r.announcement.text().empty());
    }
  }
}

TEST(ReplayTranscript, Deterministic) {
  const auto ds = FixtureDataset("checkerboard");
  const std::vector<Action> script = {Action::PanTo(Direction::kRight), Action::Info(), Action::Zoom(true),
                                      Action::Corners()};
  EXPECT_EQ(ReplayTranscript(ds, script), ReplayTranscript(ds, script));
  EXPECT_TRUE(ReplayTranscript(ds, {}).empty());
}

}  // namespace
}  // namespace mapnarrate
