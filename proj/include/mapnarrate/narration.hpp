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

// Text rendering of view state. All strings spoken to the user are built
// here, so the CLI, the HTTP service and any client share one source.

#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "mapnarrate/grouping.hpp"

namespace mapnarrate {

enum class Direction { kLeft, kRight, kUp, kDown };

inline std::string_view ToString(Direction d) {
  switch (d) {
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
  }
  return "";
}

inline std::optional<Direction> ParseDirection(std::string_view s) {
  if (s == "left") return Direction::kLeft;
  if (s == "right") return Direction::kRight;
  if (s == "up") return Direction::kUp;
  if (s == "down") return Direction::kDown;
  return std::nullopt;
}

enum class AnnouncementKind { kSummary, kMove, kZoom, kCorners, kOutOfBounds, kTitle };

inline std::string_view ToString(AnnouncementKind k) {
  switch (k) {
    case AnnouncementKind::kSummary: return "summary";
    case AnnouncementKind::kMove: return "move";
    case AnnouncementKind::kZoom: return "zoom";
    case AnnouncementKind::kCorners: return "corners";
    case AnnouncementKind::kOutOfBounds: return "outOfBounds";
    case AnnouncementKind::kTitle: return "title";
  }
  return "";
}

class Announcement {
 public:
  Announcement(AnnouncementKind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

  AnnouncementKind kind() const { return kind_; }
  const std::string& text() const { return text_; }

  friend bool operator==(const Announcement&, const Announcement&) = default;

 private:
  AnnouncementKind kind_;
  std::string text_;
};

struct NamedValue {
  std::string name;
  double value = 0.0;

  friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

// Top-left, top-right, bottom-left, bottom-right.
using CornerNames = std::array<std::optional<std::string>, 4>;

struct ViewDescription {
  std::string title;
  std::string layer_name;
  int zoom_level = 0;
  CornerNames corners;
  PatternResult pattern;
  std::optional<NamedValue> extremum_high;
  std::optional<NamedValue> extremum_low;
  std::optional<double> average;
  int visible_count = 0;
  std::string dataset_label;
  std::string units;

  friend bool operator==(const ViewDescription&, const ViewDescription&) = default;
};

inline constexpr std::string_view kOutOfBoundsText =
    "Currently out of bounds. Please move back on the map.";

// One decimal place, ties rounded away from zero. The value is first
// printed with 12 decimals so binary noise (1.05 -> 1.0499999...) does not
// decide the rounding.
inline std::string FormatValue(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", std::abs(v));
  std::string digits(buf);
  const auto dot = digits.find('.');
  std::string whole = digits.substr(0, dot);
  int tenth = digits[dot + 1] - '0';
  const bool round_up = digits[dot + 2] >= '5';
  if (round_up && ++tenth == 10) {
    tenth = 0;
    int i = static_cast<int>(whole.size()) - 1;
    while (i >= 0 && whole[i] == '9') whole[i--] = '0';
    if (i < 0) {
      whole.insert(whole.begin(), '1');
    } else {
      ++whole[i];
    }
  }
  std::string out = whole + "." + static_cast<char>('0' + tenth);
  if (v < 0 && out != "0.0") out.insert(out.begin(), '-');
  return out;
}

namespace detail {

inline std::string Capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

inline std::string Sentence(std::string s) {
  if (s.empty() || (s.back() != '.' && s.back() != '!' && s.back() != '?')) s += '.';
  return s;
}

inline std::string WithUnits(double value, const std::string& units) {
  std::string s = FormatValue(value);
  if (!units.empty()) s += " " + units;
  return s;
}

inline std::string PatternSentence(const std::optional<SpatialGroup>& group, std::string_view level,
                                   const std::string& label) {
  if (!group) {
    return "There are no particular regions with " + std::string(level) + " " + label + ".";
  }
  return Capitalized(label) + " is " + std::string(level) + " in the " + group->indicator +
         " of the current map view.";
}

}  // namespace detail

inline Announcement RenderSummary(const ViewDescription& v) {
  std::string text = detail::Sentence(v.title);
  text += " Showing " + v.layer_name + "-level data at zoom level " +
          std::to_string(v.zoom_level) + ".";
  text += " " + detail::PatternSentence(v.pattern.high, "high", v.dataset_label);
  text += " " + detail::PatternSentence(v.pattern.low, "low", v.dataset_label);
  if (v.visible_count > 0 && v.extremum_high && v.extremum_low && v.average) {
    text += " Highest: " + v.extremum_high->name + ", " +
            detail::WithUnits(v.extremum_high->value, v.units) + ".";
    text += " Lowest: " + v.extremum_low->name + ", " +
            detail::WithUnits(v.extremum_low->value, v.units) + ".";
    text += " Average across " + std::to_string(v.visible_count) + " visible " + v.layer_name +
            " areas: " + detail::WithUnits(*v.average, v.units) + ".";
  }
  return {AnnouncementKind::kSummary, std::move(text)};
}

inline Announcement RenderMove(Direction d, const std::optional<std::string>& center) {
  std::string text = "Moved " + std::string(ToString(d));
  text += center ? ", now centered on " + *center + "." : ", not centered on any region.";
  return {AnnouncementKind::kMove, std::move(text)};
}

inline Announcement RenderCorners(const CornerNames& corners) {
  static constexpr std::array<std::string_view, 4> kLabels = {"Top-left", "Top-right",
                                                              "Bottom-left", "Bottom-right"};
  std::string text;
  for (size_t i = 0; i < corners.size(); ++i) {
    if (i) text += ' ';
    text += std::string(kLabels[i]) + ": " + corners[i].value_or("outside data") + ".";
  }
  return {AnnouncementKind::kCorners, std::move(text)};
}

inline Announcement RenderOutOfBounds() {
  return {AnnouncementKind::kOutOfBounds, std::string(kOutOfBoundsText)};
}

inline Announcement RenderZoom(bool inward, const std::string& layer_name, bool at_limit) {
  if (at_limit) {
    return {AnnouncementKind::kZoom, std::string("Cannot zoom ") + (inward ? "in" : "out") +
                                         " further. Showing " + layer_name + "-level view."};
  }
  return {AnnouncementKind::kZoom, std::string("Zoomed ") + (inward ? "in" : "out") + " to " +
                                       layer_name + "-level view."};
}

inline Announcement RenderTitle(const std::string& title) {
  return {AnnouncementKind::kTitle,
          detail::Sentence(title) + " Press m to explore the map with the keyboard."};
}

}  // namespace mapnarrate
