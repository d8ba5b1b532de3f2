#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

enum class ScenarioKind { kSpriteToBorder, kCollector };

std::optional<ScenarioKind> parse_scenario(std::string_view name);

struct Rgb {
  std::uint8_t r, g, b;
};

inline constexpr std::array<Rgb, 4> kDefaultPalette{{
    {230, 60, 50}, {60, 200, 80}, {70, 110, 240}, {240, 220, 60}}};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kSpriteToBorder;
  std::size_t t = 16;
  std::size_t h = 64;
  std::size_t w = 64;
  std::array<Rgb, 4> palette = kDefaultPalette;
  std::uint64_t seed = 0;
};

/// Sprite side length for a scenario: ceil(h / 8).
std::size_t sprite_side(const ScenarioSpec& spec);

/// Per-video record of the sprite_to_border construction.
struct SpriteTrace {
  int dy = 0, dx = 0;            // direction, each in {-1, 0, 1}, not both 0
  std::size_t color = 0;         // palette index
  std::vector<std::size_t> top;  // top-left row per frame
  std::vector<std::size_t> left; // top-left column per frame
};

/// A square sprite leaves the frame center and moves with constant velocity in
/// one of 8 directions, reaching the border on the last frame.
VideoSet gen_sprite_to_border(const ScenarioSpec& spec, std::size_t n,
                              std::vector<SpriteTrace>* traces = nullptr);

struct Point {
  double y = 0.0, x = 0.0;
};

/// Per-video record of the collector construction.
struct CollectorTrace {
  Point agent_start;
  std::vector<Point> dots;                 // placement order
  std::vector<std::size_t> collected;      // dot indices in collection order
  std::vector<std::size_t> dots_per_frame; // remaining dots in each frame
};

inline constexpr std::size_t kCollectorDots = 8;

/// An agent walks at constant speed toward the nearest remaining dot; dots
/// vanish on contact. The video stops after t frames whether or not all dots
/// are collected.
VideoSet gen_collector(const ScenarioSpec& spec, std::size_t n,
                       std::vector<CollectorTrace>* traces = nullptr);

VideoSet generate(const ScenarioSpec& spec, std::size_t n);

}  // namespace vidmetrics
