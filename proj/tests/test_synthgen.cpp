#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "vidmetrics/error.hpp"
#include "vidmetrics/synthgen.hpp"
#include "vidmetrics/tensor_io.hpp"

using namespace vidmetrics;

namespace {

struct Box {
  std::size_t y0 = SIZE_MAX, x0 = SIZE_MAX, y1 = 0, x1 = 0;
  bool empty() const { return y0 == SIZE_MAX; }
};

// Bounding box of pixels painted in `color`.
Box locate(const VideoSet& v, std::size_t i, std::size_t t, Rgb color) {
  Box b;
  for (std::size_t y = 0; y < v.h(); ++y)
    for (std::size_t x = 0; x < v.w(); ++x)
      if (v.at(i, t, y, x, 0) == color.r && v.at(i, t, y, x, 1) == color.g &&
          v.at(i, t, y, x, 2) == color.b) {
        b.y0 = std::min(b.y0, y);
        b.x0 = std::min(b.x0, x);
        b.y1 = std::max(b.y1, y);
        b.x1 = std::max(b.x1, x);
      }
  return b;
}

}  // namespace

TEST_CASE("sprite starts centered and reaches the border on the last frame") {
  for (std::size_t size : {16u, 33u, 64u}) {
    ScenarioSpec spec;
    spec.t = 12;
    spec.h = size;
    spec.w = size + 7;
    spec.seed = 3;
    std::vector<SpriteTrace> traces;
    const auto v = gen_sprite_to_border(spec, 24, &traces);
    const std::size_t side = sprite_side(spec);
    CHECK(side == (size + 7) / 8);
    for (std::size_t i = 0; i < v.n(); ++i) {
      const Rgb color = spec.palette[traces[i].color];
      const Box first = locate(v, i, 0, color);
      REQUIRE_FALSE(first.empty());
      CHECK(first.y1 - first.y0 + 1 == side);
      CHECK(first.x1 - first.x0 + 1 == side);
      const double cy = (first.y0 + first.y1 + 1) / 2.0, cx = (first.x0 + first.x1 + 1) / 2.0;
      CHECK(std::abs(cy - spec.h / 2.0) <= 1.0);
      CHECK(std::abs(cx - spec.w / 2.0) <= 1.0);

      const Box last = locate(v, i, spec.t - 1, color);
      const bool touches = last.y0 == 0 || last.x0 == 0 || last.y1 == spec.h - 1 || last.x1 == spec.w - 1;
      CHECK(touches);
      // Moving axes reach their own border on the last frame.
      if (traces[i].dy < 0) CHECK(last.y0 == 0);
      if (traces[i].dy > 0) CHECK(last.y1 == spec.h - 1);
      if (traces[i].dx < 0) CHECK(last.x0 == 0);
      if (traces[i].dx > 0) CHECK(last.x1 == spec.w - 1);
      CHECK(last.y0 == traces[i].top.back());
      CHECK(last.x0 == traces[i].left.back());
    }
  }
}

TEST_CASE("sprite generation is seed-deterministic and seed-sensitive") {
  ScenarioSpec spec;
  spec.seed = 10;
  std::vector<SpriteTrace> ta, tb;
  const auto a = gen_sprite_to_border(spec, 16, &ta);
  CHECK(gen_sprite_to_border(spec, 16) == a);
  spec.seed = 11;
  const auto b = gen_sprite_to_border(spec, 16, &tb);
  CHECK_FALSE(a == b);
  std::set<std::pair<int, int>> dirs;
  std::set<std::size_t> colors;
  for (const auto& t : ta) {
    dirs.insert({t.dy, t.dx});
    colors.insert(t.color);
  }
  CHECK(dirs.size() > 1);
  CHECK(colors.size() > 1);
}

TEST_CASE("collector: dots only vanish and the nearest goes first") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kCollector;
  spec.t = 40;
  spec.h = 32;
  spec.w = 32;
  spec.seed = 8;
  std::vector<CollectorTrace> traces;
  const auto v = gen_collector(spec, 30, &traces);
  CHECK(v.shape() == VideoShape{30, 40, 32, 32, 3});
  for (const auto& tr : traces) {
    REQUIRE(tr.dots.size() == kCollectorDots);
    REQUIRE(tr.dots_per_frame.size() == spec.t);
    CHECK(tr.dots_per_frame.front() == kCollectorDots);
    for (std::size_t k = 1; k < spec.t; ++k) CHECK(tr.dots_per_frame[k] <= tr.dots_per_frame[k - 1]);
    REQUIRE_FALSE(tr.collected.empty());
    std::size_t nearest = 0;
    for (std::size_t d = 1; d < kCollectorDots; ++d) {
      if (std::hypot(tr.dots[d].y - tr.agent_start.y, tr.dots[d].x - tr.agent_start.x) <
          std::hypot(tr.dots[nearest].y - tr.agent_start.y, tr.dots[nearest].x - tr.agent_start.x)) {
        nearest = d;
      }
    }
    CHECK(tr.collected.front() == nearest);
    CHECK(tr.dots_per_frame.back() == kCollectorDots - tr.collected.size());
  }
  CHECK(gen_collector(spec, 30) == v);
}

TEST_CASE("generated sets round-trip through RVID") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kCollector;
  spec.t = 6;
  spec.h = 16;
  spec.w = 20;
  const auto v = generate(spec, 3);
  CHECK(decode_video(encode_video(v)) == v);
}

TEST_CASE("scenario validation") {
  ScenarioSpec spec;
  spec.h = 15;
  CHECK_THROWS_AS(generate(spec, 1), Error);
  spec.h = 16;
  spec.t = 3;
  CHECK_THROWS_AS(generate(spec, 1), Error);
  CHECK(parse_scenario("sprite") == ScenarioKind::kSpriteToBorder);
  CHECK(parse_scenario("collector") == ScenarioKind::kCollector);
  CHECK_FALSE(parse_scenario("brawl").has_value());
}
