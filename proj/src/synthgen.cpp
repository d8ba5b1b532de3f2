#include "vidmetrics/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vidmetrics/error.hpp"
#include "vidmetrics/parallel.hpp"
#include "vidmetrics/rng.hpp"

namespace vidmetrics {
namespace {

constexpr std::array<std::array<int, 2>, 8> kDirections{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

void validate(const ScenarioSpec& spec, std::size_t n) {
  if (spec.h < 16 || spec.w < 16) throw Error(ErrorCode::kInvalidArgument, "scenario needs h, w >= 16");
  if (spec.t < 4) throw Error(ErrorCode::kInvalidArgument, "scenario needs t >= 4");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "scenario needs n >= 1");
}

// Low-contrast 4-pixel checkerboard.
void draw_background(std::span<std::uint8_t> frame, std::size_t h, std::size_t w) {
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::uint8_t v = ((y / 4 + x / 4) % 2 == 0) ? 40 : 56;
      auto* px = &frame[(y * w + x) * 3];
      px[0] = v;
      px[1] = v;
      px[2] = static_cast<std::uint8_t>(v + 8);
    }
  }
}

// Fills the clipped square [top, top+side) x [left, left+side).
void draw_square(std::span<std::uint8_t> frame, std::size_t h, std::size_t w, long top, long left,
                 std::size_t side, Rgb color) {
  const long y0 = std::max(0L, top), x0 = std::max(0L, left);
  const long y1 = std::min(static_cast<long>(h), top + static_cast<long>(side));
  const long x1 = std::min(static_cast<long>(w), left + static_cast<long>(side));
  for (long y = y0; y < y1; ++y) {
    for (long x = x0; x < x1; ++x) {
      auto* px = &frame[(static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)) * 3];
      px[0] = color.r;
      px[1] = color.g;
      px[2] = color.b;
    }
  }
}

// round(k * dist / steps), half up, in integers.
std::size_t lerp_steps(std::size_t k, std::size_t dist, std::size_t steps) {
  return (2 * k * dist + steps) / (2 * steps);
}

double distance(Point a, Point b) { return std::hypot(a.y - b.y, a.x - b.x); }

}  // namespace

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
  if (name == "sprite" || name == "sprite_to_border") return ScenarioKind::kSpriteToBorder;
  if (name == "collector") return ScenarioKind::kCollector;
  return std::nullopt;
}

std::size_t sprite_side(const ScenarioSpec& spec) { return (spec.h + 7) / 8; }

VideoSet gen_sprite_to_border(const ScenarioSpec& spec, std::size_t n,
                              std::vector<SpriteTrace>* traces) {
  validate(spec, n);
  const std::size_t side = sprite_side(spec);
  VideoSet out(VideoShape{n, spec.t, spec.h, spec.w, 3});
  std::vector<SpriteTrace> local(n);
  const std::size_t steps = spec.t - 1;
  const std::size_t top0 = spec.h / 2 - side / 2;
  const std::size_t left0 = spec.w / 2 - side / 2;
  parallel_for(n, [&](std::size_t i) {
    SplitMix64 rng(derive_seed(spec.seed, i));
    SpriteTrace& tr = local[i];
    const auto dir = kDirections[rng.below(kDirections.size())];
    tr.dy = dir[0];
    tr.dx = dir[1];
    tr.color = static_cast<std::size_t>(rng.below(spec.palette.size()));
    // Distance to the border along each moving axis.
    const std::size_t dist_y = tr.dy < 0 ? top0 : spec.h - side - top0;
    const std::size_t dist_x = tr.dx < 0 ? left0 : spec.w - side - left0;
    for (std::size_t k = 0; k < spec.t; ++k) {
      const std::size_t oy = tr.dy == 0 ? 0 : lerp_steps(k, dist_y, steps);
      const std::size_t ox = tr.dx == 0 ? 0 : lerp_steps(k, dist_x, steps);
      const std::size_t top = tr.dy < 0 ? top0 - oy : top0 + oy;
      const std::size_t left = tr.dx < 0 ? left0 - ox : left0 + ox;
      tr.top.push_back(top);
      tr.left.push_back(left);
      auto frame = out.frame(i, k);
      draw_background(frame, spec.h, spec.w);
      draw_square(frame, spec.h, spec.w, static_cast<long>(top), static_cast<long>(left), side,
                  spec.palette[tr.color]);
    }
  });
  if (traces) *traces = std::move(local);
  return out;
}

VideoSet gen_collector(const ScenarioSpec& spec, std::size_t n,
                       std::vector<CollectorTrace>* traces) {
  validate(spec, n);
  const std::size_t side = sprite_side(spec);
  const std::size_t dot_side = std::max<std::size_t>(2, side / 2);
  const double speed = std::max(1.0, static_cast<double>(side) / 2.0);
  const double separation = 2.0 * static_cast<double>(side);
  const double contact = static_cast<double>(side + dot_side) / 2.0;
  const double margin = static_cast<double>(side) / 2.0;
  VideoSet out(VideoShape{n, spec.t, spec.h, spec.w, 3});
  std::vector<CollectorTrace> local(n);
  parallel_for(n, [&](std::size_t i) {
    SplitMix64 rng(derive_seed(spec.seed, i));
    CollectorTrace& tr = local[i];
    const auto random_point = [&] {
      return Point{margin + rng.uniform() * (static_cast<double>(spec.h) - 2 * margin),
                   margin + rng.uniform() * (static_cast<double>(spec.w) - 2 * margin)};
    };
    tr.agent_start = random_point();
    // Rejection sampling; the separation shrinks if a crowded frame keeps
    // rejecting so placement always terminates.
    double min_sep = separation;
    std::size_t attempts = 0;
    while (tr.dots.size() < kCollectorDots) {
      const Point p = random_point();
      bool ok = distance(p, tr.agent_start) >= min_sep;
      for (const Point& d : tr.dots) ok = ok && distance(p, d) >= min_sep;
      if (ok) {
        tr.dots.push_back(p);
      } else if (++attempts % 1000 == 0) {
        min_sep *= 0.9;
      }
    }
    const std::size_t agent_color = static_cast<std::size_t>(rng.below(3));
    const Rgb dot_color = spec.palette[3];

    Point agent = tr.agent_start;
    std::vector<bool> alive(kCollectorDots, true);
    const auto render = [&](std::size_t k) {
      auto frame = out.frame(i, k);
      draw_background(frame, spec.h, spec.w);
      std::size_t remaining = 0;
      for (std::size_t d = 0; d < kCollectorDots; ++d) {
        if (!alive[d]) continue;
        ++remaining;
        draw_square(frame, spec.h, spec.w,
                    std::lround(tr.dots[d].y - static_cast<double>(dot_side) / 2.0),
                    std::lround(tr.dots[d].x - static_cast<double>(dot_side) / 2.0), dot_side,
                    dot_color);
      }
      draw_square(frame, spec.h, spec.w, std::lround(agent.y - margin), std::lround(agent.x - margin),
                  side, spec.palette[agent_color]);
      tr.dots_per_frame.push_back(remaining);
    };
    // Only the dot being walked to is picked up.
    const auto collect = [&](std::size_t d) {
      if (distance(agent, tr.dots[d]) <= contact) {
        alive[d] = false;
        tr.collected.push_back(d);
      }
    };

    render(0);
    for (std::size_t k = 1; k < spec.t; ++k) {
      std::size_t target = kCollectorDots;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < kCollectorDots; ++d) {
        if (alive[d] && distance(agent, tr.dots[d]) < best) {
          best = distance(agent, tr.dots[d]);
          target = d;
        }
      }
      if (target != kCollectorDots) {
        const Point goal = tr.dots[target];
        if (best <= speed) {
          agent = goal;
        } else {
          agent.y += speed * (goal.y - agent.y) / best;
          agent.x += speed * (goal.x - agent.x) / best;
        }
        collect(target);
      }
      render(k);
    }
  });
  if (traces) *traces = std::move(local);
  return out;
}

VideoSet generate(const ScenarioSpec& spec, std::size_t n) {
  return spec.kind == ScenarioKind::kSpriteToBorder ? gen_sprite_to_border(spec, n)
                                                    : gen_collector(spec, n);
}

}  // namespace vidmetrics
