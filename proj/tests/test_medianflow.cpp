#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "scenes.hpp"
#include "uavtrack/medianflow.hpp"

using namespace uavtrack;

namespace {

// Smooth, richly textured intensity field.
double texture(double x, double y) {
  return 128.0 + 45.0 * std::sin(0.31 * x + 0.7) * std::cos(0.23 * y) +
         30.0 * std::sin(0.17 * x + 0.41 * y) + 20.0 * std::cos(0.53 * x - 0.29 * y + 1.1);
}

Frame render(int w, int h, const std::function<double(double, double)>& fn) {
  Frame f(0, w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(fn(x, y)), 0L, 255L));
  return f;
}

std::vector<Point2> grid_points(double x0, double y0, int n, double step) {
  std::vector<Point2> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pts.push_back({x0 + i * step, y0 + j * step});
  return pts;
}

}  // namespace

TEST_CASE("LK: zero flow") {
  const Frame f = render(120, 100, texture);
  const auto pts = grid_points(30, 30, 6, 8);
  const auto out = lk_track_points(f, f, pts, {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(out[i].ok);
    CHECK(std::abs(out[i].pos.x - pts[i].x) < 0.1);
    CHECK(std::abs(out[i].pos.y - pts[i].y) < 0.1);
  }
}

TEST_CASE("LK: global translation by (4, 0)") {
  const Frame a = render(120, 100, texture);
  const Frame b = render(120, 100, [](double x, double y) { return texture(x - 4, y); });
  const auto pts = grid_points(30, 30, 6, 8);
  const auto out = lk_track_points(a, b, pts, {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(out[i].ok);
    CHECK(out[i].pos.x - pts[i].x == doctest::Approx(4.0).epsilon(0.5 / 4.0));
    CHECK(std::abs(out[i].pos.y - pts[i].y) <= 0.5);
  }
}

TEST_CASE("LK: uniform region and window leaving the image fail") {
  const Frame flat = scenes::uniform(80, 80, 90);
  const std::vector<Point2> pts{{40, 40}, {20, 60}};
  for (const auto& r : lk_track_points(flat, flat, pts, {})) CHECK_FALSE(r.ok);

  const Frame f = render(80, 80, texture);
  const std::vector<Point2> edge{{2, 40}, {40, 78.5}};
  for (const auto& r : lk_track_points(f, f, edge, {})) CHECK_FALSE(r.ok);
  CHECK_THROWS_AS(lk_track_points(f, render(81, 80, texture), pts, {}), std::invalid_argument);
}

TEST_CASE("MedianFlow: static frames") {
  const Frame f = render(160, 120, texture);
  const BoundingBox box{50, 40, 40, 30};
  const auto step = medianflow_step(f, box, f, {});
  REQUIRE_FALSE(step.outcome.lost());
  CHECK(std::abs(step.dx) < 1e-3);
  CHECK(std::abs(step.dy) < 1e-3);
  CHECK(step.scale == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(step.median_fb_error < 0.1);
  CHECK(step.survivors >= 4);
}

TEST_CASE("MedianFlow: 1.1x scaling about the box center") {
  const double cx = 80, cy = 60, s = 1.1;
  const Frame a = render(160, 120, texture);
  const Frame b = render(160, 120, [&](double x, double y) { return texture(cx + (x - cx) / s, cy + (y - cy) / s); });
  const auto box = BoundingBox::from_center(cx, cy, 40, 40);
  const auto step = medianflow_step(a, box, b, {});
  REQUIRE_FALSE(step.outcome.lost());
  CHECK(step.scale == doctest::Approx(1.1).epsilon(0.05 / 1.1));
  CHECK(step.outcome.box->w == doctest::Approx(44.0).epsilon(0.05));
  CHECK(step.outcome.box->cx() == doctest::Approx(cx).epsilon(0.01));
}

TEST_CASE("MedianFlow: textureless frames are lost") {
  const Frame flat = scenes::uniform(160, 120, 100);
  const auto step = medianflow_step(flat, {50, 40, 40, 30}, flat, {});
  CHECK(step.outcome.lost());
  CHECK(step.survivors == 0);
}

TEST_CASE("MedianFlow tracker: init, lost keeps state") {
  const Frame f = render(160, 120, texture);
  MedianFlowTracker t;
  const BoundingBox box{50, 40, 40, 30};
  t.init(f, box);
  CHECK(t.box() == box);
  const auto fp = t.model_fingerprint();
  CHECK(t.update(scenes::uniform(160, 120, 7)).lost());
  CHECK(t.box() == box);
  CHECK(t.model_fingerprint() == fp);
  const auto out = t.update(f);
  REQUIRE_FALSE(out.lost());
  CHECK(std::abs(out.box->cx() - box.cx()) < 0.5);
}
