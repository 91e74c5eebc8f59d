#include "uavtrack/lk.hpp"

#include <cmath>
#include <stdexcept>

#include "uavtrack/kernels.hpp"
#include "uavtrack/media.hpp"

namespace uavtrack {
namespace {

constexpr double kMinEigen = 1e-4;
constexpr double kConvergence = 0.01;

// Samples the (2 half + 1)^2 window centered at (x, y). Integer offsets
// share one set of bilinear weights, so interior windows index directly.
void sample_window(const Patch& img, double x, double y, int half, double* out) {
  const int side = 2 * half + 1;
  if (std::abs(x) < 1e8 && std::abs(y) < 1e8) {
    const double fx = std::floor(x), fy = std::floor(y);
    const int x0 = static_cast<int>(fx) - half, y0 = static_cast<int>(fy) - half;
    if (x0 >= 0 && y0 >= 0 && x0 + side < img.width && y0 + side < img.height) {
      const double ax = x - fx, ay = y - fy;
      for (int v = 0; v < side; ++v) {
        const double* r0 = &img.values[static_cast<std::size_t>(y0 + v) * img.width + x0];
        const double* r1 = r0 + img.width;
        for (int u = 0; u < side; ++u) {
          const double top = (1 - ax) * r0[u] + ax * r0[u + 1];
          const double bot = (1 - ax) * r1[u] + ax * r1[u + 1];
          *out++ = (1 - ay) * top + ay * bot;
        }
      }
      return;
    }
  }
  for (int v = -half; v <= half; ++v)
    for (int u = -half; u <= half; ++u) *out++ = sample_bilinear(img, x + u, y + v);
}

bool window_inside(const Patch& img, double x, double y, int half) {
  return x - half >= 0.0 && y - half >= 0.0 && x + half <= img.width - 1.0 &&
         y + half <= img.height - 1.0;
}

TrackedPoint track_one(const Pyramid& prev, const Pyramid& next, Point2 pt, const MedianFlowParams& p) {
  const int half = p.lk_window / 2;
  const int levels = static_cast<int>(prev.levels.size());
  const std::size_t n = static_cast<std::size_t>(p.lk_window) * p.lk_window;
  std::vector<double> iv(n), ix(n), iy(n), jv(n);

  double gx = 0.0, gy = 0.0;  // flow guess at the current level
  for (int level = levels - 1; level >= 0; --level) {
    const double s = std::ldexp(1.0, -level);
    const double px = pt.x * s, py = pt.y * s;
    const Patch& I = prev.levels[static_cast<std::size_t>(level)];
    const Patch& J = next.levels[static_cast<std::size_t>(level)];

    sample_window(I, px, py, half, iv.data());
    sample_window(prev.gx[static_cast<std::size_t>(level)], px, py, half, ix.data());
    sample_window(prev.gy[static_cast<std::size_t>(level)], px, py, half, iy.data());
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      a += ix[k] * ix[k];
      b += ix[k] * iy[k];
      c += iy[k] * iy[k];
    }
    const double min_eig = 0.5 * ((a + c) - std::sqrt((a - c) * (a - c) + 4.0 * b * b));
    const double det = a * c - b * b;
    // Too little texture: fatal at full resolution, otherwise the guess is
    // passed down unrefined.
    const bool singular = min_eig / static_cast<double>(n) < kMinEigen || det <= 0.0;
    if (singular && level == 0) return {pt, false};

    double dx = gx, dy = gy;
    for (int it = 0; !singular && it < p.lk_iterations; ++it) {
      sample_window(J, px + dx, py + dy, half, jv.data());
      double bx = 0.0, by = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double e = iv[k] - jv[k];
        bx += e * ix[k];
        by += e * iy[k];
      }
      const double sx = (c * bx - b * by) / det;
      const double sy = (a * by - b * bx) / det;
      dx += sx;
      dy += sy;
      if (sx * sx + sy * sy < kConvergence * kConvergence) break;
    }
    if (level > 0) {
      gx = 2.0 * dx;
      gy = 2.0 * dy;
    } else {
      gx = dx;
      gy = dy;
    }
  }

  const Point2 out{pt.x + gx, pt.y + gy};
  const Patch& base = next.levels.front();
  const bool ok = std::isfinite(out.x) && std::isfinite(out.y) &&
                  window_inside(prev.levels.front(), pt.x, pt.y, half) &&
                  window_inside(base, out.x, out.y, half);
  return {out, ok};
}

}  // namespace

Pyramid build_pyramid(const Frame& frame, int levels) {
  if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be >= 1");
  Pyramid pyr;
  pyr.levels.push_back(to_patch(frame, 1.0 / 255.0));
  for (int l = 1; l < levels; ++l) pyr.levels.push_back(kernels::pyr_down(pyr.levels.back()));
  pyr.gx.resize(pyr.levels.size());
  pyr.gy.resize(pyr.levels.size());
  for (std::size_t l = 0; l < pyr.levels.size(); ++l) kernels::gradients(pyr.levels[l], pyr.gx[l], pyr.gy[l]);
  return pyr;
}

std::vector<TrackedPoint> lk_track_points(const Pyramid& prev, const Pyramid& next,
                                          std::span<const Point2> points,
                                          const MedianFlowParams& params) {
  if (prev.levels.size() != next.levels.size() || prev.levels.empty() ||
      prev.levels.front().width != next.levels.front().width ||
      prev.levels.front().height != next.levels.front().height) {
    throw std::invalid_argument("lk_track_points: pyramids differ in shape");
  }
  std::vector<TrackedPoint> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = track_one(prev, next, points[i], params);
  return out;
}

std::vector<TrackedPoint> lk_track_points(const Frame& prev, const Frame& next,
                                          std::span<const Point2> points,
                                          const MedianFlowParams& params) {
  if (prev.width != next.width || prev.height != next.height) {
    throw std::invalid_argument("lk_track_points: frames differ in size");
  }
  return lk_track_points(build_pyramid(prev, params.pyramid_levels),
                         build_pyramid(next, params.pyramid_levels), points, params);
}

}  // namespace uavtrack
