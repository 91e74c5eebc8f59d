#include <algorithm>
#include <cmath>
#include <random>

#include "uavtrack/kernels.hpp"
#include "uavtrack/seed.hpp"

namespace uavtrack::kernels {
namespace {

void paint(std::vector<double>& canvas, int width, int height, const Patch& tex,
           const Sprite& sprite) {
  if (sprite.offsets.empty()) return;
  int x0 = width, y0 = height, x1 = -1, y1 = -1;
  for (auto [ox, oy] : sprite.offsets) {
    x0 = std::min(x0, ox);
    y0 = std::min(y0, oy);
    x1 = std::max(x1, ox + tex.width - 1);
    y1 = std::max(y1, oy + tex.height - 1);
  }
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, width - 1);
  y1 = std::min(y1, height - 1);
  const double inv = 1.0 / static_cast<double>(sprite.offsets.size());
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double& px = canvas[static_cast<std::size_t>(y) * width + x];
      double acc = 0.0;
      for (auto [ox, oy] : sprite.offsets) {
        const int tx = x - ox;
        const int ty = y - oy;
        const bool inside = tx >= 0 && ty >= 0 && tx < tex.width && ty < tex.height;
        acc += inside ? tex.at(tx, ty) : px;
      }
      px = acc * inv;
    }
  }
}

}  // namespace

Frame render_frame(const Scene& scene, int index) {
  std::vector<double> canvas(scene.background.begin(), scene.background.end());
  for (const Sprite& s : scene.frames[static_cast<std::size_t>(index)]) {
    paint(canvas, scene.width, scene.height, scene.textures[static_cast<std::size_t>(s.texture)], s);
  }
  std::mt19937_64 rng(derive_seed(scene.seed, static_cast<std::uint64_t>(index)));
  std::normal_distribution<double> noise(0.0, scene.noise_sigma > 0.0 ? scene.noise_sigma : 1.0);
  Frame out(index, scene.width, scene.height);
  for (std::size_t i = 0; i < canvas.size(); ++i) {
    double v = canvas[i];
    if (scene.noise_sigma > 0.0) v += noise(rng);
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  }
  return out;
}

std::vector<Frame> render_frames(const Scene& scene) {
  const int n = static_cast<int>(scene.frames.size());
  std::vector<Frame> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = render_frame(scene, i);
  return out;
}

std::vector<Frame> render_frames_serial(const Scene& scene) {
  std::vector<Frame> out;
  out.reserve(scene.frames.size());
  for (int i = 0; i < static_cast<int>(scene.frames.size()); ++i) out.push_back(render_frame(scene, i));
  return out;
}

}  // namespace uavtrack::kernels
