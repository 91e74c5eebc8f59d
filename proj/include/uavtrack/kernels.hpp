#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version and a serial
// reference with identical per-element arithmetic, so the two must agree
// bit for bit; tests/test_kernels.cpp holds them to that.

#include <cstdint>
#include <vector>

#include "uavtrack/image.hpp"

namespace uavtrack::kernels {

/// Zero-mean, unit-norm cross-correlation of `templ` against every window
/// of `image` whose top-left corner lies on the stride grid. Output cell
/// (i, j) is the window at (i * stride, j * stride). Windows (or templates)
/// with zero variance score 0.
Patch ncc_map(const Patch& image, const Patch& templ, int stride);
Patch ncc_map_serial(const Patch& image, const Patch& templ, int stride);

/// 5-tap binomial smoothing [1 4 6 4 1]/16 (clamped borders) then factor-2
/// decimation. Output is ceil(w/2) x ceil(h/2).
Patch pyr_down(const Patch& img);
Patch pyr_down_serial(const Patch& img);

/// Central-difference gradients with clamped borders.
void gradients(const Patch& img, Patch& gx, Patch& gy);
void gradients_serial(const Patch& img, Patch& gx, Patch& gy);

/// Placement of one textured rectangle in one frame. `offsets` lists the
/// integer positions averaged to form a motion-blurred copy; a sharp copy has
/// exactly one offset.
struct Sprite {
  int texture = 0;  // index into Scene::textures
  std::vector<std::pair<int, int>> offsets;
};

struct Scene {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> background;  // width * height
  std::vector<Patch> textures;           // luminance values in [0, 255]
  std::vector<std::vector<Sprite>> frames;  // sprites per frame, painted in order
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Renders one frame; noise is drawn from a generator keyed on (seed, index).
Frame render_frame(const Scene& scene, int index);
std::vector<Frame> render_frames(const Scene& scene);
std::vector<Frame> render_frames_serial(const Scene& scene);

}  // namespace uavtrack::kernels
