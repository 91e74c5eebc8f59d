#include <algorithm>

#include "uavtrack/kernels.hpp"

namespace uavtrack::kernels {
namespace {

constexpr double kTaps[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

inline double clamped(const Patch& img, int x, int y) {
  x = std::clamp(x, 0, img.width - 1);
  y = std::clamp(y, 0, img.height - 1);
  return img.at(x, y);
}

// Separable smoothing evaluated only at the retained (even) samples.
inline double down_sample_at(const Patch& img, int ox, int oy) {
  const int cx = 2 * ox;
  const int cy = 2 * oy;
  double acc = 0.0;
  if (cx >= 2 && cy >= 2 && cx + 2 < img.width && cy + 2 < img.height) {
    for (int ky = -2; ky <= 2; ++ky) {
      const double* r = &img.values[static_cast<std::size_t>(cy + ky) * img.width + cx - 2];
      double row = 0.0;
      for (int kx = 0; kx < 5; ++kx) row += kTaps[kx] * r[kx];
      acc += kTaps[ky + 2] * row;
    }
    return acc;
  }
  for (int ky = -2; ky <= 2; ++ky) {
    double row = 0.0;
    for (int kx = -2; kx <= 2; ++kx) row += kTaps[kx + 2] * clamped(img, cx + kx, cy + ky);
    acc += kTaps[ky + 2] * row;
  }
  return acc;
}

inline void gradient_row(const Patch& img, int y, double* gx, double* gy) {
  const int w = img.width;
  const double* r = &img.values[static_cast<std::size_t>(y) * w];
  const double* up = &img.values[static_cast<std::size_t>(std::max(y - 1, 0)) * w];
  const double* dn = &img.values[static_cast<std::size_t>(std::min(y + 1, img.height - 1)) * w];
  for (int x = 0; x < w; ++x) {
    gx[x] = 0.5 * (r[std::min(x + 1, w - 1)] - r[std::max(x - 1, 0)]);
    gy[x] = 0.5 * (dn[x] - up[x]);
  }
}

}  // namespace

Patch pyr_down(const Patch& img) {
  Patch out((img.width + 1) / 2, (img.height + 1) / 2);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) out.at(x, y) = down_sample_at(img, x, y);
  return out;
}

Patch pyr_down_serial(const Patch& img) {
  Patch out((img.width + 1) / 2, (img.height + 1) / 2);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) out.at(x, y) = down_sample_at(img, x, y);
  return out;
}

void gradients(const Patch& img, Patch& gx, Patch& gy) {
  gx = Patch(img.width, img.height);
  gy = Patch(img.width, img.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height; ++y) gradient_row(img, y, &gx.at(0, y), &gy.at(0, y));
}

void gradients_serial(const Patch& img, Patch& gx, Patch& gy) {
  gx = Patch(img.width, img.height);
  gy = Patch(img.width, img.height);
  for (int y = 0; y < img.height; ++y) gradient_row(img, y, &gx.at(0, y), &gy.at(0, y));
}

}  // namespace uavtrack::kernels
