#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavtrack/kernels.hpp"

namespace uavtrack::kernels {
namespace {

struct Integral {
  int w = 0;
  std::vector<double> sum;
  std::vector<double> sq;

  double box(const std::vector<double>& t, int x, int y, int bw, int bh) const {
    const auto at = [&](int xx, int yy) { return t[static_cast<std::size_t>(yy) * (w + 1) + xx]; };
    return at(x + bw, y + bh) - at(x, y + bh) - at(x + bw, y) + at(x, y);
  }
};

Integral integrate(const Patch& img) {
  Integral in;
  in.w = img.width;
  const std::size_t n = static_cast<std::size_t>(img.width + 1) * (img.height + 1);
  in.sum.assign(n, 0.0);
  in.sq.assign(n, 0.0);
  for (int y = 0; y < img.height; ++y) {
    double rs = 0.0, rq = 0.0;
    for (int x = 0; x < img.width; ++x) {
      const double v = img.at(x, y);
      rs += v;
      rq += v * v;
      const std::size_t o = static_cast<std::size_t>(y + 1) * (img.width + 1) + x + 1;
      const std::size_t up = static_cast<std::size_t>(y) * (img.width + 1) + x + 1;
      in.sum[o] = in.sum[up] + rs;
      in.sq[o] = in.sq[up] + rq;
    }
  }
  return in;
}

struct Prepared {
  Patch zero_mean;
  double norm = 0.0;
  int out_w = 0;
  int out_h = 0;
};

Prepared prepare(const Patch& image, const Patch& templ, int stride) {
  if (stride < 1) throw std::invalid_argument("ncc_map: stride must be >= 1");
  if (templ.width > image.width || templ.height > image.height || templ.size() == 0) {
    throw std::invalid_argument("ncc_map: template larger than image");
  }
  Prepared p;
  p.zero_mean = templ;
  double mean = 0.0;
  for (double v : templ.values) mean += v;
  mean /= static_cast<double>(templ.size());
  double ss = 0.0;
  for (double& v : p.zero_mean.values) {
    v -= mean;
    ss += v * v;
  }
  p.norm = std::sqrt(ss);
  p.out_w = (image.width - templ.width) / stride + 1;
  p.out_h = (image.height - templ.height) / stride + 1;
  return p;
}

inline double score_at(const Patch& image, const Prepared& p, const Integral& in, int x, int y) {
  const int tw = p.zero_mean.width;
  const int th = p.zero_mean.height;
  const double n = static_cast<double>(tw) * th;
  const double s = in.box(in.sum, x, y, tw, th);
  const double q = in.box(in.sq, x, y, tw, th);
  const double var = q - s * s / n;
  // Relative guard against round-off in the integral-image variance.
  if (p.norm <= 0.0 || var <= 1e-9 * std::max(1.0, q)) return 0.0;
  double cross = 0.0;
  for (int ty = 0; ty < th; ++ty) {
    const double* row = &image.values[static_cast<std::size_t>(y + ty) * image.width + x];
    const double* trow = &p.zero_mean.values[static_cast<std::size_t>(ty) * tw];
    for (int tx = 0; tx < tw; ++tx) cross += trow[tx] * row[tx];
  }
  const double r = cross / (p.norm * std::sqrt(var));
  return std::fmax(-1.0, std::fmin(1.0, r));
}

}  // namespace

Patch ncc_map(const Patch& image, const Patch& templ, int stride) {
  const Prepared p = prepare(image, templ, stride);
  const Integral in = integrate(image);
  Patch out(p.out_w, p.out_h);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p.out_h; ++j) {
    for (int i = 0; i < p.out_w; ++i) {
      out.at(i, j) = score_at(image, p, in, i * stride, j * stride);
    }
  }
  return out;
}

Patch ncc_map_serial(const Patch& image, const Patch& templ, int stride) {
  const Prepared p = prepare(image, templ, stride);
  const Integral in = integrate(image);
  Patch out(p.out_w, p.out_h);
  for (int j = 0; j < p.out_h; ++j) {
    for (int i = 0; i < p.out_w; ++i) {
      out.at(i, j) = score_at(image, p, in, i * stride, j * stride);
    }
  }
  return out;
}

}  // namespace uavtrack::kernels
