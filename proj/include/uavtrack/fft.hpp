#pragma once

#include <complex>
#include <vector>

#include "uavtrack/image.hpp"

namespace uavtrack {

using Complex = std::complex<double>;

/// Full complex 2-D spectrum, row-major, unnormalized forward transform.
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<Complex> bins;

  Spectrum() = default;
  Spectrum(int w, int h) : width(w), height(h), bins(static_cast<std::size_t>(w) * h) {}

  Complex at(int u, int v) const { return bins[static_cast<std::size_t>(v) * width + u]; }
  Complex& at(int u, int v) { return bins[static_cast<std::size_t>(v) * width + u]; }
  std::size_t size() const { return bins.size(); }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Forward DFT of a real image.
Spectrum fft2(const Patch& p);
/// Inverse DFT (scaled by 1/N), real part only.
Patch ifft2_real(const Spectrum& s);

// Elementwise helpers.
Spectrum multiply(const Spectrum& a, const Spectrum& b);
Spectrum multiply_conj(const Spectrum& a, const Spectrum& b);  // conj(a) * b

}  // namespace uavtrack
