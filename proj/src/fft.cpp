#include "uavtrack/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace uavtrack {
namespace {

// FFTW's planner is not thread-safe; execution with the new-array interface
// is. Plans are cached per (width, height, direction) and always executed on
// fftw_malloc'd buffers so alignment matches the planning buffers.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int w, int h, int sign) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(w, h, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(h, w, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

struct Buffer {
  explicit Buffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (!data) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

void run_dft(const Complex* src, Complex* dst, int w, int h, int sign) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  Buffer in(n), out(n);
  std::memcpy(in.data, src, n * sizeof(Complex));
  fftw_execute_dft(plans().get(w, h, sign), in.data, out.data);
  std::memcpy(static_cast<void*>(dst), out.data, n * sizeof(Complex));
}

}  // namespace

Spectrum fft2(const Patch& p) {
  if (p.width < 1 || p.height < 1) throw std::invalid_argument("fft2: empty input");
  Spectrum s(p.width, p.height);
  std::vector<Complex> tmp(p.values.begin(), p.values.end());
  run_dft(tmp.data(), s.bins.data(), p.width, p.height, FFTW_FORWARD);
  return s;
}

Patch ifft2_real(const Spectrum& s) {
  std::vector<Complex> tmp(s.size());
  run_dft(s.bins.data(), tmp.data(), s.width, s.height, FFTW_BACKWARD);
  Patch p(s.width, s.height);
  const double inv = 1.0 / static_cast<double>(s.size());
  for (std::size_t i = 0; i < tmp.size(); ++i) p.values[i] = tmp[i].real() * inv;
  return p;
}

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
  if (a.width != b.width || a.height != b.height) throw std::invalid_argument("spectrum size mismatch");
  Spectrum r(a.width, a.height);
  for (std::size_t i = 0; i < r.size(); ++i) r.bins[i] = a.bins[i] * b.bins[i];
  return r;
}

Spectrum multiply_conj(const Spectrum& a, const Spectrum& b) {
  if (a.width != b.width || a.height != b.height) throw std::invalid_argument("spectrum size mismatch");
  Spectrum r(a.width, a.height);
  for (std::size_t i = 0; i < r.size(); ++i) r.bins[i] = std::conj(a.bins[i]) * b.bins[i];
  return r;
}

}  // namespace uavtrack
