#include "uavtrack/tracker.hpp"

#include <cmath>
#include <string>

#include "uavtrack/kcf.hpp"
#include "uavtrack/medianflow.hpp"
#include "uavtrack/mosse.hpp"

namespace uavtrack {

std::string_view to_string(TrackerKind k) {
  switch (k) {
    case TrackerKind::Mosse: return "MOSSE";
    case TrackerKind::Kcf: return "KCF";
    case TrackerKind::MedianFlow: return "MEDIANFLOW";
  }
  return "?";
}

std::optional<TrackerKind> parse_tracker_kind(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "MOSSE") return TrackerKind::Mosse;
  if (u == "KCF") return TrackerKind::Kcf;
  if (u == "MEDIANFLOW" || u == "MEDIAN_FLOW") return TrackerKind::MedianFlow;
  return std::nullopt;
}

void MosseParams::validate() const {
  if (window < 16 || (window & (window - 1)) != 0) {
    throw std::invalid_argument("mosse.window must be a power of two >= 16");
  }
  if (!(sigma_target > 0.0)) throw std::invalid_argument("mosse.sigma_target must be > 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw std::invalid_argument("mosse.learning_rate must be in (0, 1]");
  }
  if (!(reg_eps > 0.0)) throw std::invalid_argument("mosse.reg_eps must be > 0");
  if (!(psr_threshold > 0.0)) throw std::invalid_argument("mosse.psr_threshold must be > 0");
  if (init_perturbations < 0) throw std::invalid_argument("mosse.init_perturbations must be >= 0");
}

void KcfParams::validate() const {
  if (!(padding > 1.0)) throw std::invalid_argument("kcf.padding must be > 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("kcf.lambda must be > 0");
  if (!(kernel_sigma > 0.0)) throw std::invalid_argument("kcf.kernel_sigma must be > 0");
  if (!(output_sigma_factor > 0.0)) throw std::invalid_argument("kcf.output_sigma_factor must be > 0");
  if (!(interp_factor > 0.0 && interp_factor <= 1.0)) {
    throw std::invalid_argument("kcf.interp_factor must be in (0, 1]");
  }
}

void MedianFlowParams::validate() const {
  if (grid < 5) throw std::invalid_argument("medianflow.grid must be >= 5");
  if (pyramid_levels < 1) throw std::invalid_argument("medianflow.pyramid_levels must be >= 1");
  if (lk_window < 3 || lk_window % 2 == 0) {
    throw std::invalid_argument("medianflow.lk_window must be odd and >= 3");
  }
  if (lk_iterations < 1) throw std::invalid_argument("medianflow.lk_iterations must be >= 1");
  if (!(fb_error_max > 0.0)) throw std::invalid_argument("medianflow.fb_error_max must be > 0");
  if (ncc_patch < 2) throw std::invalid_argument("medianflow.ncc_patch must be >= 2");
}

std::unique_ptr<Tracker> make_tracker(TrackerKind kind, const TrackerParams& params,
                                      std::uint64_t seed) {
  switch (kind) {
    case TrackerKind::Mosse: return std::make_unique<MosseTracker>(params.mosse, seed);
    case TrackerKind::Kcf: return std::make_unique<KcfTracker>(params.kcf);
    case TrackerKind::MedianFlow: return std::make_unique<MedianFlowTracker>(params.medianflow);
  }
  throw std::invalid_argument("unknown tracker kind");
}

namespace detail {

void check_init_box(const Frame& frame, const BoundingBox& box) {
  if (!box.valid()) throw TrackerInitError("tracker init: degenerate box");
  if (box.cx() < 0.0 || box.cy() < 0.0 || box.cx() > frame.width || box.cy() > frame.height) {
    throw TrackerInitError("tracker init: box center outside the frame");
  }
}

void check_same_size(int w, int h, const Frame& frame) {
  if (frame.width != w || frame.height != h) {
    throw std::invalid_argument("tracker update: frame is " + std::to_string(frame.width) + "x" +
                                std::to_string(frame.height) + ", tracker was initialized on " +
                                std::to_string(w) + "x" + std::to_string(h));
  }
}

}  // namespace detail
}  // namespace uavtrack
