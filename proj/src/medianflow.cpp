#include "uavtrack/medianflow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uavtrack/media.hpp"

namespace uavtrack {
namespace {

constexpr int kMinSurvivors = 4;

double median_of(std::vector<double> v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  if (v.size() % 2 == 1) return v[m];
  const double hi = v[m];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

double neighborhood_ncc(const Patch& a, Point2 pa, const Patch& b, Point2 pb, int size) {
  const double off = 0.5 * (size - 1);
  const std::size_t n = static_cast<std::size_t>(size) * size;
  std::vector<double> va(n), vb(n);
  std::size_t k = 0;
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u, ++k) {
      va[k] = sample_bilinear(a, pa.x + u - off, pa.y + v - off);
      vb[k] = sample_bilinear(b, pb.x + u - off, pb.y + v - off);
    }
  }
  const double ma = std::accumulate(va.begin(), va.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(vb.begin(), vb.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (va[i] - ma) * (vb[i] - mb);
    saa += (va[i] - ma) * (va[i] - ma);
    sbb += (vb[i] - mb) * (vb[i] - mb);
  }
  const double d = std::sqrt(saa * sbb);
  return d > 0.0 ? sab / d : 0.0;
}

}  // namespace

MedianFlowStep medianflow_step(const Frame& prev, const BoundingBox& box, const Frame& next,
                               const MedianFlowParams& params) {
  if (prev.width != next.width || prev.height != next.height) {
    throw std::invalid_argument("medianflow_step: frames differ in size");
  }
  return medianflow_step(build_pyramid(prev, params.pyramid_levels), box,
                         build_pyramid(next, params.pyramid_levels), params);
}

MedianFlowStep medianflow_step(const Pyramid& p0, const BoundingBox& box, const Pyramid& p1,
                               const MedianFlowParams& params) {
  const int width = p1.levels.front().width, height = p1.levels.front().height;
  MedianFlowStep step;
  const int g = params.grid;
  std::vector<Point2> seeds;
  seeds.reserve(static_cast<std::size_t>(g) * g);
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < g; ++i)
      seeds.push_back({box.x + (i + 0.5) * box.w / g - 0.5, box.y + (j + 0.5) * box.h / g - 0.5});

  const auto fwd = lk_track_points(p0, p1, seeds, params);
  std::vector<Point2> moved(fwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i) moved[i] = fwd[i].pos;
  const auto bwd = lk_track_points(p1, p0, moved, params);

  std::vector<std::size_t> valid;
  std::vector<double> fb(seeds.size(), 0.0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!fwd[i].ok || !bwd[i].ok) continue;
    fb[i] = std::hypot(bwd[i].pos.x - seeds[i].x, bwd[i].pos.y - seeds[i].y);
    valid.push_back(i);
  }
  if (valid.empty()) return step;

  std::vector<double> errs;
  for (auto i : valid) errs.push_back(fb[i]);
  step.median_fb_error = median_of(errs);
  if (step.median_fb_error > params.fb_error_max) return step;

  std::vector<std::pair<double, std::size_t>> by_ncc;
  for (auto i : valid) {
    if (fb[i] <= step.median_fb_error) {
      by_ncc.emplace_back(neighborhood_ncc(p0.levels[0], seeds[i], p1.levels[0], moved[i], params.ncc_patch), i);
    }
  }
  std::stable_sort(by_ncc.begin(), by_ncc.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  by_ncc.resize((by_ncc.size() + 1) / 2);
  step.survivors = static_cast<int>(by_ncc.size());
  if (step.survivors < kMinSurvivors) return step;

  std::vector<double> dxs, dys, ratios;
  for (const auto& [score, i] : by_ncc) {
    dxs.push_back(moved[i].x - seeds[i].x);
    dys.push_back(moved[i].y - seeds[i].y);
  }
  for (std::size_t a = 0; a < by_ncc.size(); ++a) {
    for (std::size_t b = a + 1; b < by_ncc.size(); ++b) {
      const auto ia = by_ncc[a].second, ib = by_ncc[b].second;
      const double d0 = std::hypot(seeds[ia].x - seeds[ib].x, seeds[ia].y - seeds[ib].y);
      const double d1 = std::hypot(moved[ia].x - moved[ib].x, moved[ia].y - moved[ib].y);
      if (d0 > 1e-9) ratios.push_back(d1 / d0);
    }
  }
  step.dx = median_of(dxs);
  step.dy = median_of(dys);
  step.scale = ratios.empty() ? 1.0 : median_of(ratios);

  const BoundingBox out = BoundingBox::from_center(box.cx() + step.dx, box.cy() + step.dy,
                                                   box.w * step.scale, box.h * step.scale);
  const BoundingBox frame_box{0.0, 0.0, static_cast<double>(width), static_cast<double>(height)};
  if (!out.valid() || intersection_area(out, frame_box) <= 0.0) return step;
  step.outcome = TrackOutcome::estimate(out);
  return step;
}

MedianFlowTracker::MedianFlowTracker(MedianFlowParams params) : params_(params) { params_.validate(); }

void MedianFlowTracker::init(const Frame& frame, const BoundingBox& box) {
  detail::check_init_box(frame, box);
  prev_ = frame;
  prev_pyramid_ = build_pyramid(frame, params_.pyramid_levels);
  box_ = box;
  last_ = {};
}

TrackOutcome MedianFlowTracker::update(const Frame& frame) {
  detail::check_same_size(prev_.width, prev_.height, frame);
  Pyramid next = build_pyramid(frame, params_.pyramid_levels);
  last_ = medianflow_step(prev_pyramid_, box_, next, params_);
  if (last_.outcome.lost()) return last_.outcome;
  box_ = *last_.outcome.box;
  prev_ = frame;
  prev_pyramid_ = std::move(next);
  return last_.outcome;
}

std::uint64_t MedianFlowTracker::model_fingerprint() const {
  detail::Fingerprint fp;
  fp.add(prev_.pixels.data(), prev_.pixels.size()).add(&box_, 1);
  return fp.value();
}

}  // namespace uavtrack
