#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavtrack/config.hpp"
#include "uavtrack/geometry.hpp"
#include "uavtrack/image.hpp"
#include "uavtrack/orchestrator.hpp"
#include "uavtrack/tracker.hpp"

namespace uavtrack {

enum class DetectorKind { Oracle, Ncc };

struct Video {
  std::string label;
  Sequence sequence;
  GroundTruthTrack truth;
};

/// Settings shared by every cell of a run or sweep.
struct CellSettings {
  ToolConfig config;
  DetectorKind detector = DetectorKind::Oracle;
  ClockMode clock = ClockMode::Simulated;
  double iou_threshold = kDefaultIouThreshold;
  /// Global seed; component seeds are derived from it by keyed hashing.
  std::uint64_t seed = 7;
};

struct CellResult {
  std::string video;
  TrackerKind tracker = TrackerKind::Mosse;
  int f_lim = 0;
  MetricsReport metrics;
  TimingSummary timing;
  RunTrace trace;
};

/// Builds the configured detector for `video`. The oracle seed depends only
/// on the global seed and the video label, so every f_lim sees the same
/// detector output on shared frames.
std::unique_ptr<Detector> make_detector(const Video& video, const CellSettings& settings);

CellResult run_cell(const Video& video, TrackerKind tracker, int f_lim, const CellSettings& settings);

struct SweepSpec {
  std::vector<int> f_lims{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<TrackerKind> trackers{kAllTrackers[0], kAllTrackers[1], kAllTrackers[2]};

  void validate() const;
};

struct PooledRow {
  TrackerKind tracker = TrackerKind::Mosse;
  int f_lim = 0;
  MetricsReport metrics;       // micro-averaged over videos
  double macro_f_score = 0.0;  // mean of per-video F-Scores
  double avg_ms = 0.0;         // total time / total frames
};

/// Runs every (video, tracker, f_lim) cell; `jobs` workers (forced to 1
/// under the wall clock). Cell order in the result is deterministic.
std::vector<CellResult> run_sweep(const std::vector<Video>& videos, const SweepSpec& spec,
                                  const CellSettings& settings, int jobs);

std::vector<PooledRow> pool_cells(const std::vector<CellResult>& cells, const SweepSpec& spec);

/// `video,tracker,f_lim,tp,fp,fn,excluded,precision,recall,f_score,init_ms_median,update_ms_median,avg_ms`
std::string cells_csv(const std::vector<CellResult>& cells);
/// `tracker,f_lim,tp,fp,fn,excluded,precision,recall,f_score,macro_f_score,avg_ms`
std::string pooled_csv(const std::vector<PooledRow>& rows);

/// Writes cells.csv, pooled.csv and per-tracker fscore_<T>.csv / avg_ms_<T>.csv
/// tables (rows f_lim, one column per video plus `all`).
void write_sweep_outputs(const std::filesystem::path& out_dir, const std::vector<Video>& videos,
                         const SweepSpec& spec, const std::vector<CellResult>& cells);

}  // namespace uavtrack
