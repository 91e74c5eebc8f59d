#include "uavtrack/sweep.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "uavtrack/format.hpp"
#include "uavtrack/seed.hpp"

namespace uavtrack {

std::unique_ptr<Detector> make_detector(const Video& video, const CellSettings& settings) {
  if (settings.detector == DetectorKind::Oracle) {
    OracleConfig oc = settings.config.oracle;
    oc.seed = derive_seed(settings.seed, "oracle/" + video.label);
    return std::make_unique<OracleDetector>(oc, video.truth);
  }
  // The NCC template comes from the first frame with a ground-truth box.
  for (std::size_t i = 0; i < video.truth.size() && i < video.sequence.frames.size(); ++i) {
    if (!video.truth[i]) continue;
    NccConfig nc;
    nc.templ = capture_template(video.sequence.frames[i], *video.truth[i]);
    nc.scales = settings.config.ncc.scales;
    nc.score_threshold = settings.config.ncc.score_threshold;
    nc.nms_jaccard = settings.config.ncc.nms_jaccard;
    nc.stride = settings.config.ncc.stride;
    nc.latency_ms = settings.config.ncc.latency_ms;
    return std::make_unique<NccDetector>(std::move(nc));
  }
  throw std::invalid_argument("ncc detector: no ground-truth box to capture a template from in " +
                              video.label);
}

CellResult run_cell(const Video& video, TrackerKind tracker, int f_lim, const CellSettings& settings) {
  if (video.truth.size() != video.sequence.frames.size()) {
    throw std::invalid_argument(video.label + ": truth has " + std::to_string(video.truth.size()) +
                                " entries for " + std::to_string(video.sequence.frames.size()) + " frames");
  }
  const auto detector = make_detector(video, settings);
  const std::uint64_t tseed =
      derive_seed(settings.seed, "tracker/" + video.label + "/" + std::string(to_string(tracker)));
  const TrackerParams params = settings.config.trackers;
  TrackerFactory factory = [tracker, params, tseed] { return make_tracker(tracker, params, tseed); };

  RunConfig rc;
  rc.f_lim = f_lim;
  rc.iou_threshold = settings.iou_threshold;
  rc.clock = settings.clock;
  rc.simulated = settings.config.simulated_cost(tracker);
  rc.seed = tseed;

  CellResult cell;
  cell.video = video.label;
  cell.tracker = tracker;
  cell.f_lim = f_lim;
  cell.trace = run(video.sequence, *detector, factory, rc);
  cell.metrics = evaluate(cell.trace, video.truth, settings.iou_threshold);
  cell.timing = timing_summary(cell.trace);
  return cell;
}

void SweepSpec::validate() const {
  if (f_lims.empty()) throw std::invalid_argument("sweep: f_lim list is empty");
  for (int f : f_lims)
    if (f < 1) throw std::invalid_argument("sweep: f_lim values must be >= 1");
  if (trackers.empty()) throw std::invalid_argument("sweep: tracker list is empty");
}

std::vector<CellResult> run_sweep(const std::vector<Video>& videos, const SweepSpec& spec,
                                  const CellSettings& settings, int jobs) {
  spec.validate();
  if (videos.empty()) throw std::invalid_argument("sweep: no videos");
  struct Key {
    std::size_t video;
    TrackerKind tracker;
    int f_lim;
  };
  std::vector<Key> keys;
  for (std::size_t v = 0; v < videos.size(); ++v)
    for (auto t : spec.trackers)
      for (int f : spec.f_lims) keys.push_back({v, t, f});

  std::vector<CellResult> cells(keys.size());
  const int workers = settings.clock == ClockMode::WallClock ? 1 : std::max(1, jobs);
  const int n = static_cast<int>(keys.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (int i = 0; i < n; ++i) {
    try {
      const Key& k = keys[static_cast<std::size_t>(i)];
      cells[static_cast<std::size_t>(i)] = run_cell(videos[k.video], k.tracker, k.f_lim, settings);
    } catch (...) {
#pragma omp critical(sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

std::vector<PooledRow> pool_cells(const std::vector<CellResult>& cells, const SweepSpec& spec) {
  std::vector<PooledRow> rows;
  for (auto t : spec.trackers) {
    for (int f : spec.f_lims) {
      std::vector<MetricsReport> reports;
      double total_ms = 0.0;
      int frames = 0;
      for (const auto& c : cells) {
        if (c.tracker != t || c.f_lim != f) continue;
        reports.push_back(c.metrics);
        total_ms += c.timing.total_ms;
        frames += c.timing.frames;
      }
      PooledRow row;
      row.tracker = t;
      row.f_lim = f;
      row.metrics = pool(reports);
      row.macro_f_score = macro_f_score(reports);
      row.avg_ms = frames == 0 ? 0.0 : total_ms / frames;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string counts_fields(const MetricsReport& m) {
  return std::to_string(m.counts.tp) + ',' + std::to_string(m.counts.fp) + ',' +
         std::to_string(m.counts.fn) + ',' + std::to_string(m.counts.excluded) + ',' +
         format_number(m.precision) + ',' + format_number(m.recall) + ',' + format_number(m.f_score);
}

std::string median_field(const std::optional<Distribution>& d) {
  return d ? format_number(d->median) : std::string();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string cells_csv(const std::vector<CellResult>& cells) {
  std::ostringstream os;
  os << "video,tracker,f_lim,tp,fp,fn,excluded,precision,recall,f_score,init_ms_median,"
        "update_ms_median,avg_ms\n";
  for (const auto& c : cells) {
    os << c.video << ',' << to_string(c.tracker) << ',' << c.f_lim << ',' << counts_fields(c.metrics)
       << ',' << median_field(c.timing.init) << ',' << median_field(c.timing.update) << ','
       << format_number(c.timing.average_ms) << '\n';
  }
  return os.str();
}

std::string pooled_csv(const std::vector<PooledRow>& rows) {
  std::ostringstream os;
  os << "tracker,f_lim,tp,fp,fn,excluded,precision,recall,f_score,macro_f_score,avg_ms\n";
  for (const auto& r : rows) {
    os << to_string(r.tracker) << ',' << r.f_lim << ',' << counts_fields(r.metrics) << ','
       << format_number(r.macro_f_score) << ',' << format_number(r.avg_ms) << '\n';
  }
  return os.str();
}

void write_sweep_outputs(const std::filesystem::path& out_dir, const std::vector<Video>& videos,
                         const SweepSpec& spec, const std::vector<CellResult>& cells) {
  std::filesystem::create_directories(out_dir);
  const auto pooled = pool_cells(cells, spec);
  write_file(out_dir / "cells.csv", cells_csv(cells));
  write_file(out_dir / "pooled.csv", pooled_csv(pooled));

  for (auto t : spec.trackers) {
    std::ostringstream fs, ts;
    fs << "f_lim";
    ts << "f_lim";
    for (const auto& v : videos) {
      fs << ',' << v.label;
      ts << ',' << v.label;
    }
    fs << ",all\n";
    ts << ",all\n";
    for (int f : spec.f_lims) {
      fs << f;
      ts << f;
      for (const auto& v : videos) {
        for (const auto& c : cells) {
          if (c.video == v.label && c.tracker == t && c.f_lim == f) {
            fs << ',' << format_number(c.metrics.f_score);
            ts << ',' << format_number(c.timing.average_ms);
          }
        }
      }
      for (const auto& r : pooled) {
        if (r.tracker == t && r.f_lim == f) {
          fs << ',' << format_number(r.metrics.f_score);
          ts << ',' << format_number(r.avg_ms);
        }
      }
      fs << '\n';
      ts << '\n';
    }
    const std::string name(to_string(t));
    write_file(out_dir / ("fscore_" + name + ".csv"), fs.str());
    write_file(out_dir / ("avg_ms_" + name + ".csv"), ts.str());
  }
}

}  // namespace uavtrack
