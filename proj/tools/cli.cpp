#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "uavtrack/config.hpp"
#include "uavtrack/format.hpp"
#include "uavtrack/media.hpp"
#include "uavtrack/serialize.hpp"
#include "uavtrack/sweep.hpp"

namespace fs = std::filesystem;

namespace uavtrack::cli {
namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;

/// Validation failure that maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 7;
  double iou = kDefaultIouThreshold;
  int jobs = 1;
  std::string config_path;
  bool wall_clock = false;
};

struct DetectorFlags {
  std::string kind = "oracle";
  std::optional<double> miss, multi, jitter, latency;
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& d) {
  cmd->add_option("--detector", d.kind, "Detector: oracle | ncc")->check(CLI::IsMember({"oracle", "ncc"}));
  cmd->add_option("--miss-prob", d.miss, "Oracle miss probability");
  cmd->add_option("--multi-prob", d.multi, "Oracle multiple-box probability");
  cmd->add_option("--jitter", d.jitter, "Oracle box jitter sigma (px)");
  cmd->add_option("--detector-latency", d.latency, "Simulated detector latency (ms)");
}

CellSettings make_settings(const Common& c, const DetectorFlags& d) {
  CellSettings s;
  try {
    if (!c.config_path.empty()) s.config = load_config(c.config_path);
    if (d.miss) s.config.oracle.miss_prob = *d.miss;
    if (d.multi) s.config.oracle.multi_prob = *d.multi;
    if (d.jitter) s.config.oracle.jitter_sigma = *d.jitter;
    if (d.latency) {
      s.config.oracle.latency_ms = *d.latency;
      s.config.ncc.latency_ms = *d.latency;
    }
    s.config.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (!(c.iou > 0.0 && c.iou < 1.0)) throw UsageError("--iou-thresh must be in (0, 1)");
  s.detector = d.kind == "ncc" ? DetectorKind::Ncc : DetectorKind::Oracle;
  s.clock = c.wall_clock ? ClockMode::WallClock : ClockMode::Simulated;
  s.iou_threshold = c.iou;
  s.seed = c.seed;
  return s;
}

Video load_video(const fs::path& dir, const std::optional<fs::path>& truth_path) {
  const fs::path truth = truth_path.value_or(dir / "truth.csv");
  if (!fs::is_directory(dir)) throw UsageError("sequence directory not found: " + dir.string());
  if (!fs::is_regular_file(truth)) throw UsageError("truth file not found: " + truth.string());
  Video v;
  try {
    v.sequence = load_sequence(dir);
    v.truth = load_annotations(truth, v.sequence.frame_count());
  } catch (const MediaError& e) {
    throw UsageError(e.what());
  }
  v.label = v.sequence.name;
  return v;
}

std::string summary_line(const MetricsReport& m, const TimingSummary& t) {
  return "F=" + format_number(m.f_score) + " P=" + format_number(m.precision) +
         " R=" + format_number(m.recall) + " avg_ms=" + format_number(t.average_ms);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  std::string preset;
  int frames = 300;
  std::string size = "640x360";
  int target = 40;
  double noise = 4.0;
  bool no_blur = false;
  std::string out;
};

int do_synth(const SynthArgs& a, const Common& c, std::ostream& out) {
  const auto preset = parse_preset(a.preset);
  if (!preset) throw UsageError("unknown preset '" + a.preset + "' (calm | agile | moving-background)");
  SynthConfig cfg;
  cfg.preset = *preset;
  cfg.frame_count = a.frames;
  if (std::sscanf(a.size.c_str(), "%dx%d", &cfg.width, &cfg.height) != 2) {
    throw UsageError("--size must look like 640x360");
  }
  cfg.target_size = a.target;
  cfg.noise_sigma = a.noise;
  cfg.blur = !a.no_blur;
  cfg.seed = c.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path dir(a.out);
  const auto s = generate_synthetic(cfg, dir);
  out << "frames: " << (dir / frame_filename(0)).string() << " .. "
      << (dir / frame_filename(cfg.frame_count - 1)).string() << '\n'
      << "truth: " << (dir / "truth.csv").string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------- run

struct RunArgs {
  std::string sequence;
  std::string truth;
  std::string tracker = "MOSSE";
  int f_lim = 10;
  std::string out;
};

int do_run(const RunArgs& a, const Common& c, const DetectorFlags& d, std::ostream& out) {
  const auto kind = parse_tracker_kind(a.tracker);
  if (!kind) throw UsageError("unknown tracker '" + a.tracker + "' (MOSSE | KCF | MEDIANFLOW)");
  if (a.f_lim < 1) throw UsageError("--f-lim must be >= 1");
  const CellSettings settings = make_settings(c, d);
  const Video video = load_video(a.sequence, a.truth.empty() ? std::nullopt : std::optional<fs::path>(a.truth));
  const CellResult cell = run_cell(video, *kind, a.f_lim, settings);

  if (!a.out.empty()) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    nlohmann::json report{{"video", cell.video},
                          {"tracker", std::string(to_string(cell.tracker))},
                          {"f_lim", cell.f_lim},
                          {"detector", d.kind},
                          {"clock", c.wall_clock ? "wall" : "simulated"},
                          {"seed", c.seed},
                          {"metrics", to_json(cell.metrics)},
                          {"timing", to_json(cell.timing)},
                          {"detector_calls", cell.trace.detector_calls},
                          {"inits", cell.trace.inits},
                          {"updates", cell.trace.updates},
                          {"warning", cell.trace.warning ? nlohmann::json(*cell.trace.warning) : nlohmann::json(nullptr)},
                          {"config", settings.config.entries()}};
    write_text(dir / "report.json", report.dump(2) + "\n");
    write_predictions_csv(dir / "predictions.csv", cell.trace);
    write_trace_jsonl(dir / "trace.jsonl", cell.trace);
  }
  if (cell.trace.warning) out << "warning: " << *cell.trace.warning << '\n';
  out << summary_line(cell.metrics, cell.timing) << '\n';
  return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<std::string> sequences;
  std::vector<std::string> truths;
  std::vector<std::string> trackers;
  std::vector<int> f_lims;
  std::string out;
};

int do_sweep(const SweepArgs& a, const Common& c, const DetectorFlags& d, std::ostream& out) {
  if (!a.truths.empty() && a.truths.size() != a.sequences.size()) {
    throw UsageError("--truth must be given once per --sequence (or not at all)");
  }
  SweepSpec spec;
  if (!a.f_lims.empty()) spec.f_lims = a.f_lims;
  if (!a.trackers.empty()) {
    spec.trackers.clear();
    for (const auto& t : a.trackers) {
      const auto k = parse_tracker_kind(t);
      if (!k) throw UsageError("unknown tracker '" + t + "'");
      spec.trackers.push_back(*k);
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CellSettings settings = make_settings(c, d);

  std::vector<Video> videos;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < a.sequences.size(); ++i) {
    Video v = load_video(a.sequences[i], a.truths.empty() ? std::nullopt : std::optional<fs::path>(a.truths[i]));
    if (!labels.insert(v.label).second) throw UsageError("duplicate video label '" + v.label + "'");
    videos.push_back(std::move(v));
  }
  const auto cells = run_sweep(videos, spec, settings, c.jobs);
  write_sweep_outputs(a.out, videos, spec, cells);
  out << "cells: " << (fs::path(a.out) / "cells.csv").string() << " (" << cells.size() << " rows)\n"
      << "pooled: " << (fs::path(a.out) / "pooled.csv").string() << '\n';
  return kOk;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::vector<std::string> predictions;
  std::vector<std::string> truths;
  std::string out;
};

int do_report(const ReportArgs& a, const Common& c, std::ostream& out) {
  if (a.predictions.size() != a.truths.size()) {
    throw UsageError("--predictions and --truth must be given the same number of times");
  }
  if (!(c.iou > 0.0 && c.iou < 1.0)) throw UsageError("--iou-thresh must be in (0, 1)");
  std::vector<MetricsReport> reports;
  nlohmann::json per_file = nlohmann::json::array();
  for (std::size_t i = 0; i < a.predictions.size(); ++i) {
    Predictions p;
    GroundTruthTrack truth;
    try {
      p = read_predictions_csv(a.predictions[i]);
      truth = load_annotations(a.truths[i], static_cast<int>(p.boxes.size()));
    } catch (const PredictionsError& e) {
      throw UsageError(std::string(e.what()));
    } catch (const MediaError& e) {
      throw UsageError(e.what());
    }
    const MetricsReport m = evaluate(p.boxes, truth, c.iou);
    reports.push_back(m);
    per_file.push_back({{"predictions", a.predictions[i]}, {"metrics", to_json(m)}});
    out << a.predictions[i] << ": F=" << format_number(m.f_score) << " P=" << format_number(m.precision)
        << " R=" << format_number(m.recall) << '\n';
  }
  const MetricsReport pooled = pool(reports);
  out << "pooled: F=" << format_number(pooled.f_score) << " P=" << format_number(pooled.precision)
      << " R=" << format_number(pooled.recall) << '\n';
  if (!a.out.empty()) {
    nlohmann::json j{{"files", per_file}, {"pooled", to_json(pooled)}, {"macro_f_score", macro_f_score(reports)}};
    write_text(a.out, j.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Track-by-detection benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Global seed (all component seeds derive from it)");
  app.add_option("--iou-thresh", common.iou, "True-positive Jaccard threshold (strict >)");
  app.add_option("--jobs", common.jobs, "Concurrent sweep cells")->check(CLI::PositiveNumber);
  app.add_option("--config", common.config_path, "Flat key=value parameter file");
  app.add_flag("--wall-clock", common.wall_clock, "Measure real time instead of the simulated clock");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sequence with ground truth");
  synth_cmd->add_option("--preset", synth.preset, "calm | agile | moving-background")->required();
  synth_cmd->add_option("--frames", synth.frames, "Frame count");
  synth_cmd->add_option("--size", synth.size, "WIDTHxHEIGHT");
  synth_cmd->add_option("--target-size", synth.target, "Target side (px)");
  synth_cmd->add_option("--noise", synth.noise, "Gaussian noise sigma");
  synth_cmd->add_flag("--no-blur", synth.no_blur, "Disable motion blur (agile preset)");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  RunArgs runa;
  DetectorFlags run_det;
  auto* run_cmd = app.add_subcommand("run", "Run one (video, tracker, f_lim) cell");
  run_cmd->add_option("--sequence", runa.sequence, "Frame directory")->required();
  run_cmd->add_option("--truth", runa.truth, "Ground-truth CSV (default <sequence>/truth.csv)");
  run_cmd->add_option("--tracker", runa.tracker, "MOSSE | KCF | MEDIANFLOW");
  run_cmd->add_option("--f-lim", runa.f_lim, "Frames between detector re-initializations");
  run_cmd->add_option("--out", runa.out, "Output directory for report.json, predictions.csv, trace.jsonl");
  add_detector_flags(run_cmd, run_det);

  SweepArgs sweep;
  DetectorFlags sweep_det;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every (video, tracker, f_lim) cell");
  sweep_cmd->add_option("--sequence", sweep.sequences, "Frame directory (repeatable)")->required();
  sweep_cmd->add_option("--truth", sweep.truths, "Ground-truth CSV per sequence");
  sweep_cmd->add_option("--trackers", sweep.trackers, "Tracker subset")->delimiter(',');
  sweep_cmd->add_option("--f-lims", sweep.f_lims, "f_lim values (default 10,20,...,100)")->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  add_detector_flags(sweep_cmd, sweep_det);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Recompute metrics from stored predictions");
  report_cmd->add_option("--predictions", report.predictions, "Predictions CSV (repeatable)")->required();
  report_cmd->add_option("--truth", report.truths, "Ground-truth CSV, one per predictions file")->required();
  report_cmd->add_option("--out", report.out, "Write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*synth_cmd) return do_synth(synth, common, out);
    if (*run_cmd) return do_run(runa, common, run_det, out);
    if (*sweep_cmd) return do_sweep(sweep, common, sweep_det, out);
    if (*report_cmd) return do_report(report, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace uavtrack::cli
