#include "uavtrack/media.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "uavtrack/format.hpp"
#include "uavtrack/kernels.hpp"
#include "uavtrack/seed.hpp"

namespace fs = std::filesystem;

namespace uavtrack {

Patch to_patch(const Frame& frame, double scale) {
  Patch p(frame.width, frame.height);
  for (std::size_t i = 0; i < frame.pixels.size(); ++i) p.values[i] = frame.pixels[i] * scale;
  return p;
}

// ---------------------------------------------------------------- PGM / PNG

namespace {

int read_header_int(std::istream& in, const fs::path& path) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = -1;
  if (!(in >> v)) throw MediaError("malformed PGM header: " + path.string());
  return v;
}

}  // namespace

Frame read_pgm(const fs::path& path, int index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MediaError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw MediaError("not a binary (P5) PGM: " + path.string());
  }
  const int w = read_header_int(in, path);
  const int h = read_header_int(in, path);
  const int maxval = read_header_int(in, path);
  if (w < 1 || h < 1) throw MediaError("bad PGM dimensions: " + path.string());
  if (maxval != 255) throw MediaError("only 8-bit PGM (maxval 255) is supported: " + path.string());
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (in.gcount() != static_cast<std::streamsize>(px.size())) {
    throw MediaError("truncated PGM data: " + path.string());
  }
  return Frame(index, w, h, std::move(px));
}

void write_pgm(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MediaError("cannot write " + path.string());
  out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw MediaError("write failed: " + path.string());
}

Frame read_png(const fs::path& path, int index) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw MediaError("cannot read PNG " + path.string() + ": " + image.message);
  }
  // Decode as 8-bit RGB and reduce with integer BT.601 weights so the
  // rounding rule is ours rather than libpng's.
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    png_image_free(&image);
    throw MediaError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = bt601_luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return Frame(index, w, h, std::move(px));
}

std::string frame_filename(int index, std::string_view ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06d", index);
  return std::string(buf) + std::string(ext);
}

Sequence load_sequence(const fs::path& directory) {
  if (!fs::is_directory(directory)) throw MediaError("not a directory: " + directory.string());
  static const std::regex kName(R"(^(\d{6})\.(pgm|png)$)");
  std::map<int, fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, kName)) continue;
    const int idx = std::stoi(m[1].str());
    if (!files.emplace(idx, entry.path()).second) {
      throw MediaError("frame " + m[1].str() + " present in more than one format");
    }
  }
  if (files.empty()) throw MediaError("no NNNNNN.pgm/.png frames in " + directory.string());

  Sequence seq;
  seq.name = directory.filename().string();
  if (seq.name.empty()) seq.name = directory.parent_path().filename().string();
  int expected = 0;
  for (const auto& [idx, path] : files) {
    if (idx != expected) {
      throw MediaError("missing frame " + frame_filename(expected, "") + " in " +
                       directory.string());
    }
    Frame f = path.extension() == ".png" ? read_png(path, idx) : read_pgm(path, idx);
    if (!seq.frames.empty() &&
        (f.width != seq.frames.front().width || f.height != seq.frames.front().height)) {
      throw MediaError("frame " + path.filename().string() + " is " + std::to_string(f.width) +
                       "x" + std::to_string(f.height) + ", expected " +
                       std::to_string(seq.frames.front().width) + "x" +
                       std::to_string(seq.frames.front().height));
    }
    seq.frames.push_back(std::move(f));
    ++expected;
  }
  return seq;
}

// ------------------------------------------------------------- annotations

GroundTruthTrack load_annotations(const fs::path& csv, int frame_count) {
  std::ifstream in(csv);
  if (!in) throw MediaError("cannot open " + csv.string());
  GroundTruthTrack track(static_cast<std::size_t>(std::max(frame_count, 0)));
  std::vector<bool> seen(track.size(), false);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line_no == 1 && line.rfind("frame", 0) == 0) continue;
    const std::string where = csv.string() + ":" + std::to_string(line_no);

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) throw MediaError(where + ": expected 5 fields");
    const auto idx = parse_int(fields[0]);
    if (!idx || *idx < 0) throw MediaError(where + ": bad frame index");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      const auto d = parse_double(fields[static_cast<std::size_t>(k) + 1]);
      if (!d) throw MediaError(where + ": bad number");
      v[k] = *d;
    }
    if (*idx >= frame_count) {
      throw MediaError(where + ": frame " + std::to_string(*idx) + " out of range (frame_count " +
                       std::to_string(frame_count) + ")");
    }
    const auto i = static_cast<std::size_t>(*idx);
    if (seen[i]) throw MediaError(where + ": duplicate frame " + std::to_string(*idx));
    seen[i] = true;
    if (v[2] == -1.0 && v[3] == -1.0) continue;
    if (v[2] <= 0.0 || v[3] <= 0.0) throw MediaError(where + ": invalid box size");
    track[i] = BoundingBox{v[0], v[1], v[2], v[3]};
  }
  return track;
}

void write_annotations(const fs::path& csv, const GroundTruthTrack& track) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw MediaError("cannot write " + csv.string());
  out << "frame,x,y,width,height\n";
  for (std::size_t i = 0; i < track.size(); ++i) {
    out << i << ',';
    if (track[i]) {
      const auto& b = *track[i];
      out << format_number(b.x) << ',' << format_number(b.y) << ',' << format_number(b.w) << ','
          << format_number(b.h) << '\n';
    } else {
      out << "-1,-1,-1,-1\n";
    }
  }
  if (!out) throw MediaError("write failed: " + csv.string());
}

// --------------------------------------------------------------- synthetic

std::string_view to_string(SynthPreset p) {
  switch (p) {
    case SynthPreset::Calm: return "calm";
    case SynthPreset::Agile: return "agile";
    case SynthPreset::MovingBackground: return "moving-background";
  }
  return "?";
}

std::optional<SynthPreset> parse_preset(std::string_view s) {
  if (s == "calm") return SynthPreset::Calm;
  if (s == "agile") return SynthPreset::Agile;
  if (s == "moving-background" || s == "moving_background" || s == "movingbg") {
    return SynthPreset::MovingBackground;
  }
  return std::nullopt;
}

void SynthConfig::validate() const {
  if (frame_count < 2) throw std::invalid_argument("synth: frame_count must be >= 2");
  if (target_size < 4) throw std::invalid_argument("synth: target_size must be >= 4");
  // A target_size/2 margin on each side of the target.
  if (width < 2 * target_size + 1 || height < 2 * target_size + 1) {
    throw std::invalid_argument("synth: target with margin does not fit in the frame");
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("synth: noise_sigma must be >= 0");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Patch make_texture(int w, int h, int cell, double lo, double hi, double jitter,
                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-jitter, jitter);
  Patch t(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool on = ((x / cell) + (y / cell)) % 2 == 0;
      t.at(x, y) = std::clamp((on ? hi : lo) + u(rng), 0.0, 255.0);
    }
  }
  return t;
}

std::vector<std::uint8_t> make_background(int w, int h, std::mt19937_64& rng) {
  constexpr int kCell = 32;
  const int gw = w / kCell + 2;
  const int gh = h / kCell + 2;
  std::uniform_real_distribution<double> coarse(70.0, 150.0);
  std::uniform_real_distribution<double> fine(-8.0, 8.0);
  std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
  for (double& g : grid) g = coarse(rng);
  std::vector<std::uint8_t> bg(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = static_cast<double>(x) / kCell;
      const double gy = static_cast<double>(y) / kCell;
      const int ix = static_cast<int>(gx);
      const int iy = static_cast<int>(gy);
      const double fx = gx - ix, fy = gy - iy;
      const auto at = [&](int a, int b) { return grid[static_cast<std::size_t>(b) * gw + a]; };
      const double v = (1 - fy) * ((1 - fx) * at(ix, iy) + fx * at(ix + 1, iy)) +
                       fy * ((1 - fx) * at(ix, iy + 1) + fx * at(ix + 1, iy + 1));
      bg[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint8_t>(std::clamp(std::floor(v + fine(rng) + 0.5), 0.0, 255.0));
    }
  }
  return bg;
}

/// Smooth sinusoidal path along one axis, centered in [lo, hi].
struct Axis {
  double center = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  double at(double t) const { return center + amplitude * std::sin(omega * t + phase); }
  double velocity(double t) const { return amplitude * omega * std::cos(omega * t + phase); }

  static Axis make(double lo, double hi, double peak_speed, double phase, double min_period) {
    Axis a;
    a.center = 0.5 * (lo + hi);
    a.amplitude = std::max(0.0, 0.5 * (hi - lo));
    a.phase = phase;
    if (a.amplitude > 0.0) {
      const double period = std::max(min_period, kTwoPi * a.amplitude / peak_speed);
      a.omega = kTwoPi / period;
    }
    return a;
  }
};

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

SyntheticSequence render_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(derive_seed(cfg.seed, "synth-scene"));
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  kernels::Scene scene;
  scene.width = cfg.width;
  scene.height = cfg.height;
  scene.noise_sigma = cfg.noise_sigma;
  scene.seed = derive_seed(cfg.seed, "synth-noise");
  scene.background = make_background(cfg.width, cfg.height, rng);

  const int ts = cfg.target_size;
  const int cell = std::max(2, ts / 5);
  scene.textures.push_back(make_texture(ts, ts, cell, 30.0, 225.0, 25.0, rng));

  // Center ranges keep a target_size/2 margin around the box.
  const double lo_x = ts, hi_x = cfg.width - ts;
  double lo_y = ts, hi_y = cfg.height - ts;
  const bool moving_bg = cfg.preset == SynthPreset::MovingBackground;
  if (moving_bg) hi_y = std::max(lo_y, 0.5 * cfg.height);

  Axis ax, ay;
  const double px = phase(rng), py = phase(rng);
  if (cfg.preset == SynthPreset::Agile) {
    ax = Axis::make(lo_x + 0.1 * (hi_x - lo_x), hi_x - 0.1 * (hi_x - lo_x), 10.0, px, 8.0);
    ay = Axis::make(lo_y + 0.05 * (hi_y - lo_y), hi_y - 0.05 * (hi_y - lo_y), 6.0, py, 8.0);
  } else {
    // Per-axis speed below 1 px/frame keeps rounded steps within 2 px.
    ax = Axis::make(lo_x + 0.2 * (hi_x - lo_x), hi_x - 0.2 * (hi_x - lo_x), 0.95, px, 8.0);
    ay = Axis::make(lo_y + 0.2 * (hi_y - lo_y), hi_y - 0.2 * (hi_y - lo_y), 0.6, py, 8.0);
  }

  SyntheticSequence out;
  out.truth.resize(static_cast<std::size_t>(cfg.frame_count));
  scene.frames.resize(static_cast<std::size_t>(cfg.frame_count));

  // Distractors travel horizontally through lanes strictly below the target's
  // vertical range, so their boxes never intersect the target box.
  struct Distractor {
    int texture, w, h, y;
    double x0, speed;
  };
  std::vector<Distractor> distractors;
  if (moving_bg) {
    const int band_top = static_cast<int>(std::ceil(hi_y + 0.5 * ts)) + 2;
    const int band_h = cfg.height - band_top;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    constexpr int kCount = 3;
    for (int k = 0; k < kCount; ++k) {
      Distractor d;
      d.w = std::max(4, round_half_up(ts * (1.5 + u01(rng))));
      d.h = std::max(4, std::min(band_h, round_half_up(ts * (0.8 + 0.4 * u01(rng)))));
      d.y = band_top + static_cast<int>(u01(rng) * std::max(0, band_h - d.h));
      d.x0 = u01(rng) * (cfg.width + d.w);
      d.speed = (2.0 + 3.0 * u01(rng)) * (k % 2 == 0 ? 1.0 : -1.0);
      d.texture = static_cast<int>(scene.textures.size());
      scene.textures.push_back(
          make_texture(d.w, d.h, std::max(2, cell + k + 1), 40.0 + 10 * k, 210.0 - 10 * k, 25.0, rng));
      distractors.push_back(d);
    }
    out.distractors.resize(static_cast<std::size_t>(cfg.frame_count));
  }

  for (int t = 0; t < cfg.frame_count; ++t) {
    auto& sprites = scene.frames[static_cast<std::size_t>(t)];
    for (const auto& d : distractors) {
      const double span = cfg.width + d.w;
      double x = std::fmod(d.x0 + d.speed * t, span);
      if (x < 0) x += span;
      const int ix = round_half_up(x) - d.w;
      sprites.push_back({d.texture, {{ix, d.y}}});
      out.distractors[static_cast<std::size_t>(t)].push_back(
          BoundingBox{static_cast<double>(ix), static_cast<double>(d.y), static_cast<double>(d.w),
                      static_cast<double>(d.h)});
    }

    const double cx = ax.at(t), cy = ay.at(t);
    const int tx = round_half_up(cx - 0.5 * ts);
    const int ty = round_half_up(cy - 0.5 * ts);
    kernels::Sprite target{0, {}};
    const double vx = ax.velocity(t), vy = ay.velocity(t);
    const double speed = std::hypot(vx, vy);
    if (cfg.blur && cfg.preset == SynthPreset::Agile && speed >= 1.0) {
      // Box kernel of length `speed` along the velocity.
      const int taps = std::max(1, round_half_up(speed));
      for (int k = 0; k < taps; ++k) {
        const double s = taps == 1 ? 0.0 : (static_cast<double>(k) / (taps - 1) - 0.5);
        target.offsets.emplace_back(round_half_up(cx + s * vx - 0.5 * ts),
                                    round_half_up(cy + s * vy - 0.5 * ts));
      }
    } else {
      target.offsets.emplace_back(tx, ty);
    }
    sprites.push_back(std::move(target));
    out.truth[static_cast<std::size_t>(t)] =
        BoundingBox{static_cast<double>(tx), static_cast<double>(ty), static_cast<double>(ts),
                    static_cast<double>(ts)};
  }

  out.sequence.name = std::string(to_string(cfg.preset));
  out.sequence.frames = kernels::render_frames(scene);
  return out;
}

SyntheticSequence generate_synthetic(const SynthConfig& config, const fs::path& out_dir) {
  SyntheticSequence s = render_synthetic(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw MediaError("cannot create output directory " + out_dir.string());
  }
  for (const Frame& f : s.sequence.frames) write_pgm(out_dir / frame_filename(f.index), f);
  write_annotations(out_dir / "truth.csv", s.truth);
  s.sequence.name = out_dir.filename().string();
  if (s.sequence.name.empty()) s.sequence.name = out_dir.parent_path().filename().string();
  return s;
}

// ---------------------------------------------------------------- sampling

namespace {

double sample_frame(const Frame& f, double x, double y) {
  const double fx0 = std::floor(x), fy0 = std::floor(y);
  const double ax = x - fx0, ay = y - fy0;
  // Clamp in floating point first so far-away boxes cannot overflow int.
  const auto cl = [](double v, int hi) {
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(hi)));
  };
  const int x0 = cl(fx0, f.width - 1), x1 = cl(fx0 + 1, f.width - 1);
  const int y0 = cl(fy0, f.height - 1), y1 = cl(fy0 + 1, f.height - 1);
  const double top = (1 - ax) * f.at(x0, y0) + ax * f.at(x1, y0);
  const double bot = (1 - ax) * f.at(x0, y1) + ax * f.at(x1, y1);
  return (1 - ay) * top + ay * bot;
}

}  // namespace

double sample_bilinear(const Patch& img, double x, double y) {
  const double fx0 = std::floor(x), fy0 = std::floor(y);
  const double ax = x - fx0, ay = y - fy0;
  const auto cl = [](double v, int hi) {
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(hi)));
  };
  const int x0 = cl(fx0, img.width - 1), x1 = cl(fx0 + 1, img.width - 1);
  const int y0 = cl(fy0, img.height - 1), y1 = cl(fy0 + 1, img.height - 1);
  const double top = (1 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
  const double bot = (1 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
  return (1 - ay) * top + ay * bot;
}

Patch extract_patch(const Frame& frame, const BoundingBox& box, int out_w, int out_h) {
  if (!box.valid()) throw std::invalid_argument("extract_patch: box must have positive area");
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("extract_patch: bad output size");
  Patch p(out_w, out_h);
  const double sx = box.w / out_w, sy = box.h / out_h;
  for (int j = 0; j < out_h; ++j) {
    const double y = box.y + (j + 0.5) * sy - 0.5;
    for (int i = 0; i < out_w; ++i) p.at(i, j) = sample_frame(frame, box.x + (i + 0.5) * sx - 0.5, y);
  }
  return p;
}

Patch extract_patch_affine(const Frame& frame, const BoundingBox& box, int out_w, int out_h,
                           double angle, double scale) {
  if (!box.valid() || !(scale > 0.0)) {
    throw std::invalid_argument("extract_patch_affine: box must have positive area");
  }
  Patch p(out_w, out_h);
  const double c = std::cos(angle), s = std::sin(angle);
  const double cx = box.cx(), cy = box.cy();
  for (int j = 0; j < out_h; ++j) {
    const double v = ((j + 0.5) / out_h - 0.5) * box.h * scale;
    for (int i = 0; i < out_w; ++i) {
      const double u = ((i + 0.5) / out_w - 0.5) * box.w * scale;
      p.at(i, j) = sample_frame(frame, cx + c * u - s * v - 0.5, cy + s * u + c * v - 0.5);
    }
  }
  return p;
}

}  // namespace uavtrack
