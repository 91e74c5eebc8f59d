#include <doctest.h>

#include <png.h>

#include <random>

#include "tempdir.hpp"
#include "uavtrack/media.hpp"

using namespace uavtrack;
using testutil::TempDir;

namespace {

Frame random_frame(int w, int h, std::uint64_t seed, int index = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  Frame f(index, w, h);
  for (auto& p : f.pixels) p = static_cast<std::uint8_t>(u(rng));
  return f;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("PGM write/read round trip") {
  TempDir dir("pgm");
  const Frame f = random_frame(37, 23, 1, 4);
  write_pgm(dir / "a.pgm", f);
  const Frame g = read_pgm(dir / "a.pgm", 4);
  CHECK(g == f);
}

TEST_CASE("read_pgm rejects malformed files") {
  TempDir dir("pgmbad");
  testutil::spit(dir / "ascii.pgm", "P2\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(read_pgm(dir / "ascii.pgm"), MediaError);
  testutil::spit(dir / "short.pgm", std::string("P5\n4 4\n255\n") + std::string(5, '\0'));
  CHECK_THROWS_AS(read_pgm(dir / "short.pgm"), MediaError);
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), MediaError);
}

TEST_CASE("load_sequence") {
  TempDir dir("seq");
  for (int i = 0; i < 3; ++i) write_pgm(dir / frame_filename(i), random_frame(64, 48, i, i));
  testutil::spit(dir / "notes.txt", "ignored");
  const Sequence s = load_sequence(dir.path());
  CHECK(s.frame_count() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.frames[i].width == 64);
    CHECK(s.frames[i].height == 48);
    CHECK(s.frames[i].index == i);
    CHECK(s.frames[i] == random_frame(64, 48, i, i));
  }
}

TEST_CASE("load_sequence: gap names the missing frame") {
  TempDir dir("gap");
  write_pgm(dir / frame_filename(0), random_frame(8, 8, 0));
  write_pgm(dir / frame_filename(2), random_frame(8, 8, 2));
  const auto msg = message_of([&] { load_sequence(dir.path()); });
  CHECK(msg.find("000001") != std::string::npos);
}

TEST_CASE("load_sequence: mismatched dimensions and empty directory") {
  TempDir dir("dims");
  write_pgm(dir / frame_filename(0), random_frame(8, 8, 0));
  write_pgm(dir / frame_filename(1), random_frame(9, 8, 1));
  CHECK_THROWS_AS(load_sequence(dir.path()), MediaError);
  TempDir empty("empty");
  CHECK_THROWS_AS(load_sequence(empty.path()), MediaError);
}

TEST_CASE("load_sequence: full HD frames keep their size") {
  TempDir dir("hd");
  Frame f(0, 1280, 720);
  write_pgm(dir / frame_filename(0), f);
  const Sequence s = load_sequence(dir.path());
  CHECK(s.width() == 1280);
  CHECK(s.height() == 720);
}

TEST_CASE("PNG input uses BT.601 luma") {
  CHECK(bt601_luma(255, 255, 255) == 255);
  CHECK(bt601_luma(0, 0, 0) == 0);
  CHECK(bt601_luma(255, 0, 0) == 76);   // 76245 + 500 -> 76
  CHECK(bt601_luma(0, 255, 0) == 150);  // 149685 + 500 -> 150
  CHECK(bt601_luma(0, 0, 255) == 29);   // 29070 + 500 -> 29

  TempDir dir("png");
  const int w = 5, h = 3;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 255);
  for (auto& v : rgb) v = static_cast<std::uint8_t>(u(rng));
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = w;
  img.height = h;
  img.format = PNG_FORMAT_RGB;
  const auto path = (dir / frame_filename(0, ".png")).string();
  REQUIRE(png_image_write_to_file(&img, path.c_str(), 0, rgb.data(), 0, nullptr) != 0);

  const Frame f = read_png(path);
  REQUIRE(f.width == w);
  REQUIRE(f.height == h);
  for (int i = 0; i < w * h; ++i) {
    CHECK(f.pixels[i] == bt601_luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]));
  }
  CHECK(load_sequence(dir.path()).frames.front() == f);
}

TEST_CASE("annotations") {
  TempDir dir("ann");
  std::string text = "frame,x,y,width,height\n";
  for (int i = 0; i < 10; ++i) text += std::to_string(i) + ",1,2,3,4\n";
  testutil::spit(dir / "a.csv", text);
  auto t = load_annotations(dir / "a.csv", 10);
  REQUIRE(t.size() == 10);
  for (const auto& b : t) CHECK(b == BoundingBox{1, 2, 3, 4});

  testutil::spit(dir / "b.csv", "0,1,2,3,4\n5,-1,-1,-1,-1\n");
  t = load_annotations(dir / "b.csv", 7);
  CHECK(t[0].has_value());
  CHECK_FALSE(t[5].has_value());
  CHECK_FALSE(t[3].has_value());  // no row

  testutil::spit(dir / "dup.csv", "3,1,2,3,4\n3,1,2,3,4\n");
  CHECK_THROWS_AS(load_annotations(dir / "dup.csv", 5), MediaError);
  testutil::spit(dir / "range.csv", "9,1,2,3,4\n");
  CHECK_THROWS_AS(load_annotations(dir / "range.csv", 5), MediaError);
  testutil::spit(dir / "neg.csv", "1,1,2,0,4\n");
  CHECK_THROWS_AS(load_annotations(dir / "neg.csv", 5), MediaError);
  testutil::spit(dir / "junk.csv", "1,a,2,3,4\n");
  CHECK_THROWS_AS(load_annotations(dir / "junk.csv", 5), MediaError);

  GroundTruthTrack track{BoundingBox{1.5, 2, 3, 4}, std::nullopt, BoundingBox{0, 0, 10, 12}};
  write_annotations(dir / "w.csv", track);
  CHECK(load_annotations(dir / "w.csv", 3) == track);
}

TEST_CASE("synthetic: determinism and disk round trip") {
  SynthConfig cfg;
  cfg.frame_count = 12;
  cfg.seed = 7;
  const auto a = render_synthetic(cfg);
  const auto b = render_synthetic(cfg);
  CHECK(a.sequence.frames == b.sequence.frames);
  CHECK(a.truth == b.truth);

  TempDir d1("syn1"), d2("syn2");
  generate_synthetic(cfg, d1.path());
  generate_synthetic(cfg, d2.path());
  for (int i = 0; i < cfg.frame_count; ++i) {
    CHECK(testutil::slurp(d1 / frame_filename(i)) == testutil::slurp(d2 / frame_filename(i)));
  }
  CHECK(testutil::slurp(d1 / "truth.csv") == testutil::slurp(d2 / "truth.csv"));

  const Sequence loaded = load_sequence(d1.path());
  CHECK(loaded.frames == a.sequence.frames);
  CHECK(load_annotations(d1 / "truth.csv", cfg.frame_count) == a.truth);

  cfg.seed = 8;
  CHECK(render_synthetic(cfg).sequence.frames != a.sequence.frames);
}

TEST_CASE("synthetic: agile motion reaches 8 px per frame") {
  SynthConfig cfg;
  cfg.preset = SynthPreset::Agile;
  const auto s = render_synthetic(cfg);
  double max_step = 0.0;
  for (std::size_t i = 1; i < s.truth.size(); ++i) {
    const auto& p = *s.truth[i - 1];
    const auto& q = *s.truth[i];
    max_step = std::max(max_step, std::hypot(q.cx() - p.cx(), q.cy() - p.cy()));
  }
  CHECK(max_step >= 8.0);
}

TEST_CASE("synthetic: distractors stay clear of the target") {
  SynthConfig cfg;
  cfg.preset = SynthPreset::MovingBackground;
  const auto s = render_synthetic(cfg);
  REQUIRE(s.distractors.size() == s.truth.size());
  bool moving = false;
  for (std::size_t i = 0; i < s.truth.size(); ++i) {
    REQUIRE_FALSE(s.distractors[i].empty());
    for (std::size_t k = 0; k < s.distractors[i].size(); ++k) {
      CHECK(jaccard(s.distractors[i][k], *s.truth[i]) <= 0.1);
      if (i > 0 && s.distractors[i][k] != s.distractors[i - 1][k]) moving = true;
    }
  }
  CHECK(moving);
}

TEST_CASE("synthetic: every frame has an in-frame target") {
  for (auto preset : {SynthPreset::Calm, SynthPreset::Agile, SynthPreset::MovingBackground}) {
    SynthConfig cfg;
    cfg.preset = preset;
    cfg.frame_count = 50;
    const auto s = render_synthetic(cfg);
    for (const auto& b : s.truth) {
      REQUIRE(b.has_value());
      CHECK(b->x >= 0);
      CHECK(b->y >= 0);
      CHECK(b->x + b->w <= cfg.width);
      CHECK(b->y + b->h <= cfg.height);
    }
  }
}

TEST_CASE("synthetic: config validation and preset names") {
  SynthConfig cfg;
  cfg.frame_count = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.width = 60;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(parse_preset("calm") == SynthPreset::Calm);
  CHECK(parse_preset("agile") == SynthPreset::Agile);
  CHECK(parse_preset("moving-background") == SynthPreset::MovingBackground);
  CHECK_FALSE(parse_preset("bogus").has_value());
  for (auto p : {SynthPreset::Calm, SynthPreset::Agile, SynthPreset::MovingBackground}) {
    CHECK(parse_preset(to_string(p)) == p);
  }
}

TEST_CASE("extract_patch: identity on pixel-aligned box") {
  const Frame f = random_frame(32, 32, 11);
  const Patch p = extract_patch(f, {8, 16, 8, 8}, 8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) CHECK(p.at(x, y) == f.at(8 + x, 16 + y));
}

TEST_CASE("extract_patch: clamp outside the frame") {
  const Frame f = random_frame(16, 12, 12);
  const Patch right = extract_patch(f, {100, 3, 5, 5}, 4, 4);
  const Patch corner = extract_patch(f, {-50, -50, 5, 5}, 4, 4);
  for (double v : corner.values) CHECK(v == f.at(0, 0));
  // Right of the frame, rows still inside: every sample is the last column.
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      const double sy = 3 + (y + 0.5) * 5.0 / 4.0 - 0.5;
      const int y0 = static_cast<int>(std::floor(sy));
      const double t = sy - y0;
      const double expected = (1 - t) * f.at(15, y0) + t * f.at(15, y0 + 1);
      CHECK(right.at(x, y) == doctest::Approx(expected));
    }
}

TEST_CASE("extract_patch: constant image") {
  Frame f(0, 16, 16);
  std::fill(f.pixels.begin(), f.pixels.end(), 77);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-30, 30), size(0.5, 40);
  std::uniform_int_distribution<int> out(1, 20);
  for (int i = 0; i < 50; ++i) {
    const Patch p = extract_patch(f, {pos(rng), pos(rng), size(rng), size(rng)}, out(rng), out(rng));
    for (double v : p.values) CHECK(v == doctest::Approx(77.0));
  }
  CHECK_THROWS_AS(extract_patch(f, {0, 0, 0, 5}, 4, 4), std::invalid_argument);
}

TEST_CASE("extract_patch: translation consistency") {
  const Frame f = random_frame(64, 64, 21);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> shift(-6, 6);
  std::uniform_real_distribution<double> pos(10, 30), size(4, 20);
  for (int i = 0; i < 30; ++i) {
    const int tx = shift(rng), ty = shift(rng);
    Frame g(0, 64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        const int sx = std::clamp(x - tx, 0, 63), sy = std::clamp(y - ty, 0, 63);
        g.at(x, y) = f.at(sx, sy);
      }
    const BoundingBox box{pos(rng), pos(rng), size(rng), size(rng)};
    const Patch a = extract_patch(f, box, 9, 7), b = extract_patch(g, box.translated(tx, ty), 9, 7);
    // Equal up to the rounding of the shifted sample coordinates.
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-12));
    // Integer boxes sample the same lattice exactly.
    const BoundingBox ibox{std::round(box.x), std::round(box.y), 8, 8};
    CHECK(extract_patch(f, ibox, 8, 8) == extract_patch(g, ibox.translated(tx, ty), 8, 8));
  }
}
