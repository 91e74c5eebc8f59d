#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "uavtrack/geometry.hpp"
#include "uavtrack/image.hpp"

namespace uavtrack {

/// Thrown for unreadable, malformed or inconsistent media inputs.
class MediaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- frame files --------------------------------------------------------

Frame read_pgm(const std::filesystem::path& path, int index = 0);
void write_pgm(const std::filesystem::path& path, const Frame& frame);
/// PNG input only; color is reduced with BT.601 luma, rounded half-up.
Frame read_png(const std::filesystem::path& path, int index = 0);

/// Integer BT.601 luma: (299 R + 587 G + 114 B + 500) / 1000.
constexpr std::uint8_t bt601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Zero-padded six digit frame file name, e.g. "000042.pgm".
std::string frame_filename(int index, std::string_view ext = ".pgm");

/// Loads NNNNNN.pgm / NNNNNN.png files numbered contiguously from 000000.
Sequence load_sequence(const std::filesystem::path& directory);

// ---- annotations --------------------------------------------------------

/// CSV rows `frame,x,y,width,height`; header optional; width = height = -1
/// marks an absent target. Frames without a row are absent.
GroundTruthTrack load_annotations(const std::filesystem::path& csv, int frame_count);
void write_annotations(const std::filesystem::path& csv, const GroundTruthTrack& track);

// ---- synthetic sequences ------------------------------------------------

enum class SynthPreset { Calm, Agile, MovingBackground };

std::string_view to_string(SynthPreset p);
std::optional<SynthPreset> parse_preset(std::string_view s);

struct SynthConfig {
  SynthPreset preset = SynthPreset::Calm;
  int frame_count = 300;
  int width = 640;
  int height = 360;
  int target_size = 40;
  double noise_sigma = 4.0;
  bool blur = true;
  std::uint64_t seed = 7;

  /// Throws std::invalid_argument when the configuration is unusable.
  void validate() const;
};

struct SyntheticSequence {
  Sequence sequence;
  GroundTruthTrack truth;
  /// Distractor boxes per frame (moving-background preset only).
  std::vector<std::vector<BoundingBox>> distractors;
};

/// Renders a synthetic sequence in memory. Deterministic in `config`.
SyntheticSequence render_synthetic(const SynthConfig& config);

/// Renders and writes NNNNNN.pgm frames plus truth.csv into `out_dir`.
SyntheticSequence generate_synthetic(const SynthConfig& config,
                                     const std::filesystem::path& out_dir);

// ---- patch sampling ----------------------------------------------------

/// Bilinear resample of `box` to out_w x out_h, clamp-to-edge outside the
/// frame. Throws std::invalid_argument for a non-positive box area.
Patch extract_patch(const Frame& frame, const BoundingBox& box, int out_w, int out_h);

/// Same sampling, with the box rotated by `angle` radians and scaled by
/// `scale` about its center.
Patch extract_patch_affine(const Frame& frame, const BoundingBox& box, int out_w, int out_h,
                           double angle, double scale);

/// Clamp-to-edge bilinear sample of a real image.
double sample_bilinear(const Patch& img, double x, double y);

}  // namespace uavtrack
