#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavtrack {

/// 8-bit grayscale frame, row-major.
struct Frame {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Frame() = default;
  Frame(int idx, int w, int h) : index(idx), width(w), height(h), pixels(checked_size(w, h), 0) {}
  Frame(int idx, int w, int h, std::vector<std::uint8_t> px)
      : index(idx), width(w), height(h), pixels(std::move(px)) {
    if (pixels.size() != checked_size(w, h)) {
      throw std::invalid_argument("Frame: pixel buffer does not match dimensions");
    }
  }

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  static std::size_t checked_size(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("Frame: dimensions must be positive");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
};

struct Sequence {
  std::string name;
  std::vector<Frame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
};

/// Real-valued image used for tracker windows, filters and responses.
struct Patch {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Patch() = default;
  Patch(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }

  friend bool operator==(const Patch&, const Patch&) = default;
};

/// Frame converted to doubles (optionally scaled).
Patch to_patch(const Frame& frame, double scale = 1.0);

}  // namespace uavtrack
