#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace rdcalib {

// Interleaved 8-bit image, row-major, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, 0) {}

  bool empty() const noexcept { return pixels.empty(); }

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Reads an 8-bit gray, gray+alpha, RGB or RGBA PNG; alpha is dropped.
/// Throws IoError.
Image read_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG. Throws IoError.
void write_png(const std::filesystem::path& path, const Image& image);

/// Bilinear sample at continuous pixel coordinates (pixel centers at +0.5).
/// Returns false when (u, v) lies outside [0, width) x [0, height).
bool sample_bilinear(const Image& image, double u, double v, std::uint8_t* out);

}  // namespace rdcalib
