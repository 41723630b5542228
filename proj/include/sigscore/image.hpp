#pragma once

#include <cstddef>
#include <vector>

#include "sigscore/stream.hpp"

namespace sigscore {

// Pixel matrix with values normalized to [0, 1], stored row-major with
// interleaved channels. channels is 1 (grayscale) or 3 (RGB).
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> pixels;

  double at(int y, int x, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(x)) *
                      static_cast<std::size_t>(channels) +
                  static_cast<std::size_t>(c)];
  }

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
};

// Rec. 601 luma for RGB input; grayscale input passes through unchanged.
Image to_grayscale(const Image& image);

// Bilinear resize with half-pixel-centered coordinates. Values stay in the
// convex hull of the input, so a [0,1] image stays in [0,1].
Image resize_bilinear(const Image& image, int target_height, int target_width);

// Square grayscale image as a stream: one point per row (or per column when
// column_mode is set), so an s-by-s image becomes s points in R^s.
Stream image_to_stream(const Image& image, bool column_mode = false);

}  // namespace sigscore
