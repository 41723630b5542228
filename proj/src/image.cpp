#include "sigscore/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigscore {

namespace {

void require_valid(const Image& image) {
  if (image.height < 1 || image.width < 1) {
    throw std::invalid_argument("image must have at least one pixel");
  }
  if (image.channels != 1 && image.channels != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels");
  }
  const std::size_t expected = image.pixel_count() * static_cast<std::size_t>(image.channels);
  if (image.pixels.size() != expected) {
    throw std::invalid_argument("image pixel buffer size mismatch");
  }
}

}  // namespace

Image to_grayscale(const Image& image) {
  require_valid(image);
  if (image.channels == 1) {
    return image;
  }
  Image gray;
  gray.height = image.height;
  gray.width = image.width;
  gray.channels = 1;
  gray.pixels.resize(image.pixel_count());
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const double r = image.pixels[i * 3];
    const double g = image.pixels[i * 3 + 1];
    const double b = image.pixels[i * 3 + 2];
    gray.pixels[i] = 0.299 * r + 0.587 * g + 0.114 * b;
  }
  return gray;
}

Image resize_bilinear(const Image& image, int target_height, int target_width) {
  require_valid(image);
  if (target_height < 1 || target_width < 1) {
    throw std::invalid_argument("resize target must be positive");
  }
  if (target_height == image.height && target_width == image.width) {
    return image;
  }
  Image out;
  out.height = target_height;
  out.width = target_width;
  out.channels = image.channels;
  out.pixels.resize(static_cast<std::size_t>(target_height) *
                    static_cast<std::size_t>(target_width) *
                    static_cast<std::size_t>(image.channels));

  const double scale_y = static_cast<double>(image.height) / target_height;
  const double scale_x = static_cast<double>(image.width) / target_width;
  std::size_t idx = 0;
  for (int y = 0; y < target_height; ++y) {
    const double sy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0,
                                 static_cast<double>(image.height - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double wy = sy - y0;
    for (int x = 0; x < target_width; ++x) {
      const double sx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0,
                                   static_cast<double>(image.width - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double wx = sx - x0;
      for (int c = 0; c < image.channels; ++c) {
        const double top = (1.0 - wx) * image.at(y0, x0, c) + wx * image.at(y0, x1, c);
        const double bottom = (1.0 - wx) * image.at(y1, x0, c) + wx * image.at(y1, x1, c);
        out.pixels[idx++] = (1.0 - wy) * top + wy * bottom;
      }
    }
  }
  return out;
}

Stream image_to_stream(const Image& image, bool column_mode) {
  require_valid(image);
  if (image.channels != 1) {
    throw std::invalid_argument("image_to_stream requires a grayscale image");
  }
  if (image.height != image.width) {
    throw std::invalid_argument("image_to_stream requires a square image");
  }
  const int s = image.height;
  Stream stream;
  stream.dim = s;
  stream.points.resize(static_cast<std::size_t>(s) * static_cast<std::size_t>(s));
  if (!column_mode) {
    stream.points = image.pixels;
  } else {
    for (int x = 0; x < s; ++x) {
      for (int y = 0; y < s; ++y) {
        stream.points[static_cast<std::size_t>(x) * s + y] = image.at(y, x);
      }
    }
  }
  return stream;
}

}  // namespace sigscore
