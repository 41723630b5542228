#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "sigscore/image.hpp"
#include "sigscore/stream.hpp"

namespace sigscore {

// Raised when a file cannot be decoded; carries the offending path.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::filesystem::path& path, const std::string& reason)
      : std::runtime_error(path.string() + ": " + reason), path_(path) {}

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Recursively lists PNG/JPEG files under the directory, sorted by full path
// in byte order so the result does not depend on filesystem enumeration.
std::vector<std::filesystem::path> scan_directory(const std::filesystem::path& dir);

// Decodes a PNG or JPEG file to a [0,1] Image (8-bit scaled by 1/255,
// 16-bit PNG by 1/65535). Alpha is dropped; palette images expand to RGB.
Image decode_image(const std::filesystem::path& path);

struct LoadOptions {
  int size = 64;
  bool skip_corrupt = false;  // default: a corrupt file aborts the load
};

struct LoadedSet {
  std::vector<std::filesystem::path> files;    // decode order, sorted
  std::vector<Image> images;                   // grayscale, size x size
  std::vector<std::filesystem::path> skipped;  // only with skip_corrupt
};

// Decode (parallel), grayscale, and resize every image in the directory;
// output order follows the sorted scan regardless of completion order.
LoadedSet load_directory(const std::filesystem::path& dir, const LoadOptions& options);

// Mean-intensity descriptor per file, computed on the raw decoded image
// (before any resizing). Order matches the sorted scan.
std::vector<double> intensity_descriptors(const std::filesystem::path& dir,
                                          bool skip_corrupt);

std::vector<Stream> to_streams(std::span<const Image> images, bool column_mode);

}  // namespace sigscore
