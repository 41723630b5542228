#include "sigscore/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "sigscore/parallel.hpp"
#include "sigscore/stats.hpp"

namespace sigscore {

namespace {

bool has_raster_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) {
      std::fclose(f);
    }
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool is_png(std::FILE* f) {
  unsigned char header[8] = {};
  const std::size_t got = std::fread(header, 1, sizeof(header), f);
  std::rewind(f);
  return got == 8 && png_sig_cmp(header, 0, 8) == 0;
}

void png_error_handler(png_structp png, png_const_charp /*message*/) {
  std::longjmp(*static_cast<std::jmp_buf*>(png_get_error_ptr(png)), 1);
}

void png_warning_handler(png_structp /*png*/, png_const_charp /*message*/) {}

Image decode_png(std::FILE* f, const std::filesystem::path& path) {
  std::jmp_buf jump;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &jump,
                                           png_error_handler, png_warning_handler);
  if (!png) {
    throw DecodeError(path, "failed to initialize PNG reader");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DecodeError(path, "failed to initialize PNG reader");
  }

  std::vector<png_byte> raw;
  std::vector<png_bytep> rows;
  if (setjmp(jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError(path, "corrupt PNG data");
  }

  png_init_io(png, f);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(png);
  }
  // Alpha is outside the pipeline's pixel model.
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const png_byte channels = png_get_channels(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError(path, "unsupported PNG channel layout");
  }

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raw.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<std::size_t>(y) * row_bytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image image;
  image.height = static_cast<int>(height);
  image.width = static_cast<int>(width);
  image.channels = channels;
  image.pixels.resize(static_cast<std::size_t>(width) * height * channels);
  const std::size_t samples_per_row = static_cast<std::size_t>(width) * channels;
  if (depth == 16) {
    // PNG stores 16-bit samples big-endian.
    for (png_uint_32 y = 0; y < height; ++y) {
      const png_byte* row = rows[y];
      for (std::size_t i = 0; i < samples_per_row; ++i) {
        const unsigned value =
            (static_cast<unsigned>(row[2 * i]) << 8) | row[2 * i + 1];
        image.pixels[static_cast<std::size_t>(y) * samples_per_row + i] =
            value / 65535.0;
      }
    }
  } else {
    for (png_uint_32 y = 0; y < height; ++y) {
      const png_byte* row = rows[y];
      for (std::size_t i = 0; i < samples_per_row; ++i) {
        image.pixels[static_cast<std::size_t>(y) * samples_per_row + i] =
            row[i] / 255.0;
      }
    }
  }
  return image;
}

struct JpegErrorContext {
  jpeg_error_mgr manager;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr info) {
  auto* context = reinterpret_cast<JpegErrorContext*>(info->err);
  std::longjmp(context->jump, 1);
}

Image decode_jpeg(std::FILE* f, const std::filesystem::path& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorContext error_context;
  cinfo.err = jpeg_std_error(&error_context.manager);
  error_context.manager.error_exit = jpeg_error_exit;
  error_context.manager.output_message = [](j_common_ptr) {};

  std::vector<unsigned char> row_buffer;
  Image image;
  if (setjmp(error_context.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(path, "corrupt JPEG data");
  }

  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int width = static_cast<int>(cinfo.output_width);
  const int height = static_cast<int>(cinfo.output_height);
  const int channels = cinfo.output_components;
  if (channels != 1 && channels != 3) {
    jpeg_abort_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(path, "unsupported JPEG channel layout");
  }

  image.height = height;
  image.width = width;
  image.channels = channels;
  image.pixels.resize(static_cast<std::size_t>(width) * height * channels);
  const std::size_t samples_per_row = static_cast<std::size_t>(width) * channels;
  row_buffer.resize(samples_per_row);
  unsigned char* row_ptr = row_buffer.data();
  std::size_t offset = 0;
  while (cinfo.output_scanline < cinfo.output_height) {
    jpeg_read_scanlines(&cinfo, &row_ptr, 1);
    for (std::size_t i = 0; i < samples_per_row; ++i) {
      image.pixels[offset + i] = row_buffer[i] / 255.0;
    }
    offset += samples_per_row;
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return image;
}

// Runs fn per file with the scan order preserved; corrupt files either
// abort (first failure in scan order wins) or are collected as skipped.
template <typename PerFile>
std::vector<std::filesystem::path> for_each_decoded(
    const std::vector<std::filesystem::path>& files, bool skip_corrupt,
    const PerFile& fn) {
  std::vector<char> failed(files.size(), 0);
  std::vector<std::string> reasons(files.size());
  parallel_for(files.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        Image image = decode_image(files[i]);
        fn(i, std::move(image));
      } catch (const std::exception& error) {
        failed[i] = 1;
        reasons[i] = error.what();
      }
    }
  });
  std::vector<std::filesystem::path> skipped;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!failed[i]) {
      continue;
    }
    if (!skip_corrupt) {
      throw DecodeError(files[i], reasons[i]);
    }
    skipped.push_back(files[i]);
  }
  return skipped;
}

}  // namespace

std::vector<std::filesystem::path> scan_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw std::runtime_error("not a readable directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && has_raster_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.native() < b.native(); });
  return files;
}

Image decode_image(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) {
    throw DecodeError(path, "cannot open file");
  }
  if (is_png(f.get())) {
    return decode_png(f.get(), path);
  }
  return decode_jpeg(f.get(), path);
}

LoadedSet load_directory(const std::filesystem::path& dir, const LoadOptions& options) {
  if (options.size < 2) {
    throw std::invalid_argument("load size must be at least 2");
  }
  LoadedSet set;
  set.files = scan_directory(dir);
  std::vector<Image> decoded(set.files.size());
  set.skipped = for_each_decoded(set.files, options.skip_corrupt,
                                 [&](std::size_t i, Image image) {
                                   decoded[i] = resize_bilinear(
                                       to_grayscale(image), options.size, options.size);
                                 });
  if (!set.skipped.empty()) {
    std::vector<std::filesystem::path> kept_files;
    std::vector<Image> kept_images;
    for (std::size_t i = 0; i < set.files.size(); ++i) {
      if (!decoded[i].pixels.empty()) {
        kept_files.push_back(set.files[i]);
        kept_images.push_back(std::move(decoded[i]));
      }
    }
    set.files = std::move(kept_files);
    set.images = std::move(kept_images);
  } else {
    set.images = std::move(decoded);
  }
  return set;
}

std::vector<double> intensity_descriptors(const std::filesystem::path& dir,
                                          bool skip_corrupt) {
  const auto files = scan_directory(dir);
  std::vector<double> descriptors(files.size(),
                                  std::numeric_limits<double>::quiet_NaN());
  for_each_decoded(files, skip_corrupt, [&](std::size_t i, Image image) {
    descriptors[i] = mean_intensity(image);
  });
  std::erase_if(descriptors, [](double d) { return std::isnan(d); });
  return descriptors;
}

std::vector<Stream> to_streams(std::span<const Image> images, bool column_mode) {
  std::vector<Stream> streams;
  streams.reserve(images.size());
  for (const Image& image : images) {
    streams.push_back(image_to_stream(image, column_mode));
  }
  return streams;
}

}  // namespace sigscore
