// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rgbda::png_io {

namespace {

struct Reader {
  const uint8_t* data;
  size_t size;
  size_t offset;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* r = static_cast<Reader*>(png_get_io_ptr(png));
  if (r->offset + count > r->size) png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, r->data + r->offset, count);
  r->offset += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp png, png_const_charp msg) {
  *static_cast<std::string*>(png_get_error_ptr(png)) = msg ? msg : "png error";
  longjmp(png_jmpbuf(png), 1);
}

void warning_callback(png_structp, png_const_charp) {}

struct DecodedRows {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::vector<uint8_t>> rows;
};

DecodedRows decode_rows(std::span<const uint8_t> bytes, bool swap16) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw std::runtime_error("png: not a PNG stream");

  std::string errmsg;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg, error_callback, warning_callback);
  if (!png) throw std::runtime_error("png: failed to allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: failed to allocate info struct");
  }

  DecodedRows out;
  std::vector<png_bytep> row_ptrs;
  Reader reader{bytes.data(), bytes.size(), 0};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: " + errmsg);
  }

  png_set_read_fn(png, &reader, read_callback);
  png_read_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.color_type = png_get_color_type(png, info);

  if (swap16 && out.bit_depth == 16) png_set_swap(png);
  const int passes = png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const size_t row_bytes = png_get_rowbytes(png, info);
  out.rows.assign(out.height, std::vector<uint8_t>(row_bytes));
  row_ptrs.reserve(out.height);
  for (auto& row : out.rows) row_ptrs.push_back(row.data());
  for (int p = 0; p < passes; ++p) png_read_rows(png, row_ptrs.data(), nullptr, out.height);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::vector<uint8_t> encode_rows(int width, int height, int bit_depth, int color_type,
                                 const std::vector<png_bytep>& rows, bool swap16) {
  std::string errmsg;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, error_callback, warning_callback);
  if (!png) throw std::runtime_error("png: failed to allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: failed to allocate info struct");
  }

  std::vector<uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: " + errmsg);
  }

  png_set_write_fn(png, &out, write_callback, flush_callback);
  // Pinned settings keep the byte stream reproducible across runs.
  png_set_compression_level(png, 6);
  png_set_compression_strategy(png, 0 /* Z_DEFAULT_STRATEGY */);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (swap16 && bit_depth == 16) png_set_swap(png);
  png_write_rows(png, const_cast<png_bytepp>(rows.data()), height);
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  return out;
}

void check_size(int width, int height) {
  if (width < 1 || height < 1) throw std::runtime_error("png: empty image");
}

}  // namespace

std::vector<uint8_t> encode_gray16(const Gray16& img) {
  check_size(img.width, img.height);
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] = const_cast<png_bytep>(
        reinterpret_cast<const uint8_t*>(img.values.data() + static_cast<size_t>(v) * img.width));
  }
  return encode_rows(img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, rows, true);
}

Gray16 decode_gray16(std::span<const uint8_t> bytes) {
  DecodedRows d = decode_rows(bytes, true);
  if (d.bit_depth != 16 || d.color_type != PNG_COLOR_TYPE_GRAY)
    throw std::runtime_error("png: expected 16-bit single-channel grayscale");
  Gray16 out{d.width, d.height, {}};
  out.values.resize(static_cast<size_t>(d.width) * d.height);
  for (int v = 0; v < d.height; ++v) {
    std::memcpy(out.values.data() + static_cast<size_t>(v) * d.width, d.rows[v].data(),
                static_cast<size_t>(d.width) * 2);
  }
  return out;
}

std::vector<uint8_t> encode_rgb8(const Rgb8& img) {
  check_size(img.width, img.height);
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] =
        const_cast<png_bytep>(img.values.data() + static_cast<size_t>(v) * img.width * 3);
  }
  return encode_rows(img.width, img.height, 8, PNG_COLOR_TYPE_RGB, rows, false);
}

Rgb8 decode_rgb8(std::span<const uint8_t> bytes) {
  DecodedRows d = decode_rows(bytes, false);
  if (d.bit_depth != 8 || (d.color_type != PNG_COLOR_TYPE_RGB && d.color_type != PNG_COLOR_TYPE_RGB_ALPHA))
    throw std::runtime_error("png: expected 8-bit RGB");
  const int channels = d.color_type == PNG_COLOR_TYPE_RGB ? 3 : 4;
  Rgb8 out{d.width, d.height, {}};
  out.values.resize(static_cast<size_t>(d.width) * d.height * 3);
  for (int v = 0; v < d.height; ++v) {
    const uint8_t* src = d.rows[v].data();
    uint8_t* dst = out.values.data() + static_cast<size_t>(v) * d.width * 3;
    for (int u = 0; u < d.width; ++u) {
      dst[u * 3 + 0] = src[u * channels + 0];
      dst[u * 3 + 1] = src[u * channels + 1];
      dst[u * 3 + 2] = src[u * channels + 2];
    }
  }
  return out;
}

std::vector<uint8_t> encode_gray8(const Gray8& img) {
  check_size(img.width, img.height);
  std::vector<png_bytep> rows(img.height);
  for (int v = 0; v < img.height; ++v) {
    rows[v] = const_cast<png_bytep>(img.values.data() + static_cast<size_t>(v) * img.width);
  }
  return encode_rows(img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, rows, false);
}

Gray8 decode_gray8(std::span<const uint8_t> bytes) {
  DecodedRows d = decode_rows(bytes, false);
  if (d.bit_depth != 8 || d.color_type != PNG_COLOR_TYPE_GRAY)
    throw std::runtime_error("png: expected 8-bit single-channel grayscale");
  Gray8 out{d.width, d.height, {}};
  out.values.resize(static_cast<size_t>(d.width) * d.height);
  for (int v = 0; v < d.height; ++v) {
    std::memcpy(out.values.data() + static_cast<size_t>(v) * d.width, d.rows[v].data(),
                static_cast<size_t>(d.width));
  }
  return out;
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace rgbda::png_io
