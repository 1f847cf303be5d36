// Copyright 2026, The ROSS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// libpng reports errors through longjmp. Everything between setjmp and the
// matching png_destroy_* call is plain C state; C++ exceptions are only
// raised after libpng has been torn down.

#include <png.h>

#include <csetjmp>
#include <cstdlib>
#include <cstdio>
#include <cstring>
#include <string>

#include "ross/errors.hpp"
#include "ross/io.hpp"

namespace ross::io {
namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;

struct ErrorSink {
  char message[256] = {0};
};

extern "C" void on_png_error(png_structp png, png_const_charp msg) {
  auto *sink = static_cast<ErrorSink *>(png_get_error_ptr(png));
  if (sink) std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

extern "C" void on_png_warning(png_structp, png_const_charp) {}

struct ReadCursor {
  const std::uint8_t *data = nullptr;
  std::size_t size = 0;
  std::size_t offset = 0;
};

extern "C" void read_from_memory(png_structp png, png_bytep out,
                                 png_size_t len) {
  auto *cur = static_cast<ReadCursor *>(png_get_io_ptr(png));
  if (cur->size - cur->offset < len) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, cur->data + cur->offset, len);
  cur->offset += len;
}

extern "C" void write_to_memory(png_structp png, png_bytep in,
                                png_size_t len) {
  auto *out = static_cast<Bytes *>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + len);
}

extern "C" void flush_noop(png_structp) {}

// Returns an empty string on success, otherwise the libpng message.
std::string decode_impl(const std::uint8_t *bytes, std::size_t size,
                        DecodedPng *out) {
  ErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           on_png_error, on_png_warning);
  if (!png) return "cannot allocate PNG reader";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "cannot allocate PNG info";
  }
  ReadCursor cursor{bytes, size, 0};
  // Heap buffers are released in the setjmp branch.
  png_bytep *volatile rows = nullptr;
  png_bytep volatile raw = nullptr;

  if (setjmp(png_jmpbuf(png))) {
    std::free(rows);
    std::free(raw);
    png_destroy_read_struct(&png, &info, nullptr);
    return sink.message[0] ? std::string(sink.message) : "invalid PNG";
  }

  png_set_read_fn(png, &cursor, read_from_memory);
  png_set_user_limits(png, 1u << 16, 1u << 16);
  png_read_info(png, info);

  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);
  out->rows = static_cast<int>(height);
  out->cols = static_cast<int>(width);
  out->bit_depth = bit_depth;
  out->color_type = color_type;
  if (color_type != PNG_COLOR_TYPE_GRAY || (bit_depth != 8 && bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return {};  // caller inspects color_type/bit_depth
  }
  if (static_cast<std::size_t>(width) * height > kMaxPixels) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "PNG dimensions too large";
  }
  if (bit_depth == 16) png_set_swap(png);  // host little-endian samples
  png_read_update_info(png, info);

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  if (row_bytes != static_cast<std::size_t>(width) * bytes_per_sample) {
    png_destroy_read_struct(&png, &info, nullptr);
    return "unexpected PNG row size";
  }
  raw = static_cast<png_bytep>(std::malloc(row_bytes * height + 1));
  rows = static_cast<png_bytep *>(
      std::malloc(sizeof(png_bytep) * (height ? height : 1)));
  if (!raw || !rows) png_error(png, "out of memory");
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = raw + r * row_bytes;
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  std::free(rows);
  rows = nullptr;
  png_destroy_read_struct(&png, &info, nullptr);

  out->samples.resize(static_cast<std::size_t>(width) * height);
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < out->samples.size(); ++i) {
      out->samples[i] = static_cast<std::uint16_t>(raw[2 * i] |
                                                   (raw[2 * i + 1] << 8));
    }
  } else {
    for (std::size_t i = 0; i < out->samples.size(); ++i) out->samples[i] = raw[i];
  }
  std::free(raw);
  return {};
}

std::string encode_impl(const std::uint8_t *pixels, int rows, int cols,
                        int bit_depth, Bytes *out) {
  ErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            on_png_error, on_png_warning);
  if (!png) return "cannot allocate PNG writer";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return "cannot allocate PNG info";
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return sink.message[0] ? std::string(sink.message) : "PNG encode failed";
  }
  png_set_write_fn(png, out, write_to_memory, flush_noop);
  png_set_compression_level(png, 3);
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols),
               static_cast<png_uint_32>(rows), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  const std::size_t row_bytes =
      static_cast<std::size_t>(cols) * (bit_depth == 16 ? 2 : 1);
  for (int r = 0; r < rows; ++r) {
    png_write_row(png, const_cast<png_bytep>(pixels + r * row_bytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return {};
}

template <class T>
Bytes encode_gray(const Image<T> &img, int bit_depth) {
  if (img.rows() < 1 || img.cols() < 1) {
    throw ShapeError("cannot encode an empty image as PNG");
  }
  Bytes out;
  std::vector<std::uint8_t> raw(img.data().size() * sizeof(T));
  if constexpr (sizeof(T) == 2) {
    for (std::size_t i = 0; i < img.data().size(); ++i) {
      raw[2 * i] = static_cast<std::uint8_t>(img.data()[i] & 0xFF);
      raw[2 * i + 1] = static_cast<std::uint8_t>(img.data()[i] >> 8);
    }
  } else {
    std::memcpy(raw.data(), img.data().data(), raw.size());
  }
  if (auto err = encode_impl(raw.data(), img.rows(), img.cols(), bit_depth, &out);
      !err.empty()) {
    throw FormatError("PNG encode: " + err);
  }
  return out;
}

}  // namespace

DecodedPng decode_png(std::span<const std::uint8_t> bytes) {
  DecodedPng out;
  if (auto err = decode_impl(bytes.data(), bytes.size(), &out); !err.empty()) {
    throw FormatError("PNG decode: " + err);
  }
  if (out.color_type != PNG_COLOR_TYPE_GRAY) {
    throw FormatError("PNG must be single-channel grayscale (color type " +
                      std::to_string(out.color_type) + ")");
  }
  if (out.bit_depth != 8 && out.bit_depth != 16) {
    throw FormatError("unsupported PNG bit depth " +
                      std::to_string(out.bit_depth));
  }
  return out;
}

Bytes encode_png_gray8(const Image<std::uint8_t> &img) {
  return encode_gray(img, 8);
}

Bytes encode_png_gray16(const Image<std::uint16_t> &img) {
  return encode_gray(img, 16);
}

}  // namespace ross::io
