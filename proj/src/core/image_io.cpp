#include "shadowforge/core/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {

namespace {

struct ByteSink {
  std::vector<uint8_t>* out;
};

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
  auto* sink = static_cast<ByteSink*>(png_get_io_ptr(png));
  sink->out->insert(sink->out->end(), data, data + n);
}

void png_flush_noop(png_structp) {}

struct ByteSource {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<ByteSource*>(png_get_io_ptr(png));
  if (src->pos + n > src->size) {
    png_error(png, "read past end of PNG buffer");
    return;
  }
  std::memcpy(out, src->data + src->pos, n);
  src->pos += n;
}

uint8_t quantize(float v) {
  float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<uint8_t>(std::lround(c * 255.0f));
}

}  // namespace

std::vector<uint8_t> encode_png(const Image<float>& image) {
  const auto& s = image.shape;
  if (s.channels != 1 && s.channels != 3)
    throw InvalidInput("encode_png: supported channel counts are 1 and 3, got " +
                       std::to_string(s.channels));
  if (s.height < 1 || s.width < 1) throw InvalidInput("encode_png: empty image");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("encode_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("encode_png: png_create_info_struct failed");
  }

  std::vector<uint8_t> out;
  ByteSink sink{&out};
  // interleave CHW floats into HWC byte rows
  std::vector<uint8_t> raster(static_cast<size_t>(s.height) * s.width * s.channels);
  std::vector<png_bytep> row_ptrs(s.height);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("encode_png: libpng error");
  }

  png_set_write_fn(png, &sink, png_write_to_vector, png_flush_noop);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, s.width, s.height, 8,
               s.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

  for (int y = 0; y < s.height; ++y) {
    uint8_t* row = raster.data() + static_cast<size_t>(y) * s.width * s.channels;
    for (int x = 0; x < s.width; ++x)
      for (int c = 0; c < s.channels; ++c)
        row[x * s.channels + c] = quantize(image.data[s.offset(c, y, x)]);
    row_ptrs[y] = row;
  }

  png_set_rows(png, info, row_ptrs.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image<float> decode_png(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw IoError("decode_png: not a PNG stream");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("decode_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("decode_png: png_create_info_struct failed");
  }

  ByteSource src{bytes.data(), bytes.size(), 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("decode_png: libpng error (corrupt stream?)");
  }
  png_set_read_fn(png, &src, png_read_from_span);
  png_read_info(png, info);

  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  // normalize exotic inputs to 8-bit gray or RGB
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("decode_png: unsupported channel count " + std::to_string(channels));
  }

  TensorShape shape{channels, static_cast<int>(height), static_cast<int>(width)};
  std::vector<uint8_t> raster(static_cast<size_t>(height) * width * channels);
  std::vector<png_bytep> row_ptrs(height);
  for (png_uint_32 y = 0; y < height; ++y)
    row_ptrs[y] = raster.data() + static_cast<size_t>(y) * width * channels;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image<float> img(shape, VecX<float>::Zero(shape.elems()));
  for (int y = 0; y < shape.height; ++y) {
    const uint8_t* row = raster.data() + static_cast<size_t>(y) * width * channels;
    for (int x = 0; x < shape.width; ++x)
      for (int c = 0; c < channels; ++c)
        img.data[shape.offset(c, y, x)] = static_cast<float>(row[x * channels + c]) / 255.0f;
  }
  return img;
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_file: cannot open " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write_file: short write to " + path.string());
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("read_file: cannot open " + path.string());
  auto size = f.tellg();
  f.seekg(0);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  f.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!f) throw IoError("read_file: short read from " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  write_file(tmp, bytes);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("write_file_atomic: rename to " + path.string() + " failed: " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::span<const uint8_t>(
                              reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

}  // namespace shadowforge
