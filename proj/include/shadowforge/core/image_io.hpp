#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

/// Encode a [0,1] float image to 8-bit PNG bytes (grayscale when C=1, RGB when
/// C=3). Quantization is round(v*255) after clamping; compression settings are
/// pinned so identical images produce identical bytes.
std::vector<uint8_t> encode_png(const Image<float>& image);

/// Decode an 8-bit PNG into a float image; intensities become value/255.
Image<float> decode_png(std::span<const uint8_t> bytes);

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes);
std::vector<uint8_t> read_file(const std::filesystem::path& path);

/// Write to a sibling temp file, then rename into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace shadowforge
