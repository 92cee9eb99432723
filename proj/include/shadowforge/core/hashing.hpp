#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shadowforge {

/// Lowercase hex SHA-256 of a byte span.
std::string sha256_hex(std::span<const uint8_t> bytes);
std::string sha256_hex(const std::string& s);

std::string base64_encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

}  // namespace shadowforge
