#include "shadowforge/core/blob_io.hpp"

#include <cstring>
#include <fstream>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"

namespace shadowforge {

namespace {

void put_u64_le(std::ofstream& f, uint64_t v) {
  uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>((v >> (8 * i)) & 0xff);
  f.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64_le(std::ifstream& f) {
  uint8_t b[8];
  f.read(reinterpret_cast<char*>(b), 8);
  if (!f) throw CheckpointError("blob: truncated length prefix");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

std::span<const uint8_t> float_bytes(std::span<const float> payload) {
  return {reinterpret_cast<const uint8_t*>(payload.data()), payload.size() * sizeof(float)};
}

}  // namespace

void save_blob(const std::filesystem::path& path, nlohmann::json header,
               std::span<const float> payload) {
  header["payload_sha256"] = sha256_hex(float_bytes(payload));
  const std::string head = header.dump();

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("save_blob: cannot open " + tmp.string());
    put_u64_le(f, head.size());
    f.write(head.data(), static_cast<std::streamsize>(head.size()));
    put_u64_le(f, payload.size() * sizeof(float));
    auto bytes = float_bytes(payload);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("save_blob: short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("save_blob: rename failed: " + ec.message());
}

Blob load_blob(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_blob: cannot open " + path.string());

  uint64_t head_len = get_u64_le(f);
  std::string head(head_len, '\0');
  f.read(head.data(), static_cast<std::streamsize>(head_len));
  if (!f) throw CheckpointError("blob: truncated header in " + path.string());

  Blob blob;
  try {
    blob.header = nlohmann::json::parse(head);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("blob: bad header JSON in " + path.string() + ": " + e.what());
  }

  uint64_t payload_bytes = get_u64_le(f);
  if (payload_bytes % sizeof(float) != 0)
    throw CheckpointError("blob: payload length not a multiple of 4 in " + path.string());
  blob.payload.resize(payload_bytes / sizeof(float));
  f.read(reinterpret_cast<char*>(blob.payload.data()), static_cast<std::streamsize>(payload_bytes));
  if (!f) throw CheckpointError("blob: truncated payload in " + path.string());

  auto want = blob.header.value("payload_sha256", std::string());
  auto got = sha256_hex(float_bytes(blob.payload));
  if (want != got)
    throw CheckpointError("blob: payload checksum mismatch in " + path.string());
  return blob;
}

}  // namespace shadowforge
