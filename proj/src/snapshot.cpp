#include "landau/snapshot.hpp"

#include <zlib.h>

#include <bit>
#include <fstream>
#include <iterator>
#include <vector>

#include "json.hpp"

namespace landau {
namespace {

std::vector<unsigned char> encode_le(std::span<const double> v) {
  std::vector<unsigned char> out(v.size() * 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(v[i]);
    for (int b = 0; b < 8; ++b) out[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  return out;
}

std::vector<double> decode_le(std::span<const unsigned char> bytes) {
  std::vector<double> v(bytes.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
    v[i] = std::bit_cast<double>(bits);
  }
  return v;
}

}  // namespace

std::uint32_t crc32_of(std::span<const unsigned char> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const std::size_t len = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

std::filesystem::path sidecar_path(const std::filesystem::path& payload) {
  auto p = payload;
  p += ".json";
  return p;
}

SnapshotMeta save_snapshot(const ScalarField& f, const std::filesystem::path& payload, double time,
                           const std::string& name) {
  const auto bytes = encode_le(f.values());
  SnapshotMeta meta{f.grid().n, f.grid().L, kDim, time, name, crc32_of(bytes), f.size()};

  if (payload.has_parent_path()) std::filesystem::create_directories(payload.parent_path());
  {
    std::ofstream out(payload, std::ios::binary);
    if (!out) throw SnapshotError("cannot open " + payload.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  nlohmann::json j = {{"n", meta.n},
                      {"L", meta.L},
                      {"d", meta.d},
                      {"time", meta.time},
                      {"name", meta.name},
                      {"checksum_crc32", meta.checksum_crc32},
                      {"byte_order", "LE"},
                      {"dtype", "f64"}};
  std::ofstream side(sidecar_path(payload));
  if (!side) throw SnapshotError("cannot open sidecar for " + payload.string());
  side << j.dump(2) << '\n';
  return meta;
}

Snapshot load_snapshot(const std::filesystem::path& payload) {
  std::ifstream side(sidecar_path(payload));
  if (!side) throw SnapshotError("missing sidecar for " + payload.string());
  nlohmann::json j;
  try {
    side >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SnapshotError(std::string("malformed sidecar: ") + e.what());
  }
  if (j.value("byte_order", "") != "LE" || j.value("dtype", "") != "f64")
    throw SnapshotError("unsupported payload encoding");

  SnapshotMeta meta;
  meta.n = j.at("n").get<int>();
  meta.L = j.at("L").get<double>();
  meta.d = j.value("d", kDim);
  meta.time = j.value("time", 0.0);
  meta.name = j.value("name", std::string{});
  meta.checksum_crc32 = j.at("checksum_crc32").get<std::uint32_t>();

  std::ifstream in(payload, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + payload.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  meta.count = bytes.size() / 8;

  const Grid g = make_grid(meta.n, meta.L);
  if (meta.d != kDim || bytes.size() % 8 != 0 || meta.count != g.size())
    throw GridMismatch("snapshot grid mismatch: sidecar n=" + std::to_string(meta.n) + " but payload holds " +
                       std::to_string(meta.count) + " values");
  if (crc32_of(bytes) != meta.checksum_crc32) throw SnapshotError("checksum mismatch in " + payload.string());
  return {ScalarField(g, decode_le(bytes)), meta};
}

}  // namespace landau
