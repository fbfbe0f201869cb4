#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "landau/grid.hpp"

namespace landau {

/// Sidecar metadata stored next to each payload as `<payload>.json`.
struct SnapshotMeta {
  int n = 0;
  double L = 0.0;
  int d = kDim;
  double time = 0.0;
  std::string name;
  std::uint32_t checksum_crc32 = 0;
  std::size_t count = 0;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::filesystem::path sidecar_path(const std::filesystem::path& payload);

/// Writes the payload (flat little-endian f64, x fastest) and its sidecar.
SnapshotMeta save_snapshot(const ScalarField& f, const std::filesystem::path& payload, double time = 0.0,
                           const std::string& name = "u");

struct Snapshot {
  ScalarField field;
  SnapshotMeta meta;
};

/// Throws SnapshotError on checksum mismatch and GridMismatch when the
/// sidecar grid disagrees with the payload size.
Snapshot load_snapshot(const std::filesystem::path& payload);

std::uint32_t crc32_of(std::span<const unsigned char> bytes);

}  // namespace landau
