#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "wulff/model.hpp"

namespace wulff {

// Layout, little-endian: "WULF1", u32 n, u8 model (0 spin, 1 edge), f64 parameter,
// u8 boundary tag, states bit-packed in canonical order (LSB first), u64 FNV-1a
// checksum of all preceding bytes.
struct Snapshot {
  std::variant<SpinConfig, EdgeConfig> state;
  double parameter = 0.0;
};

std::vector<std::uint8_t> encode_snapshot(const SpinConfig& sigma, double beta);
std::vector<std::uint8_t> encode_snapshot(const EdgeConfig& omega, double p);
// Throws std::runtime_error on bad magic, truncation or checksum mismatch.
Snapshot decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_snapshot(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace wulff
