#include "wulff/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wulff {
namespace {

constexpr char kMagic[5] = {'W', 'U', 'L', 'F', '1'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > in.size()) throw std::runtime_error("snapshot truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[pos + static_cast<std::size_t>(i)]) << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}

template <class Bits>
std::vector<std::uint8_t> encode(int n, std::uint8_t model, double parameter, std::uint8_t bc, std::size_t count,
                                 Bits bit) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 5);
  put_le(out, static_cast<std::uint32_t>(n), 4);
  out.push_back(model);
  put_le(out, std::bit_cast<std::uint64_t>(parameter), 8);
  out.push_back(bc);
  std::vector<std::uint8_t> packed((count + 7) / 8, 0);
  for (std::size_t i = 0; i < count; ++i) {
    if (bit(i)) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  out.insert(out.end(), packed.begin(), packed.end());
  put_le(out, fnv1a64(out), 8);
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> encode_snapshot(const SpinConfig& sigma, double beta) {
  return encode(sigma.side, 0, beta, static_cast<std::uint8_t>(sigma.bc), sigma.values.size(),
                [&](std::size_t i) { return sigma.values[i] > 0; });
}

std::vector<std::uint8_t> encode_snapshot(const EdgeConfig& omega, double p) {
  if (omega.bc.kind() == BoundaryCondition::Kind::partition) {
    throw std::invalid_argument("partition boundary conditions cannot be snapshotted");
  }
  return encode(omega.side, 1, p, static_cast<std::uint8_t>(omega.bc.kind()), omega.open.size(),
                [&](std::size_t i) { return omega.open[i] != 0; });
}

Snapshot decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5 + 4 + 1 + 8 + 1 + 8 || std::memcmp(bytes.data(), kMagic, 5) != 0) {
    throw std::runtime_error("not a snapshot");
  }
  const std::size_t body = bytes.size() - 8;
  std::size_t tail = body;
  if (get_le(bytes, tail, 8) != fnv1a64(bytes.first(body))) throw std::runtime_error("snapshot checksum mismatch");
  std::size_t pos = 5;
  const auto n = static_cast<int>(get_le(bytes, pos, 4));
  const auto model = static_cast<std::uint8_t>(get_le(bytes, pos, 1));
  const double parameter = std::bit_cast<double>(get_le(bytes, pos, 8));
  const auto bc = static_cast<std::uint8_t>(get_le(bytes, pos, 1));
  if (n < 2) throw std::runtime_error("snapshot side out of range");
  const Lattice lattice(n);
  const std::size_t count =
      static_cast<std::size_t>(model == 0 ? lattice.site_count() : lattice.edge_count());
  if (pos + (count + 7) / 8 != body) throw std::runtime_error("snapshot payload length mismatch");
  auto bit = [&](std::size_t i) { return (bytes[pos + i / 8] >> (i % 8)) & 1; };
  Snapshot snap;
  snap.parameter = parameter;
  if (model == 0) {
    if (bc > 1) throw std::runtime_error("bad spin boundary tag");
    SpinConfig s{n, static_cast<SpinBoundary>(bc), std::vector<std::int8_t>(count)};
    for (std::size_t i = 0; i < count; ++i) s.values[i] = bit(i) ? 1 : -1;
    snap.state = std::move(s);
  } else if (model == 1) {
    if (bc > 1) throw std::runtime_error("bad edge boundary tag");
    EdgeConfig e = EdgeConfig::uniform(lattice, false, bc == 0 ? BoundaryCondition::wired() : BoundaryCondition::free());
    for (std::size_t i = 0; i < count; ++i) e.open[i] = static_cast<std::uint8_t>(bit(i));
    snap.state = std::move(e);
  } else {
    throw std::runtime_error("bad model tag");
  }
  return snap;
}

void write_snapshot(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::uint8_t> read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace wulff
