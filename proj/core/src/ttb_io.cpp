#include "lriga/ttb_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lriga/errors.hpp"

namespace lriga {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'T', 'B', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (std::size_t k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (std::size_t k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xffu);
  out.write(b.data(), 8);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ValidationError(std::string("TTB1: truncated ") + what);
  std::uint32_t v = 0;
  for (std::size_t k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
  return v;
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw ValidationError("TTB1: truncated core data");
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(v);
}

std::uint32_t narrow(std::size_t v) {
  if (v > 0xffffffffu) throw ValidationError("TTB1: dimension exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

void write_cores(std::ostream& out, const std::vector<TtCore>& cores, std::size_t L, std::size_t block) {
  out.write(kMagic.data(), 4);
  put_u32(out, narrow(cores.size()));
  put_u32(out, narrow(L));
  put_u32(out, narrow(block));
  for (std::size_t d = 0; d < cores.size(); ++d) {
    const TtCore& c = cores[d];
    put_u32(out, narrow(c.r0));
    put_u32(out, narrow(c.n));
    if (d == block) put_u32(out, narrow(c.l));
    put_u32(out, narrow(c.r1));
    for (double v : c.data) put_f64(out, v);
  }
  if (!out) throw ValidationError("TTB1: write failed");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("TTB1: cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_ttb(std::ostream& out, const TtTensor& t) { write_cores(out, t.cores(), 1, t.dimension()); }

void write_ttb(std::ostream& out, const BlockTt& b) {
  write_cores(out, b.cores(), b.components(), b.block_position());
}

void write_ttb(const std::filesystem::path& path, const TtTensor& t) {
  auto out = open_out(path);
  write_ttb(out, t);
}

void write_ttb(const std::filesystem::path& path, const BlockTt& b) {
  auto out = open_out(path);
  write_ttb(out, b);
}

std::variant<TtTensor, BlockTt> read_ttb(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) throw ValidationError("TTB1: bad magic");
  const std::uint32_t D = get_u32(in, "header");
  const std::uint32_t L = get_u32(in, "header");
  const std::uint32_t block = get_u32(in, "header");
  if (D == 0) throw ValidationError("TTB1: D must be positive");
  if (L == 0) throw ValidationError("TTB1: L must be positive");
  if (block > D) throw ValidationError("TTB1: block position out of range");
  if (block == D && L != 1) throw ValidationError("TTB1: plain train must have L = 1");
  std::vector<TtCore> cores;
  for (std::uint32_t d = 0; d < D; ++d) {
    const std::size_t r0 = get_u32(in, "core shape");
    const std::size_t n = get_u32(in, "core shape");
    const std::size_t l = d == block ? get_u32(in, "core shape") : 1;
    const std::size_t r1 = get_u32(in, "core shape");
    if (d == block && l != L) throw ValidationError("TTB1: block core component count differs from the header");
    const std::size_t size = r0 * n * l * r1;
    if (size > kDefaultFullSizeCap) throw ValidationError("TTB1: core too large");
    TtCore c(r0, n, l, r1);
    for (double& v : c.data) v = get_f64(in);
    cores.push_back(std::move(c));
  }
  try {
    if (block == D) return TtTensor(std::move(cores));
    return BlockTt(std::move(cores), block);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("TTB1: ") + e.what());
  }
}

std::variant<TtTensor, BlockTt> read_ttb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("TTB1: cannot open " + path.string());
  return read_ttb(in);
}

TtTensor read_ttb_tensor(const std::filesystem::path& path) {
  auto v = read_ttb(path);
  if (auto* t = std::get_if<TtTensor>(&v)) return std::move(*t);
  const BlockTt& b = std::get<BlockTt>(v);
  if (b.components() != 1) throw ValidationError("TTB1: expected a plain train, got a block train");
  return b.component(0);
}

}  // namespace lriga
