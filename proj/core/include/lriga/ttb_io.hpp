#pragma once

// TTB1 binary files for plain and block tensor trains.
//
// Layout (little-endian): "TTB1", u32 D, u32 L, u32 block_position (D for a plain train),
// then per core u32 shape entries (r0, n, r1), or (r0, n, L, r1) for the block core,
// followed by float64 entries in row-major order.

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "lriga/block_tt.hpp"
#include "lriga/tt.hpp"

namespace lriga {

void write_ttb(std::ostream& out, const TtTensor& t);
void write_ttb(std::ostream& out, const BlockTt& b);
void write_ttb(const std::filesystem::path& path, const TtTensor& t);
void write_ttb(const std::filesystem::path& path, const BlockTt& b);

/// Either kind of train. Throws ValidationError on malformed input.
[[nodiscard]] std::variant<TtTensor, BlockTt> read_ttb(std::istream& in);
[[nodiscard]] std::variant<TtTensor, BlockTt> read_ttb(const std::filesystem::path& path);

/// Reads a plain train; a block file with a single component is accepted as well.
[[nodiscard]] TtTensor read_ttb_tensor(const std::filesystem::path& path);

}  // namespace lriga
