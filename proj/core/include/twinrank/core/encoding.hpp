#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "twinrank/core/errors.hpp"
#include "twinrank/core/state.hpp"
#include "twinrank/core/types.hpp"

namespace twinrank {

class EncodingError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Layout, fields in declaration order, names not encoded:
//   int64            8 bytes, two's complement, little-endian
//   double           8 bytes, IEEE-754 binary64 bit pattern, little-endian
//   array of double  u64 element count (LE), then elements as above
//   array of int64   u64 element count (LE), then elements as above
// Non-finite doubles are rejected with EncodingError.

Bytes canonical_encode(const State& state);
void canonical_encode_append(const State& state, Bytes& out);
std::size_t encoded_size(const State& state);

/// Decodes bytes laid out per `schema` (values in the schema are ignored;
/// only names, alternatives and order matter). Throws EncodingError on
/// truncation, trailing bytes or non-finite doubles.
State canonical_decode(std::span<const std::uint8_t> bytes, const State& schema);

/// First differing byte offset; a length difference with an equal common
/// prefix reports the shorter length. Nullopt when equal.
std::optional<std::size_t> first_difference(std::span<const std::uint8_t> a,
                                            std::span<const std::uint8_t> b);

void put_u16(Bytes& out, std::uint16_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t offset);
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset);
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset);

}  // namespace twinrank
