#include "twinrank/core/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace twinrank {

namespace {

void put_le(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset, int width) {
  if (offset + static_cast<std::size_t>(width) > in.size()) {
    throw EncodingError("truncated input at offset " + std::to_string(offset));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{in[offset + i]} << (8 * i);
  return v;
}

void put_double(Bytes& out, double d) {
  if (!std::isfinite(d)) throw EncodingError("non-finite double in state");
  put_le(out, std::bit_cast<std::uint64_t>(d), 8);
}

double read_double(std::span<const std::uint8_t> in, std::size_t& pos) {
  double d = std::bit_cast<double>(get_le(in, pos, 8));
  if (!std::isfinite(d)) throw EncodingError("non-finite double at offset " + std::to_string(pos));
  pos += 8;
  return d;
}

struct Encoder {
  Bytes& out;
  void operator()(std::int64_t v) const { put_le(out, static_cast<std::uint64_t>(v), 8); }
  void operator()(double v) const { put_double(out, v); }
  void operator()(const std::vector<double>& v) const {
    put_le(out, v.size(), 8);
    for (double d : v) put_double(out, d);
  }
  void operator()(const std::vector<std::int64_t>& v) const {
    put_le(out, v.size(), 8);
    for (auto x : v) put_le(out, static_cast<std::uint64_t>(x), 8);
  }
};

std::size_t element_count(std::span<const std::uint8_t> in, std::size_t& pos) {
  std::uint64_t n = get_le(in, pos, 8);
  pos += 8;
  if (n > (in.size() - pos) / 8) throw EncodingError("array length exceeds input");
  return static_cast<std::size_t>(n);
}

}  // namespace

void put_u16(Bytes& out, std::uint16_t v) { put_le(out, v, 2); }
void put_u32(Bytes& out, std::uint32_t v) { put_le(out, v, 4); }
void put_u64(Bytes& out, std::uint64_t v) { put_le(out, v, 8); }
std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t offset) {
  return static_cast<std::uint16_t>(get_le(in, offset, 2));
}
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  return static_cast<std::uint32_t>(get_le(in, offset, 4));
}
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset) {
  return get_le(in, offset, 8);
}

std::size_t encoded_size(const State& state) {
  std::size_t n = 0;
  for (const auto& f : state.fields()) {
    n += std::visit(
        [](const auto& v) -> std::size_t {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_arithmetic_v<T>) {
            return 8;
          } else {
            return 8 + 8 * v.size();
          }
        },
        f.value);
  }
  return n;
}

void canonical_encode_append(const State& state, Bytes& out) {
  out.reserve(out.size() + encoded_size(state));
  for (const auto& f : state.fields()) std::visit(Encoder{out}, f.value);
}

Bytes canonical_encode(const State& state) {
  Bytes out;
  canonical_encode_append(state, out);
  return out;
}

State canonical_decode(std::span<const std::uint8_t> bytes, const State& schema) {
  State out;
  std::size_t pos = 0;
  for (const auto& f : schema.fields()) {
    Value v = std::visit(
        [&](const auto& proto) -> Value {
          using T = std::decay_t<decltype(proto)>;
          if constexpr (std::is_same_v<T, std::int64_t>) {
            auto x = static_cast<std::int64_t>(get_le(bytes, pos, 8));
            pos += 8;
            return x;
          } else if constexpr (std::is_same_v<T, double>) {
            return read_double(bytes, pos);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            std::vector<double> arr(element_count(bytes, pos));
            for (auto& d : arr) d = read_double(bytes, pos);
            return arr;
          } else {
            std::vector<std::int64_t> arr(element_count(bytes, pos));
            for (auto& x : arr) {
              x = static_cast<std::int64_t>(get_le(bytes, pos, 8));
              pos += 8;
            }
            return arr;
          }
        },
        f.value);
    out.add(f.name, std::move(v));
  }
  if (pos != bytes.size()) {
    throw EncodingError("trailing bytes after decode: " + std::to_string(bytes.size() - pos));
  }
  return out;
}

std::optional<std::size_t> first_difference(std::span<const std::uint8_t> a,
                                            std::span<const std::uint8_t> b) {
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  if (ia == a.end() && ib == b.end()) return std::nullopt;
  return static_cast<std::size_t>(ia - a.begin());
}

}  // namespace twinrank
