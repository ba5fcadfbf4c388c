#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbanpriv/errors.hpp"

namespace wbanpriv {

inline constexpr std::size_t kBlockBytes = 16;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using ByteArray16 = std::array<std::uint8_t, kBlockBytes>;

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

/// 128-bit opaque value. The tag keeps keys, nonces and pseudonyms from
/// being mixed up at compile time; conversion between tags is explicit.
template <class Tag>
class Block128 {
 public:
  constexpr Block128() = default;
  constexpr explicit Block128(const ByteArray16& bytes) : bytes_(bytes) {}

  template <class OtherTag>
  static constexpr Block128 from(const Block128<OtherTag>& other) {
    return Block128(other.bytes());
  }

  static Block128 from_bytes(ByteView bytes) {
    if (bytes.size() != kBlockBytes) {
      throw FramingError("expected 16 bytes, got " +
                         std::to_string(bytes.size()));
    }
    ByteArray16 out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return Block128(out);
  }

  static Block128 from_hex(std::string_view hex) {
    return from_bytes(wbanpriv::from_hex(hex));
  }

  constexpr const ByteArray16& bytes() const { return bytes_; }
  ByteView view() const { return ByteView(bytes_); }
  std::string hex() const { return to_hex(view()); }

  constexpr bool is_zero() const {
    return std::all_of(bytes_.begin(), bytes_.end(),
                       [](std::uint8_t b) { return b == 0; });
  }

  friend constexpr auto operator<=>(const Block128&, const Block128&) = default;

 private:
  ByteArray16 bytes_{};
};

/// Hasher for unordered containers. The values are already uniformly
/// distributed, so the first eight bytes are enough.
struct Block128Hash {
  template <class Tag>
  std::size_t operator()(const Block128<Tag>& b) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) {
      h = (h << 8) | b.bytes()[i];
    }
    return h;
  }
};

/// a|b for two 16-byte operands: left operand first, no delimiter.
template <class A, class B>
std::array<std::uint8_t, 2 * kBlockBytes> concat(const Block128<A>& a,
                                                 const Block128<B>& b) {
  std::array<std::uint8_t, 2 * kBlockBytes> out{};
  std::copy(a.bytes().begin(), a.bytes().end(), out.begin());
  std::copy(b.bytes().begin(), b.bytes().end(), out.begin() + kBlockBytes);
  return out;
}

/// True if any contiguous 16-byte window of `haystack` (any offset) equals
/// `needle`.
bool contains_window(ByteView haystack, const ByteArray16& needle);

}  // namespace wbanpriv
