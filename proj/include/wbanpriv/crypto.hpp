#pragma once

// Deterministic primitives under every protocol derivation: a 128-bit hash,
// a keyed PRF (HMAC over the same hash) and a seedable nonce source.

#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "wbanpriv/bytes.hpp"

namespace wbanpriv::crypto {

struct DigestTag {};
struct NonceTag {};

using Digest128 = Block128<DigestTag>;
using Nonce = Block128<NonceTag>;

/// Full-width hash function slot. SHA-1 is the default; anything with a
/// digest of at least 16 bytes can be plugged in.
class HashAlgorithm {
 public:
  virtual ~HashAlgorithm() = default;
  virtual std::string_view name() const = 0;
  virtual std::size_t block_size() const = 0;
  virtual std::size_t digest_size() const = 0;
  virtual Bytes digest(ByteView data) const = 0;
};

std::shared_ptr<const HashAlgorithm> sha1();
std::shared_ptr<const HashAlgorithm> sha256();

/// Byte counters fed by a metered Suite. Counts the data argument of each
/// hash/prf call, not the HMAC padding blocks.
struct UsageMeter {
  std::uint64_t hash_calls = 0;
  std::uint64_t hash_bytes = 0;
  std::uint64_t prf_calls = 0;
  std::uint64_t prf_bytes = 0;

  std::uint64_t total_bytes() const { return hash_bytes + prf_bytes; }
};

inline constexpr unsigned kDefaultKBits = 128;
inline constexpr unsigned kMinKBits = 32;

/// Hash + PRF bound to a security parameter. With k_bits < 128 every output
/// keeps only its first k_bits bits and zero-fills the rest; this exists
/// for small-parameter tests only.
class Suite {
 public:
  explicit Suite(std::shared_ptr<const HashAlgorithm> algorithm = sha1(),
                 unsigned k_bits = kDefaultKBits);

  Digest128 hash(ByteView data) const;
  Digest128 prf(const Digest128& key, ByteView data) const;

  unsigned k_bits() const { return k_bits_; }
  const HashAlgorithm& algorithm() const { return *algorithm_; }

  /// Copy of this suite that reports into `meter`. The meter must outlive
  /// the returned suite.
  Suite metered(UsageMeter& meter) const;

  ByteArray16 mask(ByteArray16 value) const;

 private:
  std::shared_ptr<const HashAlgorithm> algorithm_;
  unsigned k_bits_;
  UsageMeter* meter_ = nullptr;
};

const Suite& default_suite();

Digest128 hash(ByteView data);
Digest128 prf(const Digest128& key, ByteView data);

/// HMAC (RFC 2104) over an arbitrary hash, full width.
Bytes hmac(const HashAlgorithm& algorithm, ByteView key, ByteView data);

/// Deterministic generator for experiments. Built on mt19937_64, whose
/// output sequence is fixed by the standard, with integer helpers that
/// avoid implementation-defined distributions so runs are reproducible
/// across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Seeded from std::random_device. Never used by tests.
  static SeededRng from_entropy();

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  bool coin() { return (engine_() >> 63) != 0; }
  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// True with probability p (p clamped to [0, 1]).
  bool bernoulli(double p);
  ByteArray16 bytes16();

  /// Independent child generator for sub-stream `stream`.
  SeededRng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive per-trial and per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Nonce gen_nonce(SeededRng& rng, const Suite& suite = default_suite());

}  // namespace wbanpriv::crypto
