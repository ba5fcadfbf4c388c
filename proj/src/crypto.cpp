#include "wbanpriv/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <string>

namespace wbanpriv::crypto {

namespace {

class EvpHash final : public HashAlgorithm {
 public:
  EvpHash(const EVP_MD* md, std::string_view name)
      : md_(md), name_(name) {}

  std::string_view name() const override { return name_; }
  std::size_t block_size() const override {
    return static_cast<std::size_t>(EVP_MD_get_block_size(md_));
  }
  std::size_t digest_size() const override {
    return static_cast<std::size_t>(EVP_MD_get_size(md_));
  }

  Bytes digest(ByteView data) const override {
    Bytes out(digest_size());
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md_,
                   nullptr) != 1) {
      throw Error(std::string("EVP_Digest failed for ") + std::string(name_));
    }
    out.resize(len);
    return out;
  }

 private:
  const EVP_MD* md_;
  std::string_view name_;
};

ByteArray16 truncate16(const Bytes& full) {
  ByteArray16 out{};
  std::copy_n(full.begin(), kBlockBytes, out.begin());
  return out;
}

}  // namespace

std::shared_ptr<const HashAlgorithm> sha1() {
  static const auto instance = std::make_shared<const EvpHash>(EVP_sha1(), "sha1");
  return instance;
}

std::shared_ptr<const HashAlgorithm> sha256() {
  static const auto instance =
      std::make_shared<const EvpHash>(EVP_sha256(), "sha256");
  return instance;
}

Bytes hmac(const HashAlgorithm& algorithm, ByteView key, ByteView data) {
  const std::size_t block = algorithm.block_size();
  Bytes k(key.begin(), key.end());
  if (k.size() > block) {
    k = algorithm.digest(k);
  }
  k.resize(block, 0);

  Bytes inner(block + data.size());
  Bytes outer(block + algorithm.digest_size());
  for (std::size_t i = 0; i < block; ++i) {
    inner[i] = k[i] ^ 0x36;
    outer[i] = k[i] ^ 0x5c;
  }
  std::copy(data.begin(), data.end(), inner.begin() + block);
  const Bytes inner_digest = algorithm.digest(inner);
  std::copy(inner_digest.begin(), inner_digest.end(), outer.begin() + block);
  return algorithm.digest(outer);
}

Suite::Suite(std::shared_ptr<const HashAlgorithm> algorithm, unsigned k_bits)
    : algorithm_(std::move(algorithm)), k_bits_(k_bits) {
  if (!algorithm_) {
    throw ConfigError("hash algorithm must not be null");
  }
  if (algorithm_->digest_size() < kBlockBytes) {
    throw ConfigError("hash digest shorter than 128 bits");
  }
  if (k_bits_ < kMinKBits || k_bits_ > kDefaultKBits || k_bits_ % 8 != 0) {
    throw ConfigError("k_bits must be a multiple of 8 in [32, 128], got " +
                      std::to_string(k_bits_));
  }
}

ByteArray16 Suite::mask(ByteArray16 value) const {
  std::fill(value.begin() + k_bits_ / 8, value.end(), std::uint8_t{0});
  return value;
}

Digest128 Suite::hash(ByteView data) const {
  if (meter_) {
    ++meter_->hash_calls;
    meter_->hash_bytes += data.size();
  }
  return Digest128(mask(truncate16(algorithm_->digest(data))));
}

Digest128 Suite::prf(const Digest128& key, ByteView data) const {
  if (meter_) {
    ++meter_->prf_calls;
    meter_->prf_bytes += data.size();
  }
  return Digest128(mask(truncate16(hmac(*algorithm_, key.view(), data))));
}

Suite Suite::metered(UsageMeter& meter) const {
  Suite copy = *this;
  copy.meter_ = &meter;
  return copy;
}

const Suite& default_suite() {
  static const Suite suite;
  return suite;
}

Digest128 hash(ByteView data) { return default_suite().hash(data); }

Digest128 prf(const Digest128& key, ByteView data) {
  return default_suite().prf(key, data);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

SeededRng SeededRng::from_entropy() {
  std::random_device rd;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  return SeededRng(seed);
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) {
    throw ConfigError("SeededRng::below requires a positive bound");
  }
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine_();
  while (x >= limit) {
    x = engine_();
  }
  return x % bound;
}

bool SeededRng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return u < p;
}

ByteArray16 SeededRng::bytes16() {
  ByteArray16 out{};
  for (int half = 0; half < 2; ++half) {
    std::uint64_t w = engine_();
    for (int i = 7; i >= 0; --i) {
      out[half * 8 + i] = static_cast<std::uint8_t>(w & 0xff);
      w >>= 8;
    }
  }
  return out;
}

SeededRng SeededRng::fork(std::uint64_t stream) const {
  return SeededRng(mix_seed(seed_, stream));
}

Nonce gen_nonce(SeededRng& rng, const Suite& suite) {
  return Nonce(suite.mask(rng.bytes16()));
}

}  // namespace wbanpriv::crypto
