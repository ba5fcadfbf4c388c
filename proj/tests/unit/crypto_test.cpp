#include "wbanpriv/crypto.hpp"

#include <bit>
#include <set>
#include <string>

#include "gtest/gtest.h"

#include "reference_sha1.hpp"

namespace wbanpriv::crypto {
namespace {

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

ByteArray16 arr(const std::array<std::uint8_t, 16>& a) { return a; }

TEST(ReferenceOracle, MatchesPublishedSha1Vectors) {
  // FIPS 180 examples; keeps the oracle itself honest.
  EXPECT_EQ(to_hex(oracle::sha1({})), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  EXPECT_EQ(to_hex(oracle::sha1(bytes_of("abc"))),
            "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(to_hex(oracle::sha1(bytes_of(
                "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
            "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
}

TEST(ReferenceOracle, MatchesRfc2202HmacVectors) {
  EXPECT_EQ(to_hex(oracle::hmac_sha1(Bytes(20, 0x0b), bytes_of("Hi There"))),
            "b617318655057264e28bc0b6fb378c8ef146be00");
  EXPECT_EQ(to_hex(oracle::hmac_sha1(bytes_of("Jefe"),
                                     bytes_of("what do ya want for nothing?"))),
            "effcdf6ae5eb2fa2d27416d5f184df9c259a7c79");
  // Key longer than the block size gets hashed first.
  EXPECT_EQ(to_hex(oracle::hmac_sha1(
                Bytes(80, 0xaa),
                bytes_of("Test Using Larger Than Block-Size Key - Hash Key First"))),
            "aa4ae5e15272d00e95705637ce8a3b55ed402112");
}

TEST(Hash, IsDeterministic) {
  const Bytes x = bytes_of("body area network");
  EXPECT_EQ(hash(x), hash(x));
}

TEST(Hash, EmptyInputIsTruncatedSha1) {
  EXPECT_EQ(hash({}).hex(), "da39a3ee5e6b4b0d3255bfef95601890");
  EXPECT_EQ(hash({}).bytes(), arr(oracle::hash128({})));
}

TEST(Hash, MatchesReferenceOnRandomInputs) {
  SeededRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Bytes data(rng.below(200));
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_u64());
    ASSERT_EQ(hash(data).bytes(), arr(oracle::hash128(data))) << "trial " << trial;
  }
}

TEST(Hash, SingleBitFlipChangesDigest) {
  Bytes x = bytes_of("pseudonym");
  Bytes y = x;
  y[3] ^= 0x10;
  EXPECT_NE(oracle::hash128(x), oracle::hash128(y));
  EXPECT_NE(hash(x), hash(y));
}

TEST(Hash, AvalancheOnSingleBitFlips) {
  SeededRng rng(5);
  std::size_t differing = 0;
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    Bytes data(32);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_u64());
    const auto before = hash(data);
    const auto bit = rng.below(data.size() * 8);
    data[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    const auto after = hash(data);
    for (std::size_t i = 0; i < kBlockBytes; ++i) {
      differing += std::popcount(static_cast<unsigned>(before.bytes()[i] ^ after.bytes()[i]));
    }
  }
  const double mean_fraction = static_cast<double>(differing) / (kTrials * 128.0);
  EXPECT_GE(mean_fraction, 0.25) << mean_fraction;
}

TEST(Prf, IsDeterministic) {
  const Digest128 k(SeededRng(1).bytes16());
  const Bytes d = bytes_of("Temp|n");
  EXPECT_EQ(prf(k, d), prf(k, d));
}

TEST(Prf, MatchesReferenceHmac) {
  SeededRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Digest128 k(rng.bytes16());
    Bytes d(rng.below(100));
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.next_u64());
    const Bytes key(k.bytes().begin(), k.bytes().end());
    ASSERT_EQ(prf(k, d).bytes(), arr(oracle::prf128(key, d))) << "trial " << trial;
  }
  EXPECT_EQ(prf(Digest128{}, bytes_of("abc")).hex(), "9b4a918f398d74d3e367970aba3cbe54");
}

TEST(Prf, KeySeparation) {
  SeededRng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Digest128 k1(rng.bytes16());
    Digest128 k2(rng.bytes16());
    while (k2 == k1) k2 = Digest128(rng.bytes16());
    const ByteArray16 d = rng.bytes16();
    ASSERT_NE(prf(k1, d), prf(k2, d)) << "trial " << trial;
  }
}

TEST(Hmac, GenericConstructionMatchesRfc2202) {
  const Bytes key(20, 0x0b);
  EXPECT_EQ(to_hex(hmac(*sha1(), key, bytes_of("Hi There"))),
            "b617318655057264e28bc0b6fb378c8ef146be00");
}

TEST(Suite, PluggableHashChangesOutputs) {
  const Suite modern(sha256());
  const Bytes x = bytes_of("abc");
  EXPECT_EQ(modern.hash(x).hex(), "ba7816bf8f01cfea414140de5dae2223");
  EXPECT_NE(modern.hash(x), hash(x));
  EXPECT_EQ(modern.algorithm().name(), "sha256");
}

TEST(Suite, ReducedSecurityParameterZeroFillsTail) {
  const Suite small(sha1(), 32);
  const auto d = small.hash(bytes_of("abc"));
  EXPECT_EQ(d.hex(), "a9993e36000000000000000000000000");
  SeededRng rng(1);
  const auto n = gen_nonce(rng, small);
  for (std::size_t i = 4; i < kBlockBytes; ++i) EXPECT_EQ(n.bytes()[i], 0);
}

TEST(Suite, RejectsInvalidSecurityParameter) {
  EXPECT_THROW(Suite(sha1(), 16), ConfigError);
  EXPECT_THROW(Suite(sha1(), 130), ConfigError);
  EXPECT_THROW(Suite(sha1(), 36), ConfigError);
  EXPECT_THROW(Suite(nullptr), ConfigError);
}

TEST(Suite, MeterCountsDataBytes) {
  UsageMeter meter;
  const Suite s = default_suite().metered(meter);
  s.hash(Bytes(32));
  s.prf(Digest128{}, Bytes(20));
  EXPECT_EQ(meter.hash_calls, 1u);
  EXPECT_EQ(meter.hash_bytes, 32u);
  EXPECT_EQ(meter.prf_calls, 1u);
  EXPECT_EQ(meter.prf_bytes, 20u);
  EXPECT_EQ(meter.total_bytes(), 52u);
}

TEST(GenNonce, SameSeedSameFirstNonce) {
  SeededRng a(42);
  SeededRng b(42);
  EXPECT_EQ(gen_nonce(a), gen_nonce(b));
}

TEST(GenNonce, SuccessiveNoncesDiffer) {
  SeededRng rng(42);
  const Nonce first = gen_nonce(rng);
  const Nonce second = gen_nonce(rng);
  EXPECT_NE(first, second);
}

TEST(GenNonce, TenThousandDrawsHaveNoDuplicates) {
  SeededRng rng(7);
  std::set<Nonce> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(gen_nonce(rng));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(SeededRng, BelowStaysInRangeAndCoversIt) {
  SeededRng rng(3);
  std::array<int, 5> counts{};
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.below(5);
    ASSERT_LT(v, 5u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_GT(c, 800);
  EXPECT_THROW(rng.below(0), ConfigError);
}

TEST(SeededRng, ForkIsDeterministicAndDistinct) {
  const SeededRng root(9);
  SeededRng a = root.fork(1);
  SeededRng b = root.fork(1);
  SeededRng c = root.fork(2);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(SeededRng, BernoulliEdges) {
  SeededRng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

TEST(Block128, HexRoundTripAndLengthCheck) {
  const auto d = Digest128::from_hex("000102030405060708090a0b0c0d0e0f");
  EXPECT_EQ(d.hex(), "000102030405060708090a0b0c0d0e0f");
  EXPECT_THROW(Digest128::from_hex("0001"), FramingError);
  EXPECT_THROW(from_hex("zz"), FramingError);
}

}  // namespace
}  // namespace wbanpriv::crypto
