#include "wbanpriv/simnet.hpp"

#include "gtest/gtest.h"

#include "wbanpriv/errors.hpp"

namespace wbanpriv::simnet {
namespace {

using crypto::SeededRng;

protocol::Frame frame_of(std::uint8_t fill) {
  protocol::Frame f{};
  f.fill(fill);
  return f;
}

TEST(Channel, LosslessDeliversInOrder) {
  Channel ch(0.0, SeededRng(1));
  for (std::uint8_t i = 0; i < 10; ++i) {
    EXPECT_EQ(ch.send(frame_of(i)), Delivery::delivered);
  }
  for (std::uint8_t i = 0; i < 10; ++i) {
    const auto f = ch.recv();
    ASSERT_TRUE(f);
    EXPECT_EQ((*f)[0], i);
  }
  EXPECT_FALSE(ch.recv());
}

TEST(Channel, TotalLossDeliversNothingButTapSeesAll) {
  Channel ch(1.0, SeededRng(1));
  for (std::uint8_t i = 0; i < 20; ++i) {
    EXPECT_EQ(ch.send(frame_of(i), Direction::sink_to_node), Delivery::lost);
  }
  EXPECT_EQ(ch.pending(), 0u);
  EXPECT_EQ(ch.tap().size(), 20u);
  EXPECT_EQ(ch.tap().events()[3].direction, Direction::sink_to_node);
  EXPECT_EQ(ch.tap_all(), ch.tap());
}

TEST(Channel, LossCountWithinExactBinomialInterval) {
  // Binomial(10000, 0.1): P(|X - 1000| <= 78) > 0.99.
  Channel ch(0.1, SeededRng(7));
  int lost = 0;
  for (int i = 0; i < 10000; ++i) {
    if (ch.send(frame_of(0)) == Delivery::lost) ++lost;
    (void)ch.recv();
  }
  EXPECT_GE(lost, 922);
  EXPECT_LE(lost, 1078);
}

TEST(Channel, RejectsBadInput) {
  EXPECT_THROW(Channel(-0.1, SeededRng(1)), ConfigError);
  EXPECT_THROW(Channel(1.5, SeededRng(1)), ConfigError);
  Channel ch(0.0, SeededRng(1));
  const Bytes short_frame(63);
  EXPECT_THROW(ch.send(short_frame), FramingError);
}

TEST(Transcript, ContainsFindsUnalignedWindows) {
  Transcript t;
  Bytes data(64, 0);
  for (std::size_t i = 0; i < 16; ++i) data[5 + i] = static_cast<std::uint8_t>(i + 1);
  t.append(Direction::node_to_sink, data);
  ByteArray16 needle{};
  for (std::size_t i = 0; i < 16; ++i) needle[i] = static_cast<std::uint8_t>(i + 1);
  EXPECT_TRUE(t.contains(needle));
  needle[15] = 0xff;
  EXPECT_FALSE(t.contains(needle));
}

TEST(Wban, UidsAreDistinctAndRegistered) {
  Wban w(8, SeededRng(3));
  EXPECT_EQ(w.size(), 8u);
  EXPECT_EQ(w.registry().size(), 8u);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(w.registry().find(w.node(i).uid)->index, i);
  }
  EXPECT_THROW(Wban(0, SeededRng(1)), ConfigError);
  EXPECT_THROW(w.node(8), ConfigError);
}

TEST(Wban, HonestRoundIsTwoFrames) {
  Wban w(2, SeededRng(4));
  Channel ch(0.0, SeededRng(5));
  const auto out = w.run_round(1, ch);
  EXPECT_TRUE(out.completed());
  EXPECT_TRUE(out.fully_delivered());
  EXPECT_EQ(*out.receiver, protocol::ReceiverMatch::broadcast);
  EXPECT_EQ(ch.tap().size(), 2u);
  EXPECT_TRUE(w.synchronized(1));
  EXPECT_FALSE(w.synchronized(0));

  const auto second = w.run_round(1, ch);
  EXPECT_EQ(*second.receiver, protocol::ReceiverMatch::current);
}

TEST(Wban, LostResponseIsRecoveredThroughPreviousPseudonym) {
  Wban w(1, SeededRng(4));
  Channel ok(0.0, SeededRng(5));
  ASSERT_TRUE(w.run_round(0, ok).completed());

  // Announce arrives, response is dropped: the sink has moved on.
  auto& node = w.node(0);
  const auto a = protocol::node_announce(node.state, node.rng, w.suite());
  node.state = a.state;
  ASSERT_TRUE(w.sink_handle(a.message.serialize()));
  EXPECT_FALSE(w.synchronized(0));

  const auto out = w.run_round(0, ok);
  EXPECT_TRUE(out.completed());
  EXPECT_EQ(*out.receiver, protocol::ReceiverMatch::previous);
  EXPECT_TRUE(w.synchronized(0));
}

TEST(Wban, SinkIgnoresGarbageAndReplays) {
  Wban w(2, SeededRng(6));
  EXPECT_FALSE(w.sink_handle(Bytes(64, 0x42)));
  EXPECT_FALSE(w.sink_handle(Bytes(10, 0x42)));
  const auto announce = w.node_handle(0, {});
  EXPECT_TRUE(w.sink_handle(announce));
  EXPECT_FALSE(w.sink_handle(announce));
}

TEST(Wban, NodeHandleConsumesValidResponse) {
  Wban w(1, SeededRng(6));
  const auto announce = w.node_handle(0, {});
  const auto response = w.sink_handle(announce);
  ASSERT_TRUE(response);
  (void)w.node_handle(0, *response);
  EXPECT_EQ(w.node(0).state.key->generation, 0u);  // fresh announce pending
  EXPECT_TRUE(w.node(0).state.has_peer);
}

}  // namespace
}  // namespace wbanpriv::simnet
