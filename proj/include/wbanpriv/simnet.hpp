#pragma once

// Single-hop star network: an in-memory channel with an eavesdropper tap and
// random frame loss, plus a WBAN (sink + nodes) that runs honest protocol
// rounds over it.

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "wbanpriv/bytes.hpp"
#include "wbanpriv/crypto.hpp"
#include "wbanpriv/protocol.hpp"

namespace wbanpriv::simnet {

enum class Direction { node_to_sink, sink_to_node };

struct TranscriptEvent {
  Direction direction;
  Bytes bytes;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

/// Append-only record of everything put on the air.
class Transcript {
 public:
  void append(Direction d, ByteView bytes) {
    events_.push_back({d, Bytes(bytes.begin(), bytes.end())});
  }
  const std::vector<TranscriptEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// True if any event contains `needle` as a contiguous 16-byte window.
  bool contains(const ByteArray16& needle) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<TranscriptEvent> events_;
};

enum class Delivery { delivered, lost };

class Channel {
 public:
  /// loss_rate must lie in [0, 1].
  Channel(double loss_rate, crypto::SeededRng rng);

  /// Records the frame in the tap, then drops it with probability
  /// loss_rate. Throws FramingError unless the frame is 64 bytes.
  Delivery send(ByteView frame, Direction direction = Direction::node_to_sink);

  /// Oldest pending frame, if any.
  std::optional<protocol::Frame> recv();

  const Transcript& tap() const { return tap_; }
  Transcript tap_all() const { return tap_; }

  std::size_t pending() const { return pending_.size(); }
  double loss_rate() const { return loss_rate_; }

 private:
  double loss_rate_;
  crypto::SeededRng rng_;
  std::deque<protocol::Frame> pending_;
  Transcript tap_;
};

struct RoundOutcome {
  bool announce_delivered = false;
  bool verified = false;
  bool response_delivered = false;
  bool accepted = false;
  std::optional<protocol::ReceiverMatch> receiver;

  bool completed() const { return accepted; }
  /// Both frames reached their destination.
  bool fully_delivered() const { return announce_delivered && response_delivered; }
};

/// One sink and its provisioned nodes.
class Wban {
 public:
  struct Node {
    protocol::Uid uid;
    protocol::PairState state;
    crypto::SeededRng rng;
  };

  /// Draws `n_nodes` distinct Uids from `rng` and provisions them.
  Wban(std::size_t n_nodes, crypto::SeededRng rng,
       crypto::Suite suite = crypto::default_suite());

  std::size_t size() const { return nodes_.size(); }
  const crypto::Suite& suite() const { return suite_; }

  const Node& node(std::size_t i) const;
  Node& node(std::size_t i);
  const protocol::SinkRegistry& registry() const { return registry_; }

  /// Sink-side state for node i (newest window entry).
  protocol::PairState sink_state(std::size_t i) const;

  /// announce -> verify -> respond -> process, with both parties ratcheting
  /// on the response nonces. The sink ratchets and commits as soon as it
  /// has responded, whether or not the response arrives.
  RoundOutcome run_round(std::size_t i, Channel& channel);

  bool synchronized(std::size_t i) const;

  /// The sink's reaction to an arbitrary 64-byte frame: a response frame if
  /// it verifies as a fresh announce, otherwise nothing.
  std::optional<protocol::Frame> sink_handle(ByteView frame);

  /// The node's reaction to an arbitrary query: consume it if it is a valid
  /// response to the pending announce, then announce again.
  protocol::Frame node_handle(std::size_t i, ByteView query);

  crypto::SeededRng& sink_rng() { return sink_rng_; }

 private:
  crypto::Suite suite_;
  protocol::SinkRegistry registry_;
  std::vector<Node> nodes_;
  crypto::SeededRng sink_rng_;
};

}  // namespace wbanpriv::simnet
