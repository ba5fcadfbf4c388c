#include "wbanpriv/simnet.hpp"

#include <algorithm>
#include <string>

namespace wbanpriv::simnet {

using protocol::Frame;
using protocol::WireMessage;

bool Transcript::contains(const ByteArray16& needle) const {
  return std::any_of(events_.begin(), events_.end(), [&](const auto& e) {
    return contains_window(e.bytes, needle);
  });
}

Channel::Channel(double loss_rate, crypto::SeededRng rng)
    : loss_rate_(loss_rate), rng_(std::move(rng)) {
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0)) {
    throw ConfigError("loss_rate must be in [0, 1], got " +
                      std::to_string(loss_rate));
  }
}

Delivery Channel::send(ByteView frame, Direction direction) {
  if (frame.size() != protocol::kFrameBytes) {
    throw FramingError("channel frames must be 64 bytes, got " +
                       std::to_string(frame.size()));
  }
  tap_.append(direction, frame);
  if (rng_.bernoulli(loss_rate_)) {
    return Delivery::lost;
  }
  Frame f{};
  std::copy(frame.begin(), frame.end(), f.begin());
  pending_.push_back(f);
  return Delivery::delivered;
}

std::optional<Frame> Channel::recv() {
  if (pending_.empty()) return std::nullopt;
  Frame f = pending_.front();
  pending_.pop_front();
  return f;
}

Wban::Wban(std::size_t n_nodes, crypto::SeededRng rng, crypto::Suite suite)
    : suite_(std::move(suite)), registry_(suite_), sink_rng_(rng.fork(1)) {
  if (n_nodes == 0) {
    throw ConfigError("a WBAN needs at least one node");
  }
  crypto::SeededRng uid_rng = rng.fork(0);
  nodes_.reserve(n_nodes);
  while (nodes_.size() < n_nodes) {
    const protocol::Uid uid(uid_rng.bytes16());
    if (registry_.find(uid)) continue;
    registry_.register_node(uid);
    nodes_.push_back(Node{uid, protocol::make_node_state(uid, suite_),
                          rng.fork(100 + nodes_.size())});
  }
}

const Wban::Node& Wban::node(std::size_t i) const {
  if (i >= nodes_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  return nodes_[i];
}

Wban::Node& Wban::node(std::size_t i) {
  if (i >= nodes_.size()) {
    throw ConfigError("node index " + std::to_string(i) + " out of range");
  }
  return nodes_[i];
}

protocol::PairState Wban::sink_state(std::size_t i) const {
  return registry_.current(protocol::NodeHandle{i});
}

bool Wban::synchronized(std::size_t i) const {
  return protocol::synchronized(node(i).state, sink_state(i));
}

RoundOutcome Wban::run_round(std::size_t i, Channel& channel) {
  RoundOutcome out;
  Node& nd = node(i);

  auto announce = protocol::node_announce(nd.state, nd.rng, suite_);
  nd.state = announce.state;
  out.announce_delivered = channel.send(announce.message.serialize(),
                                        Direction::node_to_sink) ==
                           Delivery::delivered;
  if (!out.announce_delivered) return out;

  const auto at_sink = channel.recv();
  const auto verified =
      protocol::sink_verify(registry_, WireMessage::parse(*at_sink));
  if (!verified) return out;
  if (verified->handle.index != i) {
    throw InternalInconsistency("announce resolved to the wrong node");
  }
  out.verified = true;
  out.receiver = verified->receiver;

  auto response = protocol::sink_respond(verified->state, sink_rng_, suite_);
  const auto& r = response.message;
  registry_.commit(verified->handle,
                   protocol::ratchet(response.state, r.n1, r.n2, suite_),
                   announce.message.n1, announce.message.n2);

  out.response_delivered =
      channel.send(r.serialize(), Direction::sink_to_node) == Delivery::delivered;
  if (!out.response_delivered) return out;

  const auto at_node = channel.recv();
  const auto msg = WireMessage::parse(*at_node);
  const auto accepted = protocol::node_process_response(nd.state, msg, suite_);
  if (!accepted) return out;
  nd.state = protocol::ratchet(*accepted, msg.n1, msg.n2, suite_);
  out.accepted = true;
  return out;
}

std::optional<Frame> Wban::sink_handle(ByteView frame) {
  if (frame.size() != protocol::kFrameBytes) return std::nullopt;
  const auto msg = WireMessage::parse(frame);
  const auto verified = protocol::sink_verify(registry_, msg);
  if (!verified) return std::nullopt;
  auto response = protocol::sink_respond(verified->state, sink_rng_, suite_);
  const auto& r = response.message;
  registry_.commit(verified->handle,
                   protocol::ratchet(response.state, r.n1, r.n2, suite_),
                   msg.n1, msg.n2);
  return r.serialize();
}

Frame Wban::node_handle(std::size_t i, ByteView query) {
  Node& nd = node(i);
  if (query.size() == protocol::kFrameBytes) {
    const auto msg = WireMessage::parse(query);
    if (auto accepted = protocol::node_process_response(nd.state, msg, suite_)) {
      nd.state = protocol::ratchet(*accepted, msg.n1, msg.n2, suite_);
    }
  }
  auto announce = protocol::node_announce(nd.state, nd.rng, suite_);
  nd.state = announce.state;
  return announce.message.serialize();
}

}  // namespace wbanpriv::simnet
