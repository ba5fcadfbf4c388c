#include "wbanpriv/energy.hpp"

#include "wbanpriv/crypto.hpp"
#include "wbanpriv/errors.hpp"
#include "wbanpriv/protocol.hpp"

namespace wbanpriv::energy {

std::string MicroJoules::str() const {
  const bool negative = tenths_ < 0;
  const std::uint64_t mag =
      negative ? static_cast<std::uint64_t>(-(tenths_ + 1)) + 1
               : static_cast<std::uint64_t>(tenths_);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / 10);
  out += '.';
  out += static_cast<char>('0' + mag % 10);
  return out;
}

std::string_view to_string(Convention c) {
  return c == Convention::paper ? "paper" : "strict";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::hash:
      return "hash";
    case Category::tx:
      return "tx";
    case Category::rx:
      return "rx";
  }
  return "unknown";
}

void EnergyCostModel::validate() const {
  if (hash_per_byte.tenths() < 0 || tx_per_byte.tenths() < 0 ||
      rx_per_byte.tenths() < 0) {
    throw ConfigError("energy rates must be non-negative");
  }
}

MicroJoules cost_of(const EnergyCostModel& model, Category category,
                    std::uint64_t bytes) {
  model.validate();
  MicroJoules rate;
  switch (category) {
    case Category::hash:
      rate = model.hash_per_byte;
      break;
    case Category::tx:
      rate = model.tx_per_byte;
      break;
    case Category::rx:
      rate = model.rx_per_byte;
      break;
  }
  return MicroJoules::from_tenths(rate.tenths() * static_cast<std::int64_t>(bytes));
}

ByteCounts paper_round_bytes() { return ByteCounts{32, 32, 32}; }

ByteCounts measure_node_round_bytes() {
  using namespace protocol;
  crypto::UsageMeter meter;
  const crypto::Suite& plain = crypto::default_suite();
  const crypto::Suite node_suite = plain.metered(meter);
  crypto::SeededRng node_rng(1);
  crypto::SeededRng sink_rng(2);

  const Uid uid(crypto::SeededRng(0).bytes16());
  SinkRegistry registry(plain);
  registry.register_node(uid);

  // The template is provisioned once, not recomputed per round.
  PairState node = make_node_state(uid, plain);

  ByteCounts counts;
  const Step announce = node_announce(node, node_rng, node_suite);
  counts.tx += announce.message.serialize().size();

  const auto verified = sink_verify(registry, announce.message);
  if (!verified) throw InternalInconsistency("honest announce did not verify");
  const Step response = sink_respond(verified->state, sink_rng, plain);
  counts.rx += response.message.serialize().size();

  const auto accepted =
      node_process_response(announce.state, response.message, node_suite);
  if (!accepted) throw InternalInconsistency("honest response rejected");
  ratchet(*accepted, response.message.n1, response.message.n2, node_suite);

  counts.hash = meter.total_bytes();
  return counts;
}

EnergyReport report_for(const EnergyCostModel& model, const ByteCounts& bytes) {
  EnergyReport r;
  r.convention = model.convention;
  r.bytes = bytes;
  r.compute = cost_of(model, Category::hash, bytes.hash);
  r.tx = cost_of(model, Category::tx, bytes.tx);
  r.rx = cost_of(model, Category::rx, bytes.rx);
  r.total = r.compute + r.tx + r.rx;
  return r;
}

EnergyReport round_energy(const EnergyCostModel& model) {
  return report_for(model, model.convention == Convention::paper
                               ? paper_round_bytes()
                               : measure_node_round_bytes());
}

}  // namespace wbanpriv::energy
