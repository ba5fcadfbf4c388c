#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "wbanpriv/crypto.hpp"
#include "wbanpriv/experiment.hpp"
#include "wbanpriv/protocol.hpp"

namespace py = pybind11;
using namespace wbanpriv;

namespace {

ByteView as_view(const py::bytes& b, std::string& storage) {
  storage = b;
  return ByteView(reinterpret_cast<const std::uint8_t*>(storage.data()),
                  storage.size());
}

py::bytes to_py(ByteView v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::string run_experiment(const std::string& command, const std::string& protocol,
                           int game, std::size_t trials, std::size_t nodes,
                           std::uint64_t seed, std::optional<std::uint32_t> q_s,
                           std::optional<std::uint32_t> q_r,
                           std::optional<std::uint32_t> q_e, double loss_rate,
                           unsigned k_bits) {
  experiment::ExperimentSpec spec;
  const auto cmd = experiment::parse_command(command);
  if (!cmd) throw ConfigError("command: unknown '" + command + "'");
  const auto kind = adversary::parse_protocol(protocol);
  if (!kind) throw ConfigError("protocol: unknown '" + protocol + "'");
  spec.command = *cmd;
  spec.protocol = *kind;
  spec.game = game;
  spec.trials = trials;
  spec.nodes = nodes;
  spec.seed = seed;
  spec.loss_rate = loss_rate;
  spec.k_bits = k_bits;
  if (q_s || q_r || q_e) {
    const auto d = adversary::GameConfig::default_budget(nodes);
    spec.budget = adversary::OracleBudget{q_s.value_or(d.q_s), q_r.value_or(d.q_r),
                                          q_e.value_or(d.q_e)};
  }
  py::gil_scoped_release release;
  return experiment::run_json(spec).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudonym-ratcheting location privacy for body area networks.";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.attr("SCHEMA_VERSION") = experiment::kSchemaVersion;
  m.attr("FRAME_BYTES") = protocol::kFrameBytes;

  m.def("hash", [](const py::bytes& data) {
    std::string s;
    return to_py(crypto::hash(as_view(data, s)).view());
  }, py::arg("data"), "SHA-1 truncated to 128 bits.");

  m.def("prf", [](const py::bytes& key, const py::bytes& data) {
    std::string k;
    std::string d;
    const auto key_block = crypto::Digest128::from_bytes(as_view(key, k));
    return to_py(crypto::prf(key_block, as_view(data, d)).view());
  }, py::arg("key"), py::arg("data"), "HMAC-SHA-1 truncated to 128 bits.");

  m.def("derive_template", [](const py::bytes& uid) {
    std::string s;
    return to_py(protocol::derive_template(protocol::Uid::from_bytes(as_view(uid, s))).view());
  }, py::arg("uid"));

  m.def("honest_round", [](std::uint64_t seed) {
    // One round between a single node and its sink; returns both frames.
    simnet::Wban wban(1, crypto::SeededRng(seed));
    simnet::Channel channel(0.0, crypto::SeededRng(seed).fork(2));
    const auto outcome = wban.run_round(0, channel);
    py::list frames;
    for (const auto& e : channel.tap().events()) frames.append(to_py(e.bytes));
    py::dict out;
    out["frames"] = frames;
    out["completed"] = outcome.completed();
    out["synchronized"] = wban.synchronized(0);
    return out;
  }, py::arg("seed"));

  m.def("wilson_interval", [](std::size_t wins, std::size_t trials) {
    const auto e = adversary::wilson_interval(wins, trials);
    return py::make_tuple(e.win_rate, e.ci_low, e.ci_high);
  }, py::arg("wins"), py::arg("trials"));

  m.def("run_experiment", &run_experiment, py::arg("command"),
        py::arg("protocol") = "proposed", py::arg("game") = 1,
        py::arg("trials") = 1000, py::arg("nodes") = 5, py::arg("seed") = 1,
        py::arg("q_s") = py::none(), py::arg("q_r") = py::none(),
        py::arg("q_e") = py::none(), py::arg("loss_rate") = 0.0,
        py::arg("k_bits") = 128,
        "Run an experiment and return its JSON report as a string.");
}
