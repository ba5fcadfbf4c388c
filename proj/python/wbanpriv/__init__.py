"""Pseudonym-ratcheting location privacy for wireless body area networks."""

import json as _json

from ._core import (
    FRAME_BYTES,
    SCHEMA_VERSION,
    ConfigError,
    ProtocolError,
    derive_template,
    hash,
    honest_round,
    prf,
    run_experiment,
    wilson_interval,
)

__version__ = "0.1.0"


def run_game(game=1, protocol="proposed", **kwargs):
    """Run an attack game and return the parsed report."""
    return _json.loads(run_experiment("run-game", protocol=protocol, game=game, **kwargs))


def simulate(**kwargs):
    """Run honest rounds over a lossy channel and return the parsed report."""
    return _json.loads(run_experiment("simulate", **kwargs))


def energy_report():
    """Per-round energy under both accounting conventions."""
    return _json.loads(run_experiment("energy-report"))


__all__ = [
    "FRAME_BYTES",
    "SCHEMA_VERSION",
    "ConfigError",
    "ProtocolError",
    "derive_template",
    "energy_report",
    "hash",
    "honest_round",
    "prf",
    "run_experiment",
    "run_game",
    "simulate",
    "wilson_interval",
]
