"""Raft with pre-vote and per-link timeout tuning, simulated deterministically."""

import json

from ._core import (
    election_timeout_ms,
    heartbeat_interval_ms,
    preset_json,
    preset_names,
    required_heartbeats,
    tune,
    validate,
)
from ._core import run_json as _run_json


def preset(name):
    """A built-in preset as a scenario dict."""
    return json.loads(preset_json(name))


def run(scenario, reps=None, seed=None, threads=0):
    """Run a preset name, scenario dict or JSON text; returns the summary dict."""
    if isinstance(scenario, dict):
        scenario = json.dumps(scenario)
    return json.loads(_run_json(scenario, reps, seed, threads))


__all__ = [
    "election_timeout_ms",
    "heartbeat_interval_ms",
    "preset",
    "preset_json",
    "preset_names",
    "required_heartbeats",
    "run",
    "tune",
    "validate",
]
