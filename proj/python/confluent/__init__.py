"""Confluent dynamic flows: generators, solvers and simulation."""

import json

from ._confluent import (
    EXIT_ERROR,
    EXIT_INFEASIBLE,
    EXIT_OK,
    Error,
    Infeasible,
    PreconditionViolated,
    run,
)
from . import _confluent

__all__ = [
    "EXIT_ERROR",
    "EXIT_INFEASIBLE",
    "EXIT_OK",
    "Error",
    "Infeasible",
    "PreconditionViolated",
    "alphabeta",
    "greedy_makespan",
    "half_grid",
    "oracle_quickest",
    "run",
    "simulate_csv",
    "solve_quickest",
]


def half_grid(n, m, gadget="none"):
    """Half-grid network as a dict."""
    return json.loads(_confluent.half_grid(n, str(m), gadget))


def alphabeta(alpha, m, yes=True):
    """Alpha/beta gadget network as a dict."""
    return json.loads(_confluent.alphabeta(str(alpha), str(m), yes))


def _text(network):
    return network if isinstance(network, str) else json.dumps(network)


def solve_quickest(network, seed, trials=8):
    """Quickest confluent flow; returns claimed_time, lower_bound and the routing."""
    return json.loads(_confluent.solve_quickest(_text(network), seed, trials))


def oracle_quickest(network):
    """Exact quickest confluent flow time by tree enumeration."""
    return _confluent.oracle_quickest(_text(network))


def greedy_makespan(network, routing):
    """Makespan with every supply released at time 0 on a confluent routing."""
    return _confluent.greedy_makespan(_text(network), _text(routing))


def simulate_csv(network, dynamic_routing):
    """Trace CSV of a dynamic routing."""
    return _confluent.simulate_csv(_text(network), _text(dynamic_routing))
