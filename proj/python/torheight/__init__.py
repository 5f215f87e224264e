"""Exact convex-geometry engine for toric heights.

Thin dict-based wrappers over the compiled ``_core`` module, which
speaks JSON strings. Rationals appear as strings like ``"5/4"``; all
geometry payloads use the same schemas as the ``torheight`` CLI.
"""

import json as _json

from . import _core

__all__ = [
    "hull",
    "volume",
    "dual",
    "monge_ampere",
    "degree",
    "local_height",
    "pushforward",
    "global_height",
    "run_checks",
]


def _call(fn, payload, *args):
    return _json.loads(fn(_json.dumps(payload), *args))


def hull(points):
    """Convex hull of rational points (lists of ``"p/q"`` strings or ints)."""
    return _call(_core.hull_json, {"points": [[str(x) for x in p] for p in points]})


def volume(polytope):
    """Exact lattice-normalized ambient volume of a polytope payload."""
    return _call(_core.volume_json, polytope)["value"]


def dual(payload):
    """Legendre-Fenchel dual: ``{"pieces": ...}`` -> envelope and back."""
    return _call(_core.dual_json, payload)


def monge_ampere(pieces_payload):
    """Monge-Ampere measure of a concave min-form: vertex atoms."""
    return _call(_core.ma_json, pieces_payload)


def degree(psi_payload):
    """Degree of the toric line bundle of the support function ``Psi``."""
    return _call(_core.degree_json, {"Psi": psi_payload})["value"]


def local_height(big_psi_payload, psi_payload, gamma="divisible"):
    """Exact toric local height of the metric ``psi`` for ``Psi``."""
    payload = {"Psi": big_psi_payload, "psi": psi_payload}
    return _json.loads(_core.local_height_json(_json.dumps(payload), gamma))["value"]


def pushforward(psi_payload):
    """Tropical pushforward measure of ``psi`` (mass equals the degree)."""
    return _call(_core.pushforward_json, {"psi": psi_payload})


def global_height(instance, tol=1e-9):
    """Global height report of a fibration instance (dict schema as the CLI)."""
    return _call(_core.global_height_json, instance, tol)


def run_checks(seed=0):
    """Randomized invariant suite; returns per-property outcomes."""
    return _json.loads(_core.check_json(seed))
