"""Visible lattice points along type-A random walks.

Thin Python layer over the native core: closed-form limits, Monte Carlo
simulation and exact rational oracles.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _core
from ._core import (
    RNG_VERSION,
    ConfigError,
    SizeError,
    UnsupportedModulus,
    coprime_pair_sum,
    delta,
    euler_product_two,
    gamma,
    mobius,
    mobius_floor_sum,
    tau,
    theory_constants,
    zeta,
)

__all__ = [
    "RNG_VERSION",
    "ConfigError",
    "SizeError",
    "UnsupportedModulus",
    "L_charsum",
    "L_dp",
    "coprime_pair_sum",
    "delta",
    "euler_product_two",
    "exact_pair_prob",
    "exact_visible_prob",
    "gamma",
    "mobius",
    "mobius_floor_sum",
    "simulate",
    "tau",
    "theory_constants",
    "zeta",
]


def _law(values: Iterable) -> list[str]:
    return [str(Fraction(v)) if not isinstance(v, str) else v for v in values]


def simulate(config: Mapping, steps: int, paths: int, modulus: int = 1, parallelism: int = 1) -> dict:
    """Run `paths` walks of `steps` steps; returns the JSON result as a dict."""
    return json.loads(_core.simulate(json.dumps(dict(config)), steps, paths, modulus, parallelism))


def exact_visible_prob(steps: Sequence[Iterable]) -> Fraction:
    """P(p_n visible) for per-step direction laws given as Fractions or "p/q" strings."""
    return Fraction(_core.exact_visible_prob([_law(s) for s in steps]))


def exact_pair_prob(steps: Sequence[Iterable]) -> Fraction:
    """P(p_n and p_{n+1} both visible) for a schedule of n+1 steps."""
    return Fraction(_core.exact_pair_prob([_law(s) for s in steps]))


def L_dp(counts: Sequence[int], alphas: Sequence[Iterable], d: int, g: Sequence[int] = ()) -> Fraction:
    """Exact probability that the first k-1 direction counts are congruent to g mod d."""
    return Fraction(_core.L_dp(list(counts), [_law(a) for a in alphas], d, list(g)))


def L_charsum(counts: Sequence[int], alphas: Sequence[Iterable], d: int, g: Sequence[int] = ()) -> complex:
    """The same probability from the additive-character expansion, in floating point."""
    return _core.L_charsum(list(counts), [_law(a) for a in alphas], d, list(g))
