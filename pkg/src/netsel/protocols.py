"""Imitation rules: how a payoff difference becomes a switch probability.

During one revision a focal user samples an opponent, observes the
payoff difference z = (opponent's payoff) - (own payoff), and copies the
opponent's network choice with probability q(z).  Any nondecreasing q
with values in [0, 1] is a valid rule.  Noise-free rules never imitate a
worse-off opponent (q(z) = 0 for z <= 0); noisy rules keep q(z) > 0
everywhere, so payoffs can be misjudged and suboptimal switches happen.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import model
from .model import NetworkParams

__all__ = [
    "ImitationRule",
    "PairwiseProportional",
    "Fermi",
    "CustomRule",
    "imitation_probability",
    "beta_reference",
    "fermi_from_ratio",
]


class ImitationRule(abc.ABC):
    """Nondecreasing map from a payoff difference to a switch probability."""

    @abc.abstractmethod
    def probability(self, payoff_diff: float) -> float:
        """Probability of copying the opponent given the payoff difference."""


@dataclass(frozen=True)
class PairwiseProportional(ImitationRule):
    """Noise-free rule: switch with probability proportional to the gain.

    q(z) = min(1, scale * z) for z > 0 and exactly 0 otherwise.  The cap
    at 1 keeps the value a probability; with the default scale it only
    engages for payoff gains above 1, far beyond the delay costs this
    model produces.
    """

    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be positive and finite, got {self.scale}")

    def probability(self, payoff_diff: float) -> float:
        if payoff_diff <= 0.0:
            return 0.0
        return min(1.0, self.scale * payoff_diff)


@dataclass(frozen=True)
class Fermi(ImitationRule):
    """Noisy logistic rule: q(z) = 1 / (1 + exp(-beta * z)).

    beta sets how sharply the decision reacts to the payoff difference.
    beta = 0 is a fair coin regardless of payoffs; large beta approaches
    the noise-free step function.  q is strictly positive everywhere and
    satisfies q(z) + q(-z) = 1.
    """

    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be nonnegative and finite, got {self.beta}")

    def probability(self, payoff_diff: float) -> float:
        z = self.beta * payoff_diff
        # Evaluate through exp of a nonpositive argument only, so large
        # |z| saturates to 0/1 instead of overflowing.
        if z >= 0.0:
            return 1.0 / (1.0 + math.exp(-z))
        e = math.exp(z)
        return e / (1.0 + e)


@dataclass(frozen=True)
class CustomRule(ImitationRule):
    """Wrap a user-supplied map from payoff difference to probability.

    The map must be nondecreasing with values in [0, 1]; both properties
    are spot-checked on an even grid over ``check_range`` at construction
    and a violation raises ValueError.  The check is a sanity net, not a
    proof — a function misbehaving between grid points will slip through.
    """

    fn: Callable[[float], float]
    check_range: tuple[float, float] = (-1.0, 1.0)
    check_points: int = field(default=129, repr=False)

    def __post_init__(self) -> None:
        lo, hi = self.check_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"check_range must be a finite interval, got {self.check_range}")
        if self.check_points < 2:
            raise ValueError("check_points must be at least 2")
        grid = np.linspace(lo, hi, self.check_points)
        values = [float(self.fn(z)) for z in grid]
        for z, v in zip(grid, values):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"rule value {v} at payoff difference {z} lies outside [0, 1]")
        for a, b in zip(values, values[1:]):
            if b < a - 1e-12:
                raise ValueError("rule is not nondecreasing on the check grid")

    def probability(self, payoff_diff: float) -> float:
        return float(self.fn(payoff_diff))


def imitation_probability(rule: ImitationRule, payoff_diff: float) -> float:
    """Evaluate a rule at one payoff difference."""
    return rule.probability(float(payoff_diff))


def beta_reference(params: NetworkParams, n: int) -> float:
    """Largest payoff-difference magnitude across states, max_k |pi_P(k) - pi_S|.

    This is the payoff scale of a population of n users and the natural
    unit for quoting Fermi intensities; see :func:`fermi_from_ratio`.
    """
    pi_s = model.utility_secondary(params)
    return max(
        abs(model.utility_primary(params, k, n) - pi_s) for k in range(n + 1)
    )


def fermi_from_ratio(params: NetworkParams, n: int, ratio: float) -> Fermi:
    """Fermi rule with its intensity expressed in payoff-scale units.

    A ratio of 0 yields the pure-noise fair coin.  A positive ratio r
    scales the logistic so the largest attainable payoff difference maps
    to an exponent of exactly r, i.e. beta = r / beta_reference(params, n).
    Quoting intensities this way makes runs comparable across parameter
    sets whose raw payoff magnitudes differ by orders of magnitude.
    """
    if not (math.isfinite(ratio) and ratio >= 0):
        raise ValueError(f"ratio must be nonnegative and finite, got {ratio}")
    if ratio == 0.0:
        return Fermi(beta=0.0)
    return Fermi(beta=ratio / beta_reference(params, n))
