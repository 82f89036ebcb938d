"""Closed-form constants and inequality oracles.

* alpha_bound: the contraction constant alpha < 1 bounding E(1/||AY||) over
  unit vectors Y, obtained by maximizing a(sigma2-a)^2 / (f*D*(1+a)) over
  a in (0, sigma2). The default factor f = 7 matches the conservative
  fourth-moment bound used to derive the constant; a sharper factor can be
  passed explicitly (f = 3 is valid for unit-variance signs).
* moment_tail_bound: the Paley-Zygmund-style lower bound for P(zeta >= a)
  from the mean and a higher moment of a nonnegative variable.
* verify_alpha_mc: Monte Carlo check that E(1/||AY||) <= alpha for a given
  unit vector, where ||AY|| = sqrt(1 + (<eps, Y>)^2).
* lo_max_atom: exact largest atom of a signed sum of nonzero integer
  coefficients, by dynamic programming over attainable sums. Probabilities
  are dyadic rationals and are kept exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import TableBudgetError
from .laws import CoefficientLaw, RngStream, sample_row
from .util import golden_max

__all__ = [
    "AlphaResult",
    "McCheck",
    "LoResult",
    "alpha_bound",
    "moment_tail_bound",
    "verify_alpha_mc",
    "lo_max_atom",
]


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    argmax_a: float
    sigma2: float
    fourth_moment: float
    zeta_sq_factor: float


def alpha_bound(sigma2: float, fourth_moment: float, zeta_sq_factor: float = 7.0) -> AlphaResult:
    """Contraction constant alpha = 1 - max_a a(sigma2-a)^2/(f*D*(1+a)).

    The maximization runs a dense grid over (0, sigma2) followed by
    golden-section refinement to |da| < 1e-9; the objective is smooth and
    unimodal there.
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    if fourth_moment < sigma2**2:
        raise ValueError("fourth moment below sigma2^2 violates Jensen")
    if zeta_sq_factor <= 0:
        raise ValueError("zeta_sq_factor must be positive")
    scale = zeta_sq_factor * fourth_moment

    def f(a: float) -> float:
        return a * (sigma2 - a) ** 2 / (scale * (1.0 + a))

    grid = np.linspace(0.0, sigma2, 10_001)[1:-1]
    vals = grid * (sigma2 - grid) ** 2 / (scale * (1.0 + grid))
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    a_star, f_star = golden_max(f, float(lo), float(hi), 1e-9)
    if vals[i] > f_star:
        a_star, f_star = float(grid[i]), float(vals[i])
    return AlphaResult(
        alpha=1.0 - f_star,
        argmax_a=a_star,
        sigma2=sigma2,
        fourth_moment=fourth_moment,
        zeta_sq_factor=zeta_sq_factor,
    )


def moment_tail_bound(mean_zeta: float, moment_zeta_1h: float, h: float, a: float) -> float:
    """Lower bound for P(zeta >= a): (E zeta - a)^((1+h)/h) / (E zeta^(1+h))^(1/h)."""
    if h <= 0:
        raise ValueError("h must be positive")
    if not 0 < a < mean_zeta:
        raise ValueError("need 0 < a < mean")
    if moment_zeta_1h < mean_zeta ** (1.0 + h):
        raise ValueError("moment below mean^(1+h) violates Jensen")
    return (mean_zeta - a) ** ((1.0 + h) / h) / moment_zeta_1h ** (1.0 / h)


@dataclass(frozen=True)
class McCheck:
    empirical_mean: float
    stderr: float
    alpha: float
    samples: int
    passed: bool


def verify_alpha_mc(
    law: CoefficientLaw,
    y: np.ndarray,
    samples: int,
    rng: RngStream,
    alpha: float | None = None,
) -> McCheck:
    """Monte Carlo check of E[(1 + <eps, y>^2)^(-1/2)] <= alpha for unit y.

    Draws `samples` fresh coefficient rows; passes when the empirical mean
    is below alpha + 3 standard errors. alpha defaults to the bound for the
    law's own moments.
    """
    y = np.asarray(y, dtype=float)
    if abs(float(np.linalg.norm(y)) - 1.0) > 1e-12:
        raise ValueError("y must be a unit vector to within 1e-12")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if alpha is None:
        alpha = alpha_bound(law.sigma2, law.fourth_moment).alpha

    k = y.size
    total = 0.0
    total_sq = 0.0
    done = 0
    block = max(1, (1 << 22) // max(k, 1))  # bound the (block, k) draw matrix
    while done < samples:
        b = min(block, samples - done)
        eps = sample_row(law, rng, b * k).reshape(b, k)
        g = eps @ y
        vals = 1.0 / np.sqrt(1.0 + g * g)
        total += float(vals.sum())
        total_sq += float(vals @ vals)
        done += b
    mean = total / samples
    var = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    stderr = math.sqrt(var / samples)
    return McCheck(
        empirical_mean=mean,
        stderr=stderr,
        alpha=alpha,
        samples=samples,
        passed=mean <= alpha + 3.0 * stderr,
    )


@dataclass(frozen=True)
class LoResult:
    """Exact anti-concentration data for a signed sum of integers."""

    k: int
    coefficients: tuple[int, ...]
    max_atom: Fraction
    max_count: int

    def atom_string(self) -> str:
        """Unreduced rendering count/2^k."""
        return f"{self.max_count}/2^{self.k}"


_LO_TABLE_BUDGET = 1 << 22  # entries in the DP table over attainable sums


def lo_max_atom(coefficients: Sequence[int]) -> LoResult:
    """Largest atom of sum_i eps_i * b_i over uniform signs, exactly.

    Dynamic programming over the attainable sums counts sign patterns with
    64-bit integers (total mass 2^k <= 2^40 cannot overflow); the atom is
    returned as an exact dyadic rational.
    """
    coeffs = [int(b) for b in coefficients]
    k = len(coeffs)
    if k == 0:
        raise ValueError("need at least one coefficient")
    if any(b == 0 for b in coeffs):
        raise ValueError("all coefficients must be nonzero")
    if k > 40:
        raise TableBudgetError(f"k={k} exceeds the exact-count limit of 40")
    span = sum(abs(b) for b in coeffs)
    size = 2 * span + 1
    if size > _LO_TABLE_BUDGET:
        raise TableBudgetError(f"sum of |coefficients| {span} exceeds the table budget")

    counts = np.zeros(size, dtype=np.int64)
    counts[span] = 1  # offset representation: sum s lives at index s + span
    for b in coeffs:
        nxt = np.zeros(size, dtype=np.int64)
        shift = abs(b)
        nxt[shift:] += counts[: size - shift]
        nxt[: size - shift] += counts[shift:]
        counts = nxt
    max_count = int(counts.max())
    return LoResult(
        k=k,
        coefficients=tuple(coeffs),
        max_atom=Fraction(max_count, 2**k),
        max_count=max_count,
    )
