"""Gaussian-law machinery: contraction functional, quadrature, coupling.

Two copies of the normalized chain driven by the same Gaussian noise align
exponentially fast. With rho the inner product of the two unit states and
a^2 = 1 - rho^2 the squared misalignment, one step multiplies a^2 by b,
where log b = F(rho, g, w) for the standard Gaussian pair (g, w). This
module evaluates F, its expectation over (g, w) by tensor Gauss-Hermite
quadrature, the worst case eta = max_rho E F, and the scalar coupling
recursion itself. It also computes the log-moment constants that give the
growth rate of the Gaussian full-history recursion in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from .laws import RngStream
from .util import golden_max

__all__ = [
    "CouplingTrace",
    "EtaResult",
    "LogMoments",
    "contraction_f",
    "expected_f",
    "eta",
    "couple",
    "gaussian_log_moments",
]

_LIMIT_A2 = 1e-12  # below this squared misalignment, use the rho = 1 limit form


def contraction_f(rho: float, g, w, convention: str = "minus"):
    """log of the one-step misalignment ratio, F(rho, g, w).

    g and w may be scalars or arrays. The default "minus" convention writes
    the misaligned component as ((1-rho)g - aw)/a, which keeps the first
    log argument nonnegative pointwise; "plus" flips the sign of w
    everywhere, which changes nothing in distribution (w is symmetric) and
    exists for A/B comparison of the two printed forms. At rho = 1 the
    formula is the analytic limit log(1+g^2+w^2) - 2 log(1+g^2), entered
    whenever a^2 < 1e-12.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    if convention == "plus":
        w = np.negative(w)
    elif convention != "minus":
        raise ValueError(f"unknown convention {convention!r}")
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    a2 = 1.0 - rho * rho
    if a2 < _LIMIT_A2:
        out = np.log1p(g * g + w * w) - 2.0 * np.log1p(g * g)
    else:
        a = math.sqrt(a2)
        gt = rho * g + a * w
        b = ((1.0 - rho) * g - a * w) / a
        out = np.log1p(b * b + 2.0 * g * gt / (1.0 + rho)) - np.log1p(g * g) - np.log1p(gt * gt)
    if out.ndim == 0:
        return float(out)
    return out


@lru_cache(maxsize=8)
def _gh_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Probabilists' Gauss-Hermite nodes and weights normalized to sum 1."""
    x, w = hermegauss(order)
    return x, w / math.sqrt(2.0 * math.pi)


@lru_cache(maxsize=8)
def _gh_tensor(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, w = _gh_nodes(order)
    g_nodes, w_nodes = np.meshgrid(x, x, indexing="ij")
    return g_nodes, w_nodes, np.outer(w, w)


def expected_f(rho: float, quad_order: int = 80, convention: str = "minus") -> float:
    """E F(rho, g, w) over independent standard normals, by tensor quadrature."""
    if quad_order < 20:
        raise ValueError("quad_order must be >= 20")
    g, w, ww = _gh_tensor(quad_order)
    return float(np.sum(ww * contraction_f(rho, g, w, convention)))


@dataclass(frozen=True)
class EtaResult:
    rho_grid: np.ndarray
    mean_f: np.ndarray
    eta_hat: float
    argmax_rho: float
    quad_order: int


def eta(quad_order: int = 80, grid_size: int = 201, convention: str = "minus") -> EtaResult:
    """Worst-case expected contraction: max over rho in [0,1] of E F.

    Scans a uniform grid and refines around the best point by golden
    section to |drho| < 1e-6. The grid table is kept for inspection; the
    expectation turns out to be numerically flat in rho, so the argmax
    carries little information beyond the value itself.
    """
    if grid_size < 101:
        raise ValueError("grid_size must be >= 101")
    rhos = np.linspace(0.0, 1.0, grid_size)
    vals = np.array([expected_f(r, quad_order, convention) for r in rhos])
    i = int(np.argmax(vals))
    lo = float(rhos[max(i - 1, 0)])
    hi = float(rhos[min(i + 1, grid_size - 1)])
    arg, val = golden_max(lambda r: expected_f(r, quad_order, convention), lo, hi, 1e-6)
    if vals[i] > val:
        arg, val = float(rhos[i]), float(vals[i])
    return EtaResult(
        rho_grid=rhos,
        mean_f=vals,
        eta_hat=val,
        argmax_rho=arg,
        quad_order=quad_order,
    )


@dataclass
class CouplingTrace:
    """Series (rho_n, log a_n^2, log b_n) of the two-chain coupling."""

    rho: np.ndarray
    log_a2: np.ndarray
    log_b: np.ndarray

    @property
    def mean_log_b(self) -> float:
        return float(np.mean(self.log_b[1:]))


def couple(n: int, rng: RngStream, rho0: float = 0.0) -> CouplingTrace:
    """Evolve the scalar coupling recursion for n steps from overlap rho0.

    Only the scalar misalignment is tracked: log a^2 is evolved additively
    by F(rho, g, w) and rho recovered as sqrt(1 - exp(log a^2)), clamped to
    [0, 1]. Once a^2 underflows the limit form of F takes over on its own.
    Step t draws its (g, w) pair at rng row t-1, so a trace is a pure
    function of (seed, stream, rho0).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= rho0 < 1.0:
        raise ValueError("rho0 must lie in [0, 1)")
    rho = np.empty(n + 1)
    log_a2 = np.empty(n + 1)
    log_b = np.zeros(n + 1)
    r = rho0
    la2 = math.log1p(-rho0 * rho0)
    rho[0] = r
    log_a2[0] = la2
    for t in range(1, n + 1):
        rng.seek_row(t - 1)
        gw = rng.normals(2)
        f = contraction_f(r, gw[0], gw[1])
        la2 = la2 + f
        log_b[t] = f
        log_a2[t] = la2
        ea = math.exp(la2) if la2 < 0.0 else 1.0
        r = math.sqrt(1.0 - ea) if ea < 1.0 else 0.0
        rho[t] = r
    return CouplingTrace(rho=rho, log_a2=log_a2, log_b=log_b)


@dataclass(frozen=True)
class LogMoments:
    """Gaussian log-moment constants E log(1+g^2) and E log(1+g^2+w^2)."""

    e_log1p_g2: float
    e_log1p_g2_w2: float
    quad_order: int

    @property
    def lambda_v(self) -> float:
        """Growth rate of the Gaussian full-history recursion.

        Conditioned on the current unit state, the new coordinate is a
        standard normal, so the squared norm multiplies by 1 + g^2 each
        step and the rate is E log(1+g^2) / 2.
        """
        return 0.5 * self.e_log1p_g2


def gaussian_log_moments(quad_order: int = 80) -> LogMoments:
    if quad_order < 20:
        raise ValueError("quad_order must be >= 20")
    x, w = _gh_nodes(quad_order)
    e1 = float(w @ np.log1p(x * x))
    g_nodes, w_nodes, ww = _gh_tensor(quad_order)
    e2 = float(np.sum(ww * np.log1p(g_nodes * g_nodes + w_nodes * w_nodes)))
    return LogMoments(e_log1p_g2=e1, e_log1p_g2_w2=e2, quad_order=quad_order)
