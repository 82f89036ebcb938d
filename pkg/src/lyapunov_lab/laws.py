"""Coefficient laws and the counter-based random stream they draw from.

Every simulation in this package consumes randomness through RngStream,
whose output is a pure function of (seed, stream_id, counter). That makes
whole trajectories replayable bit-for-bit and lets independent trajectories
run on separate streams without any shared state.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

__all__ = [
    "LawKind",
    "CoefficientLaw",
    "RngStream",
    "BERNOULLI",
    "GAUSSIAN",
    "law_from_name",
    "law_moments",
    "sample",
    "sample_row",
    "ROW_STRIDE",
]


class LawKind(Enum):
    RADEMACHER_BERNOULLI = "bernoulli"
    STANDARD_GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class CoefficientLaw:
    """A zero-mean coefficient distribution with its exact moments.

    sigma2 is the variance, fourth_moment the fourth moment. Both laws
    shipped here are symmetric, so the mean is zero by construction.
    """

    kind: LawKind
    sigma2: float
    fourth_moment: float

    def __post_init__(self) -> None:
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.fourth_moment < self.sigma2**2:
            raise ValueError("fourth moment below sigma2^2 violates Jensen")
        expected = {LawKind.RADEMACHER_BERNOULLI: (1.0, 1.0), LawKind.STANDARD_GAUSSIAN: (1.0, 3.0)}
        if (self.sigma2, self.fourth_moment) != expected[self.kind]:
            raise ValueError(f"moments {self.sigma2, self.fourth_moment} do not match {self.kind}")

    @property
    def name(self) -> str:
        return self.kind.value


BERNOULLI = CoefficientLaw(LawKind.RADEMACHER_BERNOULLI, 1.0, 1.0)
GAUSSIAN = CoefficientLaw(LawKind.STANDARD_GAUSSIAN, 1.0, 3.0)


def law_from_name(name: str) -> CoefficientLaw:
    try:
        return {"bernoulli": BERNOULLI, "gaussian": GAUSSIAN}[name]
    except KeyError:
        raise ValueError(f"unknown law {name!r}; expected 'bernoulli' or 'gaussian'") from None


def law_moments(law: CoefficientLaw) -> tuple[float, float]:
    """Exact (variance, fourth moment) pair of the law."""
    return law.sigma2, law.fourth_moment


_BLOCK = 4  # Philox-4x64 emits four 64-bit words per counter tick

ROW_STRIDE = 1 << 32
"""Word spacing between per-step rows.

Simulations that draw one coefficient row per step address row k at word
position k * ROW_STRIDE (see RngStream.seek_row). A row therefore always
starts at the same counter position no matter how many words earlier steps
actually consumed, which keeps different evaluation paths of the same
recursion (exact, floating-point, normalized) on identical coefficients.
"""


class RngStream:
    """Counter-based random stream backed by Philox-4x64.

    The word at counter position c is a pure function of
    (seed, stream_id, c). Exactly one 64-bit word is consumed per variate:
    signs use the word's top bit, uniforms the top 53 bits, and normals go
    through the inverse normal CDF of that uniform. seek() is O(1), so
    per-step row addressing costs nothing beyond a counter jump.
    """

    __slots__ = ("seed", "stream_id", "counter", "_bg", "_bg_block")

    def __init__(self, seed: int, stream_id: int = 0, counter: int = 0):
        if not (0 <= seed < 1 << 64 and 0 <= stream_id < 1 << 64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        if counter < 0:
            raise ValueError("counter must be nonnegative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.counter = int(counter)
        self._bg = Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64))
        self._bg_block = 0

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, counter={self.counter})"

    def spawn(self, stream_id: int) -> "RngStream":
        """Fresh stream with the same seed; advancing it never touches self."""
        return RngStream(self.seed, stream_id)

    def seek(self, counter: int) -> None:
        """Position the stream so the next word read is at `counter`."""
        if counter < 0:
            raise ValueError("counter must be nonnegative")
        self.counter = int(counter)

    def seek_row(self, row: int) -> None:
        """Position at the start of per-step row `row` (word row * ROW_STRIDE)."""
        self.seek(row * ROW_STRIDE)

    def words(self, k: int) -> np.ndarray:
        """Next k raw 64-bit words; advances the counter by exactly k."""
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return np.empty(0, dtype=np.uint64)
        start_block, off = divmod(self.counter, _BLOCK)
        nblocks = (off + k + _BLOCK - 1) // _BLOCK
        if self._bg_block != start_block:
            if start_block > self._bg_block:
                self._bg.advance(start_block - self._bg_block)
            else:
                self._bg = Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64))
                if start_block:
                    self._bg.advance(start_block)
        raw = self._bg.random_raw(nblocks * _BLOCK)
        self._bg_block = start_block + nblocks
        self.counter += k
        return raw[off : off + k]

    def uniforms(self, k: int) -> np.ndarray:
        """k uniforms on the open interval (0, 1); one word each."""
        w = self.words(k)
        return (w >> np.uint64(11)) * 2.0**-53 + 2.0**-54

    def normals(self, k: int) -> np.ndarray:
        """k standard normals via inverse CDF; one word each."""
        return ndtri(self.uniforms(k))

    def signs(self, k: int) -> np.ndarray:
        """k values in {-1.0, +1.0} from the top bit; one word each."""
        w = self.words(k)
        return 1.0 - 2.0 * (w >> np.uint64(63))


def sample_row(law: CoefficientLaw, rng: RngStream, k: int) -> np.ndarray:
    """Row of k i.i.d. draws from the law; consumes exactly k counter steps."""
    if law.kind is LawKind.RADEMACHER_BERNOULLI:
        return rng.signs(k)
    return rng.normals(k)


def sample(law: CoefficientLaw, rng: RngStream) -> float:
    """One draw from the law; consumes exactly one counter step."""
    return float(sample_row(law, rng, 1)[0])
