"""Concrete quasi-normed spaces: L^{1/2}[0,1] and the ell^r sequence spaces.

L^{1/2}[0,1] carries |x| = (integral of |x(t)|**(1/2) dt)**2, a quasi-norm
with modulus kappa = 2 and exponent p = 1/2.  Elements are represented by
their samples on the composite midpoint grid t_i = (i + 1/2) / n, and the
norm is the midpoint quadrature

    |x| = (sum_i |x_i|**(1/2) / n)**2,

which is exactly homogeneous and converges monotonically in n for
piecewise-smooth signals.

ell^r for 0 < r < 1 carries |x| = (sum |x_i|**r)**(1/r) with the tight
modulus kappa = 2**(1/r - 1); r >= 1 gives an honest norm (kappa = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_spaces import QuasiNormedSpace
from .errors import InputError

__all__ = [
    "ell_r_quasi_norm",
    "ell_r_kappa",
    "ell_r_space",
    "lhalf_norm",
    "LHalfSpace",
    "example_corpus",
]


def ell_r_quasi_norm(x, r) -> float:
    """(sum |x_i|**r)**(1/r); requires r > 0."""
    if math.isnan(r) or r <= 0:
        raise InputError(f"r must be positive, got {r!r}")
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if np.isnan(v).any():
        raise InputError("vector contains NaN")
    return float(np.sum(np.abs(v) ** r) ** (1.0 / r))


def ell_r_kappa(r) -> float:
    """The tight relaxed-triangle modulus of ell^r: 2**(1/r - 1) for r < 1, else 1."""
    if math.isnan(r) or r <= 0:
        raise InputError(f"r must be positive, got {r!r}")
    return 2.0 ** (1.0 / r - 1.0) if r < 1.0 else 1.0


def ell_r_space(dim, r) -> QuasiNormedSpace:
    k = ell_r_kappa(r)
    return QuasiNormedSpace(dim=dim, norm_eval=lambda x: ell_r_quasi_norm(x, r),
                            kappa=k, name=f"ell^{r}")


def lhalf_norm(x, quadrature_n=None) -> float:
    """Midpoint-quadrature L^{1/2} quasi-norm of a sampled signal.

    ``x`` holds the samples x(t_i) at the midpoints t_i = (i + 1/2) / n.
    When ``quadrature_n`` is given it must match len(x).
    """
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1 or len(v) == 0:
        raise InputError(f"expected a 1-d sample vector, got shape {v.shape}")
    if quadrature_n is not None and len(v) != quadrature_n:
        raise InputError(f"sample vector has length {len(v)}, expected {quadrature_n}")
    if np.isnan(v).any():
        raise InputError("sample vector contains NaN")
    return float((np.sum(np.sqrt(np.abs(v))) / len(v)) ** 2)


@dataclass(frozen=True)
class LHalfSpace:
    """L^{1/2}[0,1] discretized on the composite midpoint grid."""

    quadrature_n: int = 1024

    kappa = 2.0
    p = 0.5

    def __post_init__(self):
        if self.quadrature_n < 1:
            raise InputError(f"quadrature_n must be >= 1, got {self.quadrature_n!r}")

    @property
    def midpoints(self) -> np.ndarray:
        n = self.quadrature_n
        return (np.arange(n) + 0.5) / n

    def sample(self, fn) -> np.ndarray:
        """Sample a callable t -> x(t) on the midpoint grid."""
        return np.asarray(fn(self.midpoints), dtype=float)

    def norm(self, x) -> float:
        return lhalf_norm(x, self.quadrature_n)

    def space(self) -> QuasiNormedSpace:
        """The QuasiNormedSpace view (dim = quadrature_n, kappa = 2)."""
        return QuasiNormedSpace(dim=self.quadrature_n, norm_eval=self.norm,
                                kappa=self.kappa, name=f"L^1/2[0,1]@{self.quadrature_n}")


def example_corpus(quadrature_n=1024, seed=7) -> list[np.ndarray]:
    """Twenty fixed test signals sampled on the midpoint grid.

    Ten random polynomials of degree <= 3, seven scaled sinusoids, and
    three step signals, all drawn from a seeded generator so the corpus
    is bitwise reproducible.
    """
    space = LHalfSpace(quadrature_n)
    t = space.midpoints
    rng = np.random.default_rng(seed)
    signals = []
    for _ in range(10):
        coeffs = rng.uniform(-2.0, 2.0, size=4)
        signals.append(coeffs[0] + coeffs[1] * t + coeffs[2] * t**2 + coeffs[3] * t**3)
    for _ in range(7):
        amp = rng.uniform(0.25, 2.0)
        freq = rng.integers(1, 5)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        signals.append(amp * np.sin(2.0 * math.pi * freq * t + phase))
    for _ in range(3):
        edge = rng.uniform(0.2, 0.8)
        lo, hi = rng.uniform(-1.5, 1.5, size=2)
        signals.append(np.where(t < edge, lo, hi))
    return signals
