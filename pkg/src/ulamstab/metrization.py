"""Chain-infimum metrization of (generalized) b-metric spaces.

For a b-metric D with modulus kappa and the derived exponent
p = log_{2 kappa} 2, the chain infimum

    delta(x, y) = inf over finite chains x = x_0, ..., x_n = y
                  of sum_i D(x_{i-1}, x_i)**p

is a (generalized) metric sandwiched by (1/4) D**p <= delta <= D**p.
On a finite point set the infimum is attained on simple chains, so delta
is exactly the all-pairs shortest path distance over edge weights D**p;
we compute it with Floyd-Warshall in a fixed relaxation order, which
makes the result deterministic bit for bit.

When kappa = 1 (so p = 1 and D is already a metric) no relaxation can
improve on the direct edge and delta equals D exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_spaces import (
    AXIOM_SLACK,
    GeneralizedBMetricSpace,
    QuasiNormedSpace,
    p_exponent,
    validate_b_metric,
)
from .errors import InputError, InvalidBMetricError

__all__ = ["ChainMetric", "chain_metric", "p_exponent", "aoki_rolewicz_estimate"]


@dataclass(frozen=True)
class ChainMetric:
    """The metrized distances of a b-metric space.

    ``delta`` is symmetric with zero diagonal, satisfies the plain
    triangle inequality, and obeys (1/4) D**p <= delta <= D**p entrywise.
    Unreachable pairs (no finite chain) keep delta = +inf.
    """

    delta: np.ndarray
    p: float
    source_kappa: float

    def __post_init__(self):
        d = np.array(self.delta, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)


def _shortest_paths(W: np.ndarray) -> np.ndarray:
    """Floyd-Warshall with a fixed k-major relaxation order."""
    d = W.copy()
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def chain_metric(space: GeneralizedBMetricSpace, p: float | None = None) -> ChainMetric:
    """Metrize a finite generalized b-metric space by the chain infimum.

    The space must pass ``validate_b_metric``; an invalid matrix raises
    ``InvalidBMetricError`` carrying the validation report.  ``p``
    defaults to the derived exponent for the space's kappa and must lie
    in (0, 1] when overridden.
    """
    report = validate_b_metric(space.D, space.kappa)
    if not report.passed:
        raise InvalidBMetricError(report)
    if p is None:
        p = p_exponent(space.kappa)
    else:
        p = float(p)
        if math.isnan(p) or not 0.0 < p <= 1.0:
            raise InputError(f"p must lie in (0, 1], got {p!r}")
    # p == 1 keeps W bitwise equal to D, so a true metric passes through
    # Floyd-Warshall unchanged.
    W = space.D.copy() if p == 1.0 else np.power(space.D, p)
    return ChainMetric(delta=_shortest_paths(W), p=p, source_kappa=space.kappa)


def aoki_rolewicz_estimate(space: QuasiNormedSpace, x,
                           decompositions: list | None = None) -> tuple[float, float]:
    """Two-sided estimate of the equivalent p-norm of ``x``.

    The renormalization |||x||| = inf over finite decompositions
    x = sum_i x_i of (sum_i |x_i|**p)**(1/p) satisfies
    |x| / (2 kappa) <= |||x||| <= |x|.  The lower bound is returned as
    ``lo``; ``hi`` is the least upper bound witnessed by ``x`` itself and
    by each supplied decomposition.  More decompositions can only shrink
    the interval, and lo <= hi always holds.

    Every decomposition must sum to ``x`` within 1e-9 per coordinate;
    the first offending decomposition index is reported otherwise.
    """
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    norm_x = space.norm(xv)
    lo = norm_x / (2.0 * space.kappa)
    hi = norm_x
    for idx, parts in enumerate(decompositions or []):
        if not len(parts):
            raise InputError(f"decomposition {idx} is empty")
        terms = [np.atleast_1d(np.asarray(t, dtype=float)) for t in parts]
        resid = np.max(np.abs(sum(terms) - xv))
        if resid > 1e-9:
            raise InputError(
                f"decomposition {idx} sums off target by {resid!r} (tolerance 1e-9)")
        candidate = sum(space.norm(t) ** space.p for t in terms) ** (1.0 / space.p)
        hi = min(hi, candidate)
    if hi < lo - AXIOM_SLACK:
        raise InputError(
            f"estimate collapsed: upper bound {hi!r} fell below lower bound {lo!r}; "
            "a decomposition is inconsistent with the space axioms")
    return lo, max(hi, lo)
