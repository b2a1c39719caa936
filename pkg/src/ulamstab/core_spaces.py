"""Core value types: extended reals, quasi-normed spaces, b-metric spaces.

Distances here live in [0, +inf].  +inf is a first-class value with the
usual absorbing arithmetic (x + inf = inf, inf**p = inf for p > 0) and is
carried by IEEE float infinities.  NaN is never a value: any NaN appearing
in an input is a hard error, never propagated.

A quasi-norm satisfies the relaxed triangle inequality
``|x + y| <= kappa * (|x| + |y|)`` with modulus kappa >= 1, and every such
space carries the derived exponent ``p = log_{2 kappa} 2``, the unique
p in (0, 1] with (2 kappa)**p = 2.  A (generalized) b-metric satisfies
``D(x, y) <= kappa * (D(x, z) + D(z, y))`` and may take the value +inf.

All axiom checks written with ``<=`` are evaluated with an absolute slack
of ``AXIOM_SLACK`` so that exact mathematical identities survive float
rounding without admitting real violations.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EvaluationError, InputError

__all__ = [
    "AXIOM_SLACK",
    "as_extended",
    "as_extended_matrix",
    "ext_pow",
    "p_exponent",
    "euclidean_norm",
    "QuasiNormedSpace",
    "real_line",
    "GeneralizedBMetricSpace",
    "SampledMap",
    "BMetricReport",
    "QuasiNormReport",
    "validate_b_metric",
    "validate_quasi_norm",
    "load_distance_csv",
    "save_distance_csv",
    "load_distance_json",
    "save_distance_json",
]

# Absolute slack applied to every <= axiom check.
AXIOM_SLACK = 1e-12


# =========================================================================
# Extended nonnegative reals
# =========================================================================

def as_extended(value, name="value") -> float:
    """Coerce one extended nonnegative real, rejecting NaN and negatives."""
    v = float(value)
    if math.isnan(v):
        raise InputError(f"{name} is NaN; distances must be in [0, +inf]")
    if v < 0.0:
        raise InputError(f"{name} is negative ({v!r}); distances must be in [0, +inf]")
    return v


def as_extended_matrix(D) -> np.ndarray:
    """Coerce a square matrix of extended nonnegative reals.

    Returns a float copy with the write flag cleared.  Non-square shape,
    NaN entries, and negative entries are input errors.
    """
    A = np.array(D, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"distance matrix must be square, got shape {A.shape}")
    if np.isnan(A).any():
        i, j = map(int, np.argwhere(np.isnan(A))[0])
        raise InputError(f"distance matrix has NaN at ({i}, {j})")
    if (A < 0).any():
        i, j = map(int, np.argwhere(A < 0)[0])
        raise InputError(f"distance matrix has negative entry {A[i, j]!r} at ({i}, {j})")
    A.setflags(write=False)
    return A


def ext_pow(value, p) -> float:
    """value**p on [0, +inf] for p > 0; (+inf)**p = +inf, 0**p = 0."""
    v = as_extended(value)
    if p <= 0:
        raise InputError(f"exponent must be positive, got {p!r}")
    if math.isinf(v):
        return math.inf
    return v**p


def p_exponent(kappa) -> float:
    """The exponent p = log_{2 kappa} 2, i.e. the solution of (2 kappa)**p = 2.

    kappa = 1 gives p = 1, kappa = 2 gives p = 1/2, kappa = 4 gives p = 1/3.
    Strictly decreasing in kappa; kappa < 1 is an input error.
    """
    k = float(kappa)
    if math.isnan(k) or k < 1.0:
        raise InputError(f"kappa must be >= 1, got {kappa!r}")
    return math.log(2.0) / math.log(2.0 * k)


# =========================================================================
# Quasi-normed spaces
# =========================================================================

def euclidean_norm(x) -> float:
    """Euclidean norm; reduces to abs() for scalars."""
    return float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))


@dataclass(frozen=True)
class QuasiNormedSpace:
    """A finite-dimensional real vector space with a quasi-norm.

    ``norm_eval`` must be absolutely homogeneous and satisfy the kappa-relaxed
    triangle inequality; ``validate_quasi_norm`` spot-checks both on samples.
    The exponent ``p`` is derived from kappa at construction and satisfies
    (2 kappa)**p = 2 within 1e-12 relative.
    """

    dim: int
    norm_eval: Callable[..., float]
    kappa: float
    name: str = ""
    p: float = field(init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise InputError(f"dim must be >= 1, got {self.dim}")
        if math.isnan(self.kappa) or self.kappa < 1.0:
            raise InputError(f"kappa must be >= 1, got {self.kappa!r}")
        p = p_exponent(self.kappa)
        if abs((2.0 * self.kappa) ** p - 2.0) > 1e-12 * 2.0:
            raise InputError(f"derived exponent inconsistent for kappa={self.kappa!r}")
        object.__setattr__(self, "p", p)

    def norm(self, x) -> float:
        """Evaluate the quasi-norm, rejecting NaN results."""
        return as_extended(self.norm_eval(x), name="norm value")


def real_line() -> QuasiNormedSpace:
    """The real line with the absolute value (kappa = 1, p = 1)."""
    return QuasiNormedSpace(dim=1, norm_eval=euclidean_norm, kappa=1.0, name="reals")


# =========================================================================
# Generalized b-metric spaces on finite point sets
# =========================================================================

@dataclass(frozen=True)
class GeneralizedBMetricSpace:
    """A finite point set with a (possibly +inf valued) b-metric matrix.

    Construction validates shape and entry range only; the axioms are
    checked by ``validate_b_metric`` so that deliberately broken matrices
    can still be represented and reported on.
    """

    D: np.ndarray
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "D", as_extended_matrix(self.D))
        if math.isnan(self.kappa) or self.kappa < 1.0:
            raise InputError(f"kappa must be >= 1, got {self.kappa!r}")

    @property
    def n(self) -> int:
        return self.D.shape[0]


@dataclass(frozen=True)
class BMetricReport:
    """Outcome of a b-metric axiom check.

    ``axiom`` is one of "identity", "separation", "symmetry",
    "relaxed_triangle" when ``passed`` is False; ``witness`` carries the
    offending indices ((i, j) or (i, j, k))."""

    passed: bool
    axiom: str | None = None
    witness: tuple | None = None
    detail: str = "ok"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "axiom": self.axiom,
            "witness": list(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


def validate_b_metric(D, kappa, tol=AXIOM_SLACK) -> BMetricReport:
    """Check the generalized b-metric axioms on a distance matrix.

    Axioms, in the order checked: zero diagonal, positivity off the
    diagonal, symmetry, and the relaxed triangle inequality
    D(i,j) <= kappa * (D(i,k) + D(k,j)) + tol.  The first violating pair
    or triple in lexicographic index order is reported.
    """
    A = as_extended_matrix(D)
    k = float(kappa)
    if math.isnan(k) or k < 1.0:
        raise InputError(f"kappa must be >= 1, got {kappa!r}")
    n = A.shape[0]

    diag = np.diagonal(A)
    bad = np.argwhere(diag > tol)
    if bad.size:
        i = int(bad[0, 0])
        return BMetricReport(False, "identity", (i, i),
                             f"D({i},{i}) = {diag[i]!r} != 0")

    off = ~np.eye(n, dtype=bool)
    bad = np.argwhere(off & (A <= tol))
    if bad.size:
        i, j = map(int, bad[0])
        return BMetricReport(False, "separation", (i, j),
                             f"D({i},{j}) = {A[i, j]!r} vanishes for distinct points")

    # isclose handles inf == inf; rtol stays 0 so the slack is purely absolute.
    sym = np.isclose(A, A.T, rtol=0.0, atol=tol)
    bad = np.argwhere(~sym)
    if bad.size:
        i, j = map(int, bad[0])
        return BMetricReport(False, "symmetry", (i, j),
                             f"D({i},{j}) = {A[i, j]!r} but D({j},{i}) = {A[j, i]!r}")

    # One i-slice at a time keeps memory at O(n^2) while preserving the
    # lexicographic (i, j, k) order of the first reported violation.
    for i in range(n):
        rhs = k * (A[i, None, :] + A.T)
        mask = A[i, :, None] > rhs + tol
        if mask.any():
            j, kk = map(int, np.argwhere(mask)[0])
            return BMetricReport(
                False, "relaxed_triangle", (i, j, kk),
                f"D({i},{j}) = {A[i, j]!r} > kappa*(D({i},{kk}) + D({kk},{j})) = {rhs[j, kk]!r}")

    return BMetricReport(True, detail=f"all axioms hold for n={n}, kappa={k!r}")


# =========================================================================
# Quasi-norm validation
# =========================================================================

_DEFAULT_SCALARS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0)


@dataclass(frozen=True)
class QuasiNormReport:
    """Outcome of a quasi-norm spot check on sample vectors.

    ``worst_triangle_ratio`` is max |x+y| / (|x| + |y|) over sampled pairs
    with a nonzero denominator; it never exceeds kappa on a valid space.
    """

    passed: bool
    worst_triangle_ratio: float
    witness: tuple | None = None
    detail: str = "ok"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_triangle_ratio": self.worst_triangle_ratio,
            "witness": list(self.witness) if self.witness is not None else None,
            "detail": self.detail,
        }


def validate_quasi_norm(space: QuasiNormedSpace, samples: Sequence,
                        scalars=_DEFAULT_SCALARS, tol=AXIOM_SLACK) -> QuasiNormReport:
    """Spot-check quasi-norm axioms on sample vectors.

    Checks |0| = 0, positivity on nonzero samples, absolute homogeneity
    over a fixed scalar set, and the kappa-relaxed triangle inequality on
    every sampled pair.  Homogeneity defects are compared against
    tol * max(1, |r| * |x|); the relaxed triangle uses the same absolute
    slack as the b-metric checks.
    """
    if not len(samples):
        raise InputError("need at least one sample vector")
    xs = [np.atleast_1d(np.asarray(x, dtype=float)) for x in samples]
    norms = [space.norm(x) for x in xs]

    zero = np.zeros_like(xs[0])
    nz = space.norm(zero)
    if nz > tol:
        return QuasiNormReport(False, math.nan, None, f"norm of 0 is {nz!r}, expected 0")
    for idx, (x, nx) in enumerate(zip(xs, norms)):
        if np.any(x != 0.0) and nx <= tol:
            return QuasiNormReport(False, math.nan, (idx,),
                                   f"nonzero sample {idx} has norm {nx!r}")

    for idx, (x, nx) in enumerate(zip(xs, norms)):
        for r in scalars:
            got = space.norm(r * x)
            want = abs(r) * nx
            if abs(got - want) > tol * max(1.0, want):
                return QuasiNormReport(
                    False, math.nan, (idx, r),
                    f"homogeneity fails on sample {idx} with scalar {r!r}: "
                    f"|r x| = {got!r} vs |r| |x| = {want!r}")

    worst = 0.0
    worst_pair = None
    for a in range(len(xs)):
        for b in range(a, len(xs)):
            nsum = space.norm(xs[a] + xs[b])
            denom = norms[a] + norms[b]
            if nsum > space.kappa * denom + tol:
                return QuasiNormReport(
                    False, nsum / denom if denom else math.inf, (a, b),
                    f"relaxed triangle fails on pair ({a},{b}): "
                    f"|x+y| = {nsum!r} > kappa*(|x|+|y|) = {space.kappa * denom!r}")
            if denom > 0 and nsum / denom > worst:
                worst = nsum / denom
                worst_pair = (a, b)

    return QuasiNormReport(True, worst, worst_pair,
                           f"axioms hold on {len(xs)} samples; worst ratio {worst!r}")


# =========================================================================
# Sampled maps on finite grids
# =========================================================================

# Grid-point matching: absolute floor plus a relative term per coordinate.
_MATCH_ATOL = 1e-12
_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class SampledMap:
    """A map known only on a finite grid of domain points.

    ``domain_grid`` has one row per point (scalars allowed, stored 1-d);
    ``values`` holds the image of each row in the codomain quasi-normed
    space.  Lookup is by exact grid membership within a tight float
    tolerance; there is no interpolation.  If the zero vector is on the
    grid its image is part of ``values`` like any other point.
    """

    domain_grid: np.ndarray
    values: np.ndarray
    codomain: QuasiNormedSpace
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = np.array(self.domain_grid, dtype=float)
        v = np.array(self.values, dtype=float)
        if g.ndim not in (1, 2):
            raise InputError(f"domain grid must be 1-d or 2-d, got shape {g.shape}")
        if len(g) != len(v):
            raise InputError(f"grid has {len(g)} points but {len(v)} values")
        if len(g) == 0:
            raise InputError("grid must contain at least one point")
        if np.isnan(g).any() or np.isinf(g).any():
            raise InputError("domain grid must be finite")
        if np.isnan(v).any():
            raise InputError("values contain NaN")
        rows = g if g.ndim == 2 else g[:, None]
        for i in range(len(rows)):
            tol = _MATCH_ATOL + _MATCH_RTOL * np.abs(rows[i])
            dup = np.all(np.abs(rows[i + 1:] - rows[i]) <= tol, axis=1)
            if dup.any():
                j = i + 1 + int(np.argmax(dup))
                raise InputError(f"duplicate domain points at indices {i} and {j}")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "domain_grid", g)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.domain_grid)

    def try_index(self, point) -> int | None:
        """Index of ``point`` on the grid, or None if it is not a grid point."""
        p = np.atleast_1d(np.asarray(point, dtype=float))
        rows = self.domain_grid if self.domain_grid.ndim == 2 else self.domain_grid[:, None]
        if p.shape != rows.shape[1:]:
            return None
        tol = _MATCH_ATOL + _MATCH_RTOL * np.abs(p)
        hits = np.all(np.abs(rows - p) <= tol, axis=1)
        if not hits.any():
            return None
        return int(np.argmax(hits))

    def index_of(self, point) -> int:
        idx = self.try_index(point)
        if idx is None:
            raise EvaluationError(f"point {point!r} is not on the sampling grid")
        return idx

    def __call__(self, point):
        v = self.values[self.index_of(point)]
        return float(v) if v.ndim == 0 else v

    def value_at(self, index: int):
        v = self.values[index]
        return float(v) if v.ndim == 0 else v

    def point_at(self, index: int):
        pt = self.domain_grid[index]
        return float(pt) if pt.ndim == 0 else pt


# =========================================================================
# Distance matrix files
# =========================================================================

def load_distance_csv(path) -> np.ndarray:
    """Read a distance matrix from CSV: one row per point, token ``inf`` for +inf."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise InputError(f"{path}: line {lineno}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: no matrix rows found")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise InputError(f"{path}: ragged rows (widths {sorted(width)})")
    return as_extended_matrix(np.array(rows))


def save_distance_csv(path, D) -> None:
    A = as_extended_matrix(D)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in A:
            writer.writerow(["inf" if math.isinf(v) else repr(float(v)) for v in row])


def load_distance_json(path) -> tuple[np.ndarray, float]:
    """Read ``{"kappa": k, "D": [[...]]}``; returns (matrix, kappa)."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "kappa" not in doc or "D" not in doc:
        raise InputError(f"{path}: expected an object with fields 'kappa' and 'D'")
    try:
        kappa = float(doc["kappa"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: field 'kappa': {exc}") from exc
    return as_extended_matrix(doc["D"]), kappa


def save_distance_json(path, D, kappa) -> None:
    A = as_extended_matrix(D)
    with open(path, "w") as fh:
        json.dump({"kappa": float(kappa), "D": [list(map(float, row)) for row in A]},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
