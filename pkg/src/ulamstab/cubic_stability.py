"""Stability certification for the Euler-Lagrange cubic functional equation.

For a fixed scalar m with |m| > 1 the equation reads

    2 m f(x + m y) + 2 f(m x - y)
        = (m**3 + m) * (f(x + y) + f(x - y)) + 2 (m**4 - 1) f(y).

Exact solutions are the cubic maps: they vanish at 0 and scale as
f(m x) = m**3 f(x).  Given an approximate solution f whose equation
defect is dominated by a control function phi that contracts along m
(phi(m x, m y) <= L |m|**3 phi(x, y) with L < 1), the map

    q(x) = lim_n f(m**n x) / m**(3 n)

is an exact solution with the certified per-point bound

    |f(x) - q(x)| <= (4 / (1 - L**p))**(1/p) * phi(x, 0) / (2 |m|**3),

where p is the exponent of the codomain quasi-norm.  ``verify_stability``
checks the two hypotheses on concrete samples, extracts q, evaluates the
bound pointwise, and returns everything as a machine-checkable
certificate; hypothesis failures yield a failing certificate with
witnesses, never an exception.

The independent cubicity witness used on the recovered q is the defect
of the Jun-Kim cubic equation

    f(2x + y) + f(2x - y) = 2 f(x + y) + 2 f(x - y) + 12 f(x),

which cubic maps also satisfy identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core_spaces import (
    AXIOM_SLACK,
    QuasiNormedSpace,
    SampledMap,
    euclidean_norm,
    real_line,
)
from .errors import HypothesisViolation, InputError, OverflowGuardError

__all__ = [
    "DEFAULT_TOL",
    "PowerLaw",
    "ShiftNorm",
    "ConstantBound",
    "phi_at_zero",
    "el_residual",
    "el_defect",
    "junkim_residual",
    "junkim_defect",
    "CheckReport",
    "phi_contractivity_check",
    "hypothesis_defect_check",
    "cubic_approximant",
    "stability_bound",
    "power_law_bound",
    "sup_weighted_distance",
    "cubic_rescale",
    "m_closed_grid",
    "StabilityConfig",
    "StabilityCertificate",
    "verify_stability",
]

DEFAULT_TOL = 1e-9

# Forward orbits are cut off well inside the representable range so that
# f(m**n x) stays finite even for cubic growth.
_ORBIT_LIMIT = 1e100


def _zero_like(x):
    a = np.asarray(x, dtype=float)
    return 0.0 if a.ndim == 0 else np.zeros_like(a)


def _is_nonzero(x) -> bool:
    return bool(np.any(np.asarray(x, dtype=float)))


def _ratio(num: float, denom: float) -> float:
    """num / denom with the conventions 0/0 = 0 and pos/0 = +inf."""
    if denom == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / denom


# =========================================================================
# Control functions (perturbation bounds)
# =========================================================================

@dataclass(frozen=True)
class PowerLaw:
    """phi(x, y) = lam * (|x|**s + |y|**s) away from zero arguments.

    At x = 0 or y = 0 the value is 0 by convention, which keeps negative
    exponents s meaningful; the hypothesis checks therefore exclude zero
    arguments for this family.  Contracts along m with
    L = |m|**(s - 3), so s < 3 is required.
    """

    lam: float
    s: float
    norm: Callable[..., float] = euclidean_norm
    excludes_zero = True

    def __post_init__(self):
        if self.lam < 0:
            raise InputError(f"lam must be nonnegative, got {self.lam!r}")
        if not self.s < 3:
            raise InputError(f"power-law exponent must satisfy s < 3, got {self.s!r}")

    def __call__(self, x, y) -> float:
        nx = self.norm(x)
        ny = self.norm(y)
        if nx == 0.0 or ny == 0.0:
            return 0.0
        return self.lam * (nx**self.s + ny**self.s)

    def at_zero(self, x) -> float:
        """The bound-effective phi(x, 0) = lam * |x|**s."""
        nx = self.norm(x)
        if nx == 0.0:
            if self.s > 0:
                return 0.0
            return self.lam if self.s == 0 else math.inf
        return self.lam * nx**self.s

    def lipschitz(self, m) -> float:
        return abs(m) ** (self.s - 3.0)


@dataclass(frozen=True)
class ShiftNorm:
    """phi(x, y) = c * |x + m y|; contracts along m with L = 1 / m**2."""

    c: float
    m: float
    norm: Callable[..., float] = euclidean_norm
    excludes_zero = False

    def __post_init__(self):
        if self.c < 0:
            raise InputError(f"c must be nonnegative, got {self.c!r}")

    def __call__(self, x, y) -> float:
        return self.c * self.norm(np.asarray(x, dtype=float) + self.m * np.asarray(y, dtype=float))

    def at_zero(self, x) -> float:
        return self.c * self.norm(x)

    def lipschitz(self, m) -> float:
        return abs(m) ** -2.0


@dataclass(frozen=True)
class ConstantBound:
    """phi(x, y) = value; contracts along m with L = 1 / |m|**3."""

    value: float
    excludes_zero = False

    def __post_init__(self):
        if self.value < 0:
            raise InputError(f"value must be nonnegative, got {self.value!r}")

    def __call__(self, x, y) -> float:
        return self.value

    def at_zero(self, x) -> float:
        return self.value

    def lipschitz(self, m) -> float:
        return abs(m) ** -3.0


def phi_at_zero(phi, x) -> float:
    """The weight phi(x, 0) used by bounds and the weighted sup distance."""
    if hasattr(phi, "at_zero"):
        return phi.at_zero(x)
    return phi(x, _zero_like(x))


# =========================================================================
# Equation defects
# =========================================================================

def el_residual(f, m, x, y):
    """Pointwise residual of the Euler-Lagrange cubic equation at (x, y)."""
    return (2.0 * m * np.asarray(f(x + m * y), dtype=float)
            + 2.0 * np.asarray(f(m * x - y), dtype=float)
            - (m**3 + m) * (np.asarray(f(x + y), dtype=float)
                            + np.asarray(f(x - y), dtype=float))
            - 2.0 * (m**4 - 1.0) * np.asarray(f(y), dtype=float))


def el_defect(f, m, x, y, norm: Callable[..., float] = euclidean_norm) -> float:
    """Codomain norm of the Euler-Lagrange residual; 0 for exact solutions."""
    return norm(el_residual(f, m, x, y))


def junkim_residual(f, x, y):
    """Pointwise residual of the Jun-Kim cubic equation at (x, y)."""
    return (np.asarray(f(2.0 * x + y), dtype=float)
            + np.asarray(f(2.0 * x - y), dtype=float)
            - 2.0 * np.asarray(f(x + y), dtype=float)
            - 2.0 * np.asarray(f(x - y), dtype=float)
            - 12.0 * np.asarray(f(x), dtype=float))


def junkim_defect(f, x, y, norm: Callable[..., float] = euclidean_norm) -> float:
    """Codomain norm of the Jun-Kim residual; an independent cubicity witness."""
    return norm(junkim_residual(f, x, y))


# =========================================================================
# Hypothesis checks
# =========================================================================

@dataclass(frozen=True)
class CheckReport:
    """Outcome of a sampled inequality check.

    ``worst_ratio`` is the largest observed lhs/rhs (conventions 0/0 = 0,
    pos/0 = +inf); ``witness`` is the sample pair realizing it, or the
    first violating pair when ``passed`` is False.
    """

    passed: bool
    worst_ratio: float
    witness: tuple | None
    n_samples: int
    detail: str = ""


def phi_contractivity_check(phi, m, L, samples, tol=AXIOM_SLACK) -> CheckReport:
    """Check phi(m x, m y) <= L * |m|**3 * phi(x, y) on sample pairs.

    The slack is tol * max(1, rhs): purely absolute near unit scale,
    relative for large values, so that families whose ratio is exactly 1
    survive float rounding at any magnitude.
    """
    if math.isnan(L) or L < 0:
        raise InputError(f"L must be nonnegative, got {L!r}")
    scale = L * abs(m) ** 3
    worst = 0.0
    worst_pair = None
    for x, y in samples:
        lhs = phi(m * np.asarray(x, dtype=float), m * np.asarray(y, dtype=float))
        rhs = scale * phi(x, y)
        ratio = _ratio(lhs, rhs)
        if ratio > worst or worst_pair is None:
            worst = ratio
            worst_pair = (x, y)
        if lhs > rhs + tol * max(1.0, rhs):
            return CheckReport(False, ratio, (x, y), len(samples),
                               f"phi(m x, m y) = {lhs!r} exceeds L |m|^3 phi(x, y) = {rhs!r}")
    return CheckReport(True, worst, worst_pair, len(samples),
                       f"contractive on {len(samples)} pairs")


def hypothesis_defect_check(f, phi, m, samples, norm: Callable[..., float] = euclidean_norm,
                            tol=DEFAULT_TOL) -> CheckReport:
    """Check el_defect(f, m, x, y) <= phi(x, y) + tol * max(1, phi) on samples.

    ``f(0) = 0`` is verified first; its failure invalidates the whole
    construction and raises ``HypothesisViolation``.
    """
    z = _zero_like(samples[0][0]) if len(samples) else 0.0
    f0 = norm(np.asarray(f(z), dtype=float))
    if f0 > tol:
        raise HypothesisViolation(
            f"f(0) has norm {f0!r}, expected 0", witness=(z,), observed=f0, allowed=tol)
    worst = 0.0
    worst_pair = None
    for x, y in samples:
        defect = el_defect(f, m, x, y, norm=norm)
        bound = phi(x, y)
        ratio = _ratio(defect, bound)
        if ratio > worst or worst_pair is None:
            worst = ratio
            worst_pair = (x, y)
        if defect > bound + tol * max(1.0, bound):
            return CheckReport(False, ratio, (x, y), len(samples),
                               f"defect {defect!r} exceeds phi {bound!r}")
    return CheckReport(True, worst, worst_pair, len(samples),
                       f"defect dominated by phi on {len(samples)} pairs")


# =========================================================================
# Cubic approximant extraction
# =========================================================================

def cubic_approximant(f, m, grid, n_max=80, tol=DEFAULT_TOL,
                      codomain: QuasiNormedSpace | None = None) -> SampledMap:
    """Extract q(x) = lim f(m**n x) / m**(3 n) on a finite grid.

    Stops once the sup over the grid of the codomain-norm change between
    successive stages drops to ``tol``, or at ``n_max`` stages.  The
    stage count and final change land in the result's ``meta``.
    Requires |m| > 1; an orbit or denominator leaving the safe floating
    range raises ``OverflowGuardError`` carrying the last safe stage.
    """
    if not abs(m) > 1.0:
        raise InputError(
            f"|m| must exceed 1 for the forward rescaling to contract, got m = {m!r}")
    if math.isnan(tol) or tol < 0.0:
        raise InputError(f"tol must be nonnegative, got {tol!r}")
    if n_max < 1:
        raise InputError(f"n_max must be >= 1, got {n_max!r}")
    codomain = codomain or real_line()
    g = np.array(grid, dtype=float)
    if np.isnan(g).any() or np.isinf(g).any():
        raise InputError("grid must be finite")
    rows = g if g.ndim == 2 else g[:, None]

    def stage_values(points):
        vals = np.array([np.asarray(f(p if g.ndim == 2 else float(p[0])), dtype=float)
                         for p in points])
        return vals

    points = rows.copy()
    denom = 1.0
    vals = stage_values(points)
    n_used = 0
    change = math.inf
    for n in range(1, n_max + 1):
        points = points * m
        denom = denom * m**3
        if np.max(np.abs(points)) > _ORBIT_LIMIT or abs(denom) > _ORBIT_LIMIT:
            raise OverflowGuardError(
                f"forward orbit left the safe range at stage {n} (|m| = {abs(m)!r})",
                last_safe=SampledMap(g, vals, codomain,
                                     meta={"iterations": n - 1, "final_change": change}),
                iterations=n - 1)
        new_vals = stage_values(points) / denom
        if not np.isfinite(new_vals).all():
            raise OverflowGuardError(
                f"f overflowed along the orbit at stage {n}",
                last_safe=SampledMap(g, vals, codomain,
                                     meta={"iterations": n - 1, "final_change": change}),
                iterations=n - 1)
        change = max(
            (codomain.norm(new_vals[i] - vals[i]) for i in range(len(rows))), default=0.0)
        vals = new_vals
        n_used = n
        if change <= tol:
            break
    return SampledMap(g, vals, codomain,
                      meta={"iterations": n_used, "final_change": change})


# =========================================================================
# Bounds and distances
# =========================================================================

def stability_bound(config: StabilityConfig, phi, x) -> float:
    """Certified per-point bound (4/(1 - L**p))**(1/p) * phi(x, 0) / (2 |m|**3)."""
    Lp = config.L ** config.p
    if not Lp < 1.0:
        raise InputError(f"L**p must stay below 1, got {Lp!r}")
    factor = (4.0 / (1.0 - Lp)) ** (1.0 / config.p)
    return factor * phi_at_zero(phi, x) / (2.0 * abs(config.m) ** 3)


def power_law_bound(phi: PowerLaw, m, p, x) -> float:
    """Closed-form bound for the power-law family:

    (4 / (1 - |m|**(s-3)))**(1/p) * lam * |x|**s / (2 |m|**3).

    Coincides with ``stability_bound`` at L = |m|**(s-3) when p = 1.
    """
    L = phi.lipschitz(m)
    if not L < 1.0:
        raise InputError(f"|m|**(s-3) must stay below 1, got {L!r}")
    factor = (4.0 / (1.0 - L)) ** (1.0 / p)
    return factor * phi.at_zero(x) / (2.0 * abs(m) ** 3)


def sup_weighted_distance(g: SampledMap, h: SampledMap, phi) -> float:
    """sup over the grid of |g(x) - h(x)| / phi(x, 0).

    The weight is the bound-effective phi(x, 0).  Conventions: 0/0 = 0
    and pos/0 = +inf (the sup of an empty admissible constant set).
    Both maps must live on the identical grid.
    """
    if not np.array_equal(g.domain_grid, h.domain_grid):
        raise InputError("sampled maps live on different grids")
    norm = g.codomain.norm
    worst = 0.0
    for i in range(len(g)):
        num = norm(np.asarray(g.values[i], dtype=float) - np.asarray(h.values[i], dtype=float))
        worst = max(worst, _ratio(num, phi_at_zero(phi, g.point_at(i))))
    return worst


def cubic_rescale(g: SampledMap, m) -> SampledMap:
    """The iteration operator (T g)(x) = g(m x) / m**3 on sampled maps.

    Defined on the sub-grid of points whose m-multiple is still on g's
    grid; empty sub-grids are an input error.
    """
    keep = []
    values = []
    for i in range(len(g)):
        j = g.try_index(m * np.asarray(g.domain_grid[i], dtype=float))
        if j is not None:
            keep.append(i)
            values.append(g.values[j] / m**3)
    if not keep:
        raise InputError("no grid point has its m-multiple on the grid")
    return SampledMap(g.domain_grid[keep], np.array(values), g.codomain)


def m_closed_grid(base, m, levels=2, symmetric=True, include_zero=True) -> np.ndarray:
    """Build the grid {m**k * b : b in base, 0 <= k <= levels}.

    Scaling is by successive multiplication so that later lookups of
    m * x match grid rows bit for bit.  Optionally mirrored through the
    origin and including the zero point (listed first).  Duplicates are
    dropped, keeping the first occurrence.
    """
    if not abs(m) > 1.0:
        raise InputError(f"|m| must exceed 1, got {m!r}")
    if levels < 0:
        raise InputError(f"levels must be >= 0, got {levels!r}")
    items = [np.atleast_1d(np.asarray(b, dtype=float)) for b in base]
    if not items:
        raise InputError("base must contain at least one point")
    d = items[0].shape
    rows = []
    if include_zero:
        rows.append(np.zeros(d))
    for b in items:
        if b.shape != d:
            raise InputError("base points must share one shape")
        cur = b.copy()
        for _ in range(levels + 1):
            rows.append(cur)
            if symmetric:
                rows.append(-cur)
            cur = cur * m
    out = []
    for r in rows:
        tol = 1e-12 + 1e-9 * np.abs(r)
        if not any(np.all(np.abs(r - o) <= tol) for o in out):
            out.append(r)
    grid = np.array(out)
    return grid[:, 0] if len(d) == 1 and d[0] == 1 and np.asarray(base[0]).ndim == 0 else grid


# =========================================================================
# Configuration and certificate
# =========================================================================

@dataclass(frozen=True)
class StabilityConfig:
    """Parameters of one stability verification run.

    ``m`` is the equation scalar (|m| > 1 so the forward rescaling
    contracts; 0 and +-1 are degenerate), ``L`` the contraction constant
    of the control function, ``p`` the codomain exponent, ``tol`` the
    certification tolerance.  ``codomain`` defaults to the real line and
    must agree with ``p``.
    """

    m: float
    L: float
    p: float = 1.0
    tol: float = DEFAULT_TOL
    codomain: QuasiNormedSpace | None = None

    def __post_init__(self):
        if math.isnan(self.m) or not abs(self.m) > 1.0:
            raise InputError(
                f"m must satisfy |m| > 1 (0 and +-1 are degenerate; the forward "
                f"rescaling diverges for 0 < |m| <= 1), got {self.m!r}")
        if math.isnan(self.L) or not 0.0 <= self.L < 1.0:
            raise InputError(f"L must lie in [0, 1), got {self.L!r}")
        if math.isnan(self.p) or not 0.0 < self.p <= 1.0:
            raise InputError(f"p must lie in (0, 1], got {self.p!r}")
        if math.isnan(self.tol) or self.tol <= 0.0:
            raise InputError(f"tol must be positive, got {self.tol!r}")
        if self.codomain is None:
            object.__setattr__(self, "codomain", real_line())
        if abs(self.codomain.p - self.p) > 1e-9:
            raise InputError(
                f"p = {self.p!r} disagrees with the codomain exponent {self.codomain.p!r}")


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (tuple, list)):
        return [_jsonable(t) for t in v]
    return v


@dataclass(frozen=True)
class StabilityCertificate:
    """Machine-checkable outcome of a verification run.

    ``passed`` requires: both hypothesis flags, max_error_ratio <= 1 + tol,
    homogeneity_defect <= tol * scale, and el_defect_of_q <= tol * scale,
    where ``scale`` = max(1, sup |q| over the grid).  All raw numbers stay
    available so a failing certificate still explains itself.
    """

    m: float
    L: float
    p: float
    tol: float
    grid_size: int
    hypothesis_defect_ok: bool
    defect_worst_ratio: float
    defect_witness: tuple | None
    hypothesis_phi_ok: bool
    phi_worst_ratio: float
    phi_witness: tuple | None
    one_step_ok: bool
    one_step_worst_ratio: float
    q: SampledMap | None
    approximant_iterations: int
    scale: float
    bound_per_point: tuple
    error_per_point: tuple
    max_error_ratio: float
    homogeneity_defect: float
    homogeneity_points: int
    el_defect_of_q: float
    junkim_defect_of_q: float
    defect_pairs_checked: int
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return (self.hypothesis_defect_ok
                and self.hypothesis_phi_ok
                and self.max_error_ratio <= 1.0 + self.tol
                and self.homogeneity_defect <= self.tol * self.scale
                and self.el_defect_of_q <= self.tol * self.scale)

    def to_dict(self) -> dict:
        doc = {
            "m": self.m,
            "L": self.L,
            "p": self.p,
            "tol": self.tol,
            "grid_size": self.grid_size,
            "passed": self.passed,
            "hypothesis_defect_ok": self.hypothesis_defect_ok,
            "defect_worst_ratio": self.defect_worst_ratio,
            "defect_witness": _jsonable(self.defect_witness),
            "hypothesis_phi_ok": self.hypothesis_phi_ok,
            "phi_worst_ratio": self.phi_worst_ratio,
            "phi_witness": _jsonable(self.phi_witness),
            "one_step_ok": self.one_step_ok,
            "one_step_worst_ratio": self.one_step_worst_ratio,
            "approximant_iterations": self.approximant_iterations,
            "scale": self.scale,
            "bound_per_point": list(self.bound_per_point),
            "error_per_point": list(self.error_per_point),
            "max_error_ratio": self.max_error_ratio,
            "homogeneity_defect": self.homogeneity_defect,
            "homogeneity_points": self.homogeneity_points,
            "el_defect_of_q": self.el_defect_of_q,
            "junkim_defect_of_q": self.junkim_defect_of_q,
            "defect_pairs_checked": self.defect_pairs_checked,
            "notes": list(self.notes),
        }
        if self.q is not None:
            summary = {
                "n_points": len(self.q),
                "iterations": self.q.meta.get("iterations"),
                "final_change": self.q.meta.get("final_change"),
            }
            if self.q.domain_grid.ndim == 1 and len(self.q) <= 256:
                summary["domain"] = self.q.domain_grid.tolist()
                summary["values"] = self.q.values.tolist()
            doc["q"] = summary
        else:
            doc["q"] = None
        return doc


# =========================================================================
# The verification pipeline
# =========================================================================

# Full defect-pair enumeration is quadratic with grid lookups; above this
# grid size only pairs through the origin are enumerated (on geometric
# grids those are the in-range pairs anyway).
_FULL_PAIR_LIMIT = 48


def _failing_certificate(config, grid_size, detail, witness):
    return StabilityCertificate(
        m=config.m, L=config.L, p=config.p, tol=config.tol, grid_size=grid_size,
        hypothesis_defect_ok=False, defect_worst_ratio=math.inf, defect_witness=witness,
        hypothesis_phi_ok=False, phi_worst_ratio=math.nan, phi_witness=None,
        one_step_ok=False, one_step_worst_ratio=math.nan,
        q=None, approximant_iterations=0, scale=1.0,
        bound_per_point=(), error_per_point=(), max_error_ratio=math.inf,
        homogeneity_defect=math.inf, homogeneity_points=0,
        el_defect_of_q=math.inf, junkim_defect_of_q=math.inf, defect_pairs_checked=0,
        notes=(detail,))


def verify_stability(f, phi, config: StabilityConfig, grid, n_max=80) -> StabilityCertificate:
    """Run every check and assemble the stability certificate.

    ``grid`` must be finite, contain the zero point, and be m-closed
    enough for the homogeneity check to see at least one pair (x, m x).
    Hypothesis violations produce a failing certificate with witnesses;
    only malformed inputs and numerical overflow raise.
    """
    g = np.array(grid, dtype=float)
    if np.isnan(g).any() or np.isinf(g).any():
        raise InputError("grid must be finite")
    rows = g if g.ndim == 2 else g[:, None]
    n_pts = len(rows)
    norm = config.codomain.norm
    points = [g[i] if g.ndim == 2 else float(g[i]) for i in range(n_pts)]
    zero_idx = next((i for i in range(n_pts) if not np.any(rows[i])), None)
    if zero_idx is None:
        raise InputError("grid must contain the zero point")

    # f(0) = 0 is the ground everything else stands on.
    f0 = norm(np.asarray(f(points[zero_idx]), dtype=float))
    if f0 > config.tol:
        return _failing_certificate(
            config, n_pts, f"f(0) has norm {f0!r}, expected 0", (points[zero_idx],))

    pairs = [(points[i], points[j]) for i in range(n_pts) for j in range(n_pts)]
    if getattr(phi, "excludes_zero", False):
        # The power-law hypotheses are stated away from the origin only.
        defect_pairs = [(x, y) for x, y in pairs
                        if _is_nonzero(x) and _is_nonzero(y)]
    else:
        defect_pairs = pairs

    phi_report = phi_contractivity_check(phi, config.m, config.L, pairs)
    defect_report = hypothesis_defect_check(f, phi, config.m, defect_pairs,
                                            norm=norm, tol=config.tol)

    # One-step estimate: |f(m x)/m^3 - f(x)| <= phi(x, 0) / (2 |m|^3).
    m3 = config.m**3
    one_step_worst = 0.0
    one_step_ok = True
    for x in points:
        xm = config.m * np.asarray(x, dtype=float)
        lhs = norm(np.asarray(f(xm if g.ndim == 2 else float(xm)), dtype=float) / m3
                   - np.asarray(f(x), dtype=float))
        rhs = phi_at_zero(phi, x) / (2.0 * abs(config.m) ** 3)
        one_step_worst = max(one_step_worst, _ratio(lhs, rhs))
        if lhs > rhs + config.tol * max(1.0, rhs):
            one_step_ok = False

    q = cubic_approximant(f, config.m, g, n_max=n_max, tol=config.tol,
                          codomain=config.codomain)
    scale = max(1.0, max(norm(q.values[i]) for i in range(n_pts)))

    bounds = tuple(stability_bound(config, phi, x) for x in points)
    errors = tuple(norm(np.asarray(f(points[i]), dtype=float) - q.values[i])
                   for i in range(n_pts))
    max_error_ratio = max((_ratio(e, b) for e, b in zip(errors, bounds)), default=0.0)

    homo_defect = 0.0
    homo_points = 0
    for i in range(n_pts):
        j = q.try_index(config.m * rows[i])
        if j is None:
            continue
        homo_points += 1
        homo_defect = max(homo_defect, norm(q.values[j] - m3 * q.values[i]))

    el_q, jk_q, n_checked = _solution_defects(q, config.m, norm, n_pts, zero_idx)

    notes = []
    if not defect_report.passed:
        notes.append(f"hypothesis defect check failed: {defect_report.detail}")
    if not phi_report.passed:
        notes.append(f"phi contractivity check failed: {phi_report.detail}")

    return StabilityCertificate(
        m=config.m, L=config.L, p=config.p, tol=config.tol, grid_size=n_pts,
        hypothesis_defect_ok=defect_report.passed,
        defect_worst_ratio=defect_report.worst_ratio,
        defect_witness=defect_report.witness,
        hypothesis_phi_ok=phi_report.passed,
        phi_worst_ratio=phi_report.worst_ratio,
        phi_witness=phi_report.witness,
        one_step_ok=one_step_ok,
        one_step_worst_ratio=one_step_worst,
        q=q,
        approximant_iterations=q.meta.get("iterations", 0),
        scale=scale,
        bound_per_point=bounds,
        error_per_point=errors,
        max_error_ratio=max_error_ratio,
        homogeneity_defect=homo_defect,
        homogeneity_points=homo_points,
        el_defect_of_q=el_q,
        junkim_defect_of_q=jk_q,
        defect_pairs_checked=n_checked,
        notes=tuple(notes))


def _solution_defects(q: SampledMap, m, norm, n_pts, zero_idx):
    """Equation defects of the recovered q over the in-range grid pairs.

    A pair is in range when every point the equations touch lands on the
    grid.  Large grids enumerate only pairs through the origin; on the
    geometric grids used here those are the in-range pairs.
    """
    if n_pts <= _FULL_PAIR_LIMIT:
        candidates = [(i, j) for i in range(n_pts) for j in range(n_pts)]
    else:
        candidates = ([(zero_idx, j) for j in range(n_pts)]
                      + [(i, zero_idx) for i in range(n_pts) if i != zero_idx])
    el_worst = 0.0
    jk_worst = 0.0
    checked = 0
    for i, j in candidates:
        x = q.domain_grid[i]
        y = q.domain_grid[j]
        el_pts = (x + m * y, m * x - y, x + y, x - y, y)
        jk_pts = (2.0 * x + y, 2.0 * x - y, x + y, x - y, x)
        el_ok = all(q.try_index(pt) is not None for pt in el_pts)
        jk_ok = all(q.try_index(pt) is not None for pt in jk_pts)
        if not (el_ok or jk_ok):
            continue
        checked += 1
        if el_ok:
            el_worst = max(el_worst, el_defect(q, m, x, y, norm=norm))
        if jk_ok:
            jk_worst = max(jk_worst, junkim_defect(q, x, y, norm=norm))
    return el_worst, jk_worst, checked
