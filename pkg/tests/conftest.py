"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own algorithms:
metric closures run over exact Python integers, and the chain-infimum
oracle enumerates simple chains by brute force.
"""

from __future__ import annotations

import itertools

import numpy as np


def integer_metric(rng, n, lo=1, hi=16) -> np.ndarray:
    """Random integer-valued metric via exact integer metric closure.

    All entries are small integers, so they are exact in float64 and the
    triangle inequality holds without any rounding slack.
    """
    W = rng.integers(lo, hi + 1, size=(n, n))
    W = np.triu(W, 1)
    W = W + W.T
    D = [[int(W[i, j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = D[i][k] + D[k][j]
                if via < D[i][j]:
                    D[i][j] = via
    return np.array(D, dtype=float)


def random_b_metric(rng, n, kappa) -> np.ndarray:
    """Random b-metric with modulus kappa: an exact integer metric scaled
    entrywise by symmetric factors in [1, kappa]."""
    M = integer_metric(rng, n)
    F = rng.uniform(1.0, kappa, size=(n, n))
    F = np.triu(F, 1)
    F = F + F.T + np.eye(n)
    return M * F


def random_generalized_b_metric(rng, n, kappa, split_prob=0.3):
    """Random generalized b-metric: with probability split_prob the points
    fall into two blocks at mutual distance +inf."""
    if n >= 2 and rng.random() < split_prob:
        n1 = int(rng.integers(1, n))
        D = np.full((n, n), np.inf)
        D[:n1, :n1] = random_b_metric(rng, n1, kappa) if n1 > 1 else [[0.0]]
        D[n1:, n1:] = random_b_metric(rng, n - n1, kappa) if n - n1 > 1 else [[0.0]]
        return D
    return random_b_metric(rng, n, kappa)


def chain_oracle(D, p) -> np.ndarray:
    """Brute-force chain infimum: minimum over all simple chains of the
    sum of D**p along the links.  Exponential; for small n only."""
    n = len(D)
    with np.errstate(invalid="ignore"):
        W = np.where(np.isinf(D), np.inf, np.power(D, p))
    best = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            others = [v for v in range(n) if v != i and v != j]
            b = W[i, j]
            for k in range(1, len(others) + 1):
                for mid in itertools.permutations(others, k):
                    total = W[i, mid[0]]
                    for a, bb in zip(mid, mid[1:]):
                        total += W[a, bb]
                    total += W[mid[-1], j]
                    if total < b:
                        b = total
            best[i, j] = b
    return best


def triple_oracle_b_metric(D, kappa, tol=1e-12):
    """Exhaustive b-metric check; returns (passed, first_violation)."""
    n = len(D)
    for i in range(n):
        if not D[i][i] <= tol:
            return False, ("identity", (i, i))
    for i in range(n):
        for j in range(n):
            if i != j and D[i][j] <= tol:
                return False, ("separation", (i, j))
    for i in range(n):
        for j in range(n):
            if not (D[i][j] == D[j][i] or abs(D[i][j] - D[j][i]) <= tol):
                return False, ("symmetry", (i, j))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if D[i][j] > kappa * (D[i][k] + D[k][j]) + tol:
                    return False, ("relaxed_triangle", (i, j, k))
    return True, None
