"""Command line interface.

Four subcommands:

* ``metrize``       chain-metrize a b-metric distance matrix file
* ``fixpoint``      run a named contraction scenario with certified bounds
* ``verify``        run the cubic-stability pipeline from a JSON config
* ``example-lhalf`` frozen L^{1/2}[0,1] reproduction at m = 2 and m = 3

Every run prints one JSON report to stdout.  Reports are bitwise
reproducible for identical config and seed: timing data is therefore
excluded unless ``--timings`` is passed.  Exit codes: 0 when the verdict
is pass, 1 on a certified failure (violated hypothesis, failed bound,
divergence), 2 on an input error (malformed file, bad flag, bad config).

The environment variable ``ULAMSTAB_TOL`` overrides the default
tolerance (1e-9) wherever a command or config does not set one.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .core_spaces import (
    GeneralizedBMetricSpace,
    euclidean_norm,
    load_distance_csv,
    load_distance_json,
    save_distance_csv,
)
from .cubic_stability import (
    ConstantBound,
    PowerLaw,
    ShiftNorm,
    StabilityConfig,
    el_defect,
    m_closed_grid,
    phi_at_zero,
    verify_stability,
)
from .errors import (
    HypothesisViolation,
    InputError,
    InvalidBMetricError,
    OverflowGuardError,
)
from .fixed_point import ContractionMap, Outcome, iterate
from .function_spaces import LHalfSpace, example_corpus
from .metrization import chain_metric, p_exponent

__all__ = ["main", "run_example_lhalf"]

TOL_ENV_VAR = "ULAMSTAB_TOL"


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError as exc:
        raise InputError(f"{TOL_ENV_VAR}={raw!r} is not a number") from exc
    if math.isnan(tol) or tol <= 0:
        raise InputError(f"{TOL_ENV_VAR} must be positive, got {raw!r}")
    return tol


def _emit(doc, out_path=None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


def _envelope(command, config, verdict, report, seed=None, timings=None) -> dict:
    return {
        "command": command,
        "config": config,
        "versions": {"ulamstab": __version__, "numpy": np.__version__},
        "seed": seed,
        "timings": timings,
        "verdict": verdict,
        "report": report,
    }


# =========================================================================
# metrize
# =========================================================================

def _cmd_metrize(args, timings):
    path = args.infile
    if path.endswith(".json"):
        D, kappa = load_distance_json(path)
        if args.kappa is not None and abs(args.kappa - kappa) > 0:
            raise InputError(
                f"--kappa {args.kappa!r} contradicts kappa {kappa!r} stored in {path}")
    else:
        D = load_distance_csv(path)
        if args.kappa is None:
            raise InputError("--kappa is required with CSV input")
        kappa = args.kappa

    space = GeneralizedBMetricSpace(D=D, kappa=kappa)
    config = {"in": path, "kappa": kappa, "p": args.p, "out": args.out}
    try:
        cm = chain_metric(space, p=args.p)
    except InvalidBMetricError as exc:
        report = {"validation": exc.report.to_dict(), "n": space.n}
        return _envelope("metrize", config, "fail", report), 1

    if args.out:
        save_distance_csv(args.out, cm.delta)
    Dp = np.power(space.D, cm.p)
    sandwich_ok = bool(np.all(cm.delta <= Dp + 1e-12)
                       and np.all(0.25 * Dp <= cm.delta + 1e-12))
    report = {
        "n": space.n,
        "kappa": kappa,
        "p": cm.p,
        "delta_csv": args.out,
        "sandwich_ok": sandwich_ok,
        "unreachable_pairs": int(np.isinf(cm.delta).sum() // 2),
    }
    if space.n <= 16:
        report["delta"] = [list(map(float, row)) for row in cm.delta]
    return _envelope("metrize", config, "pass", report), 0


# =========================================================================
# fixpoint
# =========================================================================

def _two_component_distance(a, b):
    # Points on opposite sides of 0 live in different components.
    if (a >= 0) != (b >= 0):
        return math.inf
    return abs(a - b)


_SCENARIOS = {
    # name: (apply, distance, p, default_L, default_x0)
    "halving": (lambda x: x / 2.0, lambda a, b: abs(a - b), 1.0, 0.5, 1.0),
    "setzero": (lambda x: 0.0, lambda a, b: abs(a - b), 1.0, 0.5, 5.0),
    "two-component": (lambda x: -x / 2.0, _two_component_distance, 1.0, 0.5, 1.0),
}


def _cmd_fixpoint(args, timings):
    if args.scenario not in _SCENARIOS:
        raise InputError(
            f"unknown scenario {args.scenario!r}; choose from {sorted(_SCENARIOS)}")
    apply_fn, distance, p, default_L, default_x0 = _SCENARIOS[args.scenario]
    L = default_L if args.L is None else args.L
    x0 = default_x0 if args.x0 is None else args.x0
    tol = args.tol if args.tol is not None else _default_tol()
    config = {"scenario": args.scenario, "L": L, "x0": x0,
              "tol": tol, "max_iter": args.max_iter}
    cmap = ContractionMap(apply=apply_fn, L=L)
    try:
        result = iterate(cmap, x0, distance, p=p, tol=tol, max_iter=args.max_iter)
    except HypothesisViolation as exc:
        report = {"hypothesis_violation": str(exc),
                  "witness": [float(w) for w in (exc.witness or ())],
                  "observed": exc.observed, "allowed": exc.allowed}
        return _envelope("fixpoint", config, "fail", report), 1
    verdict = "pass" if result.outcome is Outcome.CONVERGED else "fail"
    return (_envelope("fixpoint", config, verdict, result.to_dict()),
            0 if verdict == "pass" else 1)


# =========================================================================
# verify
# =========================================================================

_BUILTIN_F = {
    "cubic": lambda u: u**3,
    "cubic_plus_linear": lambda u: u**3 + u,
}


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _field(cfg, name, kind, where="config"):
    cur = cfg
    for part in name.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise InputError(f"{where}: missing field {name!r}")
        cur = cur[part]
    if kind is float and isinstance(cur, (int, float)) and not isinstance(cur, bool):
        return float(cur)
    if not isinstance(cur, kind):
        raise InputError(f"{where}: field {name!r} must be {kind.__name__}")
    return cur


def _build_f(doc):
    name = _field(doc, "f.name", str)
    if name == "poly":
        coeffs = _field(doc, "f.coefficients", list)
        if len(coeffs) > 4 or not coeffs:
            raise InputError("config: f.coefficients supports degree <= 3")
        cs = [float(c) for c in coeffs]

        def f(u):
            acc = 0.0
            for c in reversed(cs):
                acc = acc * u + c
            return acc

        return f, {"name": name, "coefficients": cs}
    if name in _BUILTIN_F:
        return _BUILTIN_F[name], {"name": name}
    raise InputError(
        f"config: unknown f.name {name!r}; choose from "
        f"{sorted(_BUILTIN_F) + ['poly']}")


def _build_phi(doc, m, norm):
    kind = _field(doc, "phi.kind", str)
    if kind == "shift_norm":
        return ShiftNorm(c=_field(doc, "phi.c", float), m=m, norm=norm)
    if kind == "power_law":
        return PowerLaw(lam=_field(doc, "phi.lambda", float),
                        s=_field(doc, "phi.s", float), norm=norm)
    if kind == "constant":
        return ConstantBound(value=_field(doc, "phi.value", float))
    raise InputError(f"config: unknown phi.kind {kind!r}")


def _build_space(doc):
    kind = _field(doc, "space.kind", str) if "space" in doc else "reals"
    if kind == "reals":
        return None, None  # codomain defaults to the real line
    if kind == "lhalf":
        qn = int(doc.get("space", {}).get("quadrature_n", 1024))
        lh = LHalfSpace(qn)
        return lh, lh.space()
    raise InputError(f"config: unknown space.kind {kind!r}")


def _build_grid(doc, m, lhalf):
    spec = doc.get("grid", {"base": [1.0], "levels": 2, "symmetric": True})
    if not isinstance(spec, dict):
        raise InputError("config: field 'grid' must be an object")
    if "points" in spec:
        pts = np.asarray(spec["points"], dtype=float)
        return pts, {"points": pts.tolist()}
    levels = int(spec.get("levels", 2))
    symmetric = bool(spec.get("symmetric", True))
    if lhalf is not None:
        seed = int(spec.get("seed", 7))
        base = example_corpus(lhalf.quadrature_n, seed=seed)
        echo = {"corpus": True, "seed": seed, "levels": levels, "symmetric": symmetric}
    else:
        base = [float(b) for b in spec.get("base", [1.0])]
        echo = {"base": base, "levels": levels, "symmetric": symmetric}
    return m_closed_grid(base, m, levels=levels, symmetric=symmetric), echo


def _per_point_csv(path, f, phi, config, cert):
    import csv as _csv

    q = cert.q
    scalar = q.domain_grid.ndim == 1
    norm = config.codomain.norm
    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["index", "x" if scalar else "x_norm",
                         "defect_y0", "phi_x0", "error", "bound"])
        for i in range(len(q)):
            x = q.point_at(i)
            xcol = repr(float(x)) if scalar else repr(phi.norm(x) if hasattr(phi, "norm")
                                                      else float(np.linalg.norm(x)))
            writer.writerow([
                i, xcol,
                repr(el_defect(f, config.m, x, 0.0 if scalar else np.zeros_like(x),
                               norm=norm)),
                repr(phi_at_zero(phi, x)),
                repr(cert.error_per_point[i]),
                repr(cert.bound_per_point[i]),
            ])


def _cmd_verify(args, timings):
    doc = _load_config(args.config)
    tol = float(doc["tol"]) if "tol" in doc else _default_tol()
    m = _field(doc, "m", float)
    lhalf, codomain = _build_space(doc)
    norm = lhalf.norm if lhalf is not None else euclidean_norm
    f, f_echo = _build_f(doc)
    phi = _build_phi(doc, m, norm)
    L = _field(doc, "L", float) if "L" in doc else phi.lipschitz(m)
    p = codomain.p if codomain is not None else 1.0
    config = StabilityConfig(m=m, L=L, p=p, tol=tol, codomain=codomain)
    grid, grid_echo = _build_grid(doc, m, lhalf)

    cert = verify_stability(f, phi, config, grid)
    if args.csv:
        if cert.q is None:
            raise InputError("per-point CSV requires a certificate with an extracted q")
        _per_point_csv(args.csv, f, phi, config, cert)

    echo = {"f": f_echo, "m": m, "L": L, "phi": doc.get("phi"),
            "space": doc.get("space", {"kind": "reals"}), "grid": grid_echo,
            "tol": tol, "csv": args.csv}
    verdict = "pass" if cert.passed else "fail"
    return (_envelope("verify", echo, verdict, cert.to_dict(),
                      seed=doc.get("seed")),
            0 if cert.passed else 1)


# =========================================================================
# example-lhalf
# =========================================================================

def cubic_linear_defect_constant(m: float) -> float:
    """Exact defect constant of f(u) = u**3 + u: the residual expands to
    2m(1 - m**2) (x + m y), so the defect is |2m(1 - m**2)| |x + m y|."""
    return abs(2.0 * m * (1.0 - m**2))


def run_example_lhalf(quadrature_n=1024, ms=(2.0, 3.0), tol=None, levels=1, seed=7) -> dict:
    """Frozen reproduction: f(u) = u**3 + u on L^{1/2}[0,1].

    For each m the equation defect of f is measured over the fixed signal
    corpus and compared with the exact constant |2m(1 - m**2)| and with
    the smaller constant |2m(1 - m)| that is sometimes quoted for this
    example; the certificate is then built with the exact constant.
    """
    tol = tol if tol is not None else _default_tol()
    space = LHalfSpace(quadrature_n)
    qspace = space.space()
    f = _BUILTIN_F["cubic_plus_linear"]
    corpus = example_corpus(quadrature_n, seed=seed)

    runs = []
    all_pass = True
    for m in ms:
        c_exact = cubic_linear_defect_constant(m)
        c_quoted = abs(2.0 * m * (1.0 - m))
        worst_rel = 0.0
        measured = []
        for x in corpus:
            for y in corpus:
                w = space.norm(x + m * y)
                if w < 1e-9:
                    continue
                c_meas = el_defect(f, m, x, y, norm=space.norm) / w
                measured.append(c_meas)
                worst_rel = max(worst_rel, abs(c_meas - c_exact) / c_exact)
        phi = ShiftNorm(c=c_exact, m=m, norm=space.norm)
        config = StabilityConfig(m=m, L=phi.lipschitz(m), p=qspace.p, tol=tol,
                                 codomain=qspace)
        grid = m_closed_grid(corpus, m, levels=levels, symmetric=True)
        cert = verify_stability(f, phi, config, grid)
        all_pass = all_pass and cert.passed and worst_rel <= 1e-6
        runs.append({
            "m": m,
            "defect_constant": {
                "derived": c_exact,
                "measured_mean": float(np.mean(measured)) if measured else math.nan,
                "max_rel_deviation": worst_rel,
                "quoted": c_quoted,
                "note": (
                    "the measured defect of u^3 + u matches |2m(1-m^2)| |x + m y|; "
                    "the commonly quoted |2m(1-m)| is smaller by the factor |1 + m| "
                    "and does not dominate the defect"),
            },
            "pairs_measured": len(measured),
            "certificate": cert.to_dict(),
        })
    return {"quadrature_n": quadrature_n, "tol": tol, "seed": seed,
            "levels": levels, "runs": runs, "all_pass": all_pass}


def _cmd_example_lhalf(args, timings):
    report = run_example_lhalf(quadrature_n=args.quadrature_n,
                               tol=args.tol, seed=args.seed)
    config = {"quadrature_n": args.quadrature_n, "tol": report["tol"],
              "seed": args.seed}
    verdict = "pass" if report["all_pass"] else "fail"
    return (_envelope("example-lhalf", config, verdict, report, seed=args.seed),
            0 if report["all_pass"] else 1)


# =========================================================================
# entry point
# =========================================================================

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", default=None,
                        help="also write the JSON report to this file")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the report "
                             "(breaks bitwise reproducibility)")

    parser = argparse.ArgumentParser(
        prog="ulamstab",
        description="b-metric metrization, certified fixed points, and "
                    "cubic-stability certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("metrize", parents=[common],
                        help="chain-metrize a distance matrix file")
    pm.add_argument("--in", dest="infile", required=True,
                    help="distance matrix: CSV (token 'inf') or JSON with kappa")
    pm.add_argument("--kappa", type=float, help="relaxation modulus (CSV input)")
    pm.add_argument("--p", type=float, default=None,
                    help="override the exponent (default log_{2 kappa} 2)")
    pm.add_argument("--out", default=None,
                    help="write the metrized matrix as CSV here")

    pf = sub.add_parser("fixpoint", parents=[common],
                        help="run a named contraction scenario")
    pf.add_argument("--scenario", required=True,
                    help=f"one of {sorted(_SCENARIOS)}")
    pf.add_argument("--L", type=float, default=None, help="contraction constant")
    pf.add_argument("--x0", type=float, default=None, help="starting point")
    pf.add_argument("--tol", type=float, default=None, help="residual tolerance")
    pf.add_argument("--max-iter", type=int, default=200)

    pv = sub.add_parser("verify", parents=[common],
                        help="run the stability pipeline from a config")
    pv.add_argument("--config", required=True, help="JSON configuration file")
    pv.add_argument("--csv", default=None, help="write a per-point CSV here")

    pe = sub.add_parser("example-lhalf", parents=[common],
                        help="frozen L^{1/2}[0,1] reproduction at m = 2 and 3")
    pe.add_argument("--quadrature-n", type=int, default=1024)
    pe.add_argument("--tol", type=float, default=None)
    pe.add_argument("--seed", type=int, default=7)

    return parser


_DISPATCH = {
    "metrize": _cmd_metrize,
    "fixpoint": _cmd_fixpoint,
    "verify": _cmd_verify,
    "example-lhalf": _cmd_example_lhalf,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    timings = {} if args.timings else None
    try:
        doc, code = _DISPATCH[args.command](args, timings)
    except InvalidBMetricError as exc:
        print(f"certified failure: {exc}", file=sys.stderr)
        return 1
    except HypothesisViolation as exc:
        print(f"certified failure: {exc}", file=sys.stderr)
        return 1
    except OverflowGuardError as exc:
        print(f"certified failure: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    if timings is not None:
        timings["wall_s"] = time.perf_counter() - started
        doc["timings"] = timings
    _emit(doc, args.report)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
