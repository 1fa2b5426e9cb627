"""Command-line front end.

Subcommands: ``classify | solve | verify | couple-check | lemma-test``.
All outputs are batch files (CSV/JSON, plus rendered figures next to the
delimited output); there is no interactive mode.

Exit codes (stable contract):
  0  success
  2  parameter validation failure
  3  eigensolver did not converge
  4  a mandatory bound check came back unsatisfied
  5  a randomized lemma trial found a violation

The default seed can be overridden by the ``HYPOSPEC_SEED`` environment
variable; an explicit ``--seed`` flag wins over both.  A ``--config`` file
holds flat ``key = value`` lines; command-line flags override file values.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import couples, eigensolver, figures, geometry, reporting, suites
from .discretization import (
    assemble_dirichlet_L,
    assemble_multipliers,
    assemble_skew_fields,
    build_grid,
    clamped_proxy,
    write_coordinate_file,
)
from .errors import HypospecError, ValidationError
from .inequalities import (
    ExponentPair,
    check_clamped_bound,
    check_clamped_chebyshev_form,
    check_clamped_gap,
    check_dirichlet_bound,
    check_ppw_gap,
    check_yang_first,
    check_yang_second,
    spectrum_from_array,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_BOUND_FAILURE = 4
EXIT_LEMMA_VIOLATION = 5

_CONVERTERS = {
    "a": float, "b": float, "m": float, "r": float, "side": float,
    "sigma": int, "n": int, "samples": int, "h": float, "k": int,
    "kmax": int, "alpha": float, "beta": float, "lam": float, "grid": int,
    "trials": int, "seed": int, "tol": float, "tol_rel": float,
    "tol_abs": float, "max_iter": int, "domain": str, "family": str,
    "lemma": str, "out": str, "json": str, "export_matrix": str,
    "spectrum": str, "box": str,
    "zero_coefficients": None, "proxy": None, "gate": None, "figures": None,
    "operator_check": None,
}

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _parse_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"bad config line (expected key = value): {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def _convert(key: str, raw: str):
    conv = _CONVERTERS.get(key)
    if conv is None:  # boolean option
        low = raw.lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise ValidationError(f"config key {key}: not a boolean: {raw!r}")
    return conv(raw)


def _merge(args: argparse.Namespace, defaults: dict) -> argparse.Namespace:
    """Resolve each option as: explicit flag > config file > built-in default."""
    config = _parse_config(args.config) if getattr(args, "config", None) else {}
    unknown = set(config) - set(defaults)
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for key, default in defaults.items():
        if getattr(args, key, None) is None:
            if key in config:
                setattr(args, key, _convert(key, config[key]))
            else:
                setattr(args, key, default)
    return args


def _default_seed() -> int:
    env = os.environ.get("HYPOSPEC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"HYPOSPEC_SEED must be an integer, got {env!r}") from exc
    return eigensolver.DEFAULT_SEED


def _make_domain(args) -> geometry.DomainSpec:
    kind = (args.domain or "").lower()
    if kind in ("torus", "torus-shell"):
        return geometry.TorusShell(a=args.a, b=args.b, m=args.m)
    if kind in ("greiner-ball", "ball"):
        return geometry.GreinerBall(r=args.r)
    if kind == "box":
        return geometry.box_domain(args.side, n=args.n)
    raise ValidationError(
        f"unknown or missing --domain {args.domain!r} (torus | greiner-ball | box)"
    )


def _domain_meta(args) -> dict:
    kind = (args.domain or "").lower()
    if kind in ("torus", "torus-shell"):
        return {"kind": "torus", "a": args.a, "b": args.b, "m": args.m}
    if kind in ("greiner-ball", "ball"):
        return {"kind": "greiner-ball", "r": args.r}
    return {"kind": "box", "side": args.side}


def _parse_box(spec: str | None, dim: int):
    if spec is None:
        return None
    parts = [float(p) for p in spec.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 2 * dim:
        raise ValidationError(
            f"--box needs {2 * dim} comma-separated numbers (lo,hi per axis)"
        )
    return tuple((parts[2 * i], parts[2 * i + 1]) for i in range(dim))


def _figure_path(out: str, suffix: str = ".png") -> Path:
    return Path(out).with_suffix(suffix)


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    gp = geometry.GreinerParams(n=args.n, sigma=args.sigma)
    dom = _make_domain(args)
    result = geometry.classify_domain(dom, gp, samples=args.samples)
    print(f"classification: {result.kind.value.lower()}")
    points = []
    for p in result.characteristic_points:
        points.append({"x": list(p.x), "y": list(p.y), "t": p.t, "z_norm": p.z_norm})
        print(f"  characteristic point: |z| = {p.z_norm:.9g}, t = {p.t:.9g}")
    if args.json:
        reporting.write_json(
            {
                "domain": _domain_meta(args),
                "n": args.n,
                "sigma": args.sigma,
                "samples": args.samples,
                "classification": result.kind.value,
                "characteristic_points": points,
                "gradient_scale": result.gradient_scale,
                "tolerance": result.tolerance,
            },
            args.json,
        )
        print(f"wrote {args.json}")
    return EXIT_OK


def _solve_pipeline(args):
    gp = geometry.GreinerParams(n=args.n, sigma=args.sigma)
    dom = _make_domain(args)
    result = geometry.classify_domain(dom, gp, samples=501)
    if result.is_characteristic:
        print(
            "warning: characteristic boundary; eigenfunction smoothness is "
            "not guaranteed on this domain",
            file=sys.stderr,
        )
    grid = build_grid(dom, gp, args.h, box=_parse_box(args.box, 2 * args.n + 1))
    if args.k >= grid.N:
        raise ValidationError(f"k = {args.k} must be below the unknown count N = {grid.N}")
    A = assemble_dirichlet_L(grid, gp, zero_coefficients=args.zero_coefficients)
    pairs = eigensolver.smallest_k_eigenpairs(
        A, args.k, tol=args.tol, max_iter=args.max_iter, seed=args.seed
    )
    return gp, dom, grid, A, pairs


def cmd_solve(args) -> int:
    gp, dom, grid, A, pairs = _solve_pipeline(args)
    print(f"interior unknowns: {grid.N}; method: {pairs.method}; "
          f"converged: {pairs.converged}")
    for i, (v, r) in enumerate(zip(pairs.values, pairs.residuals), start=1):
        print(f"  lambda_{i} = {v:.12g}   (residual {r:.2e})")
    if args.out:
        reporting.write_spectrum_csv(pairs.values, pairs.residuals, args.out)
        print(f"wrote {args.out}")
        if args.figures:
            fig = figures.save_spectrum_figure(
                pairs.values, pairs.residuals, _figure_path(args.out)
            )
            print(f"wrote {fig}")
    if args.export_matrix:
        write_coordinate_file(A, args.export_matrix)
        print(f"wrote {args.export_matrix}")
    if not pairs.converged:
        print("solver did not reach the residual tolerance", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _dirichlet_rows(seq, kmax, n, ep, tol_rel, tol_abs):
    rows = []
    for k in range(1, kmax + 1):
        rows.append(check_yang_first(seq, k, n, tol_rel=tol_rel, tol_abs=tol_abs))
        rows.append(check_ppw_gap(seq, k, n, tol_rel=tol_rel, tol_abs=tol_abs))
        rows.append(check_yang_second(seq, k, n, tol_rel=tol_rel, tol_abs=tol_abs))
        if ep is not None:
            rows.append(check_dirichlet_bound(seq, k, n, ep,
                                              tol_rel=tol_rel, tol_abs=tol_abs))
    return rows


def _clamped_rows(seq, kmax, n, ep, tol_rel, tol_abs, proxy):
    rows = []
    two_two = ExponentPair(2.0, 2.0)
    for k in range(1, kmax + 1):
        rows.append(check_clamped_bound(seq, k, n, two_two,
                                        tol_rel=tol_rel, tol_abs=tol_abs))
        rows.append(check_clamped_chebyshev_form(seq, k, n, two_two,
                                                 tol_rel=tol_rel, tol_abs=tol_abs))
        rows.append(check_clamped_gap(seq, k, n, tol_rel=tol_rel, tol_abs=tol_abs))
        if ep is not None and (ep.alpha, ep.beta) != (2.0, 2.0):
            rows.append(check_clamped_bound(seq, k, n, ep,
                                            tol_rel=tol_rel, tol_abs=tol_abs))
            rows.append(check_clamped_chebyshev_form(seq, k, n, ep,
                                                     tol_rel=tol_rel, tol_abs=tol_abs))
    return [r.relabel(proxy=proxy) for r in rows]


def cmd_verify(args) -> int:
    families = ["dirichlet", "clamped"] if args.family == "both" else [args.family]
    ep = None
    if (args.alpha is None) != (args.beta is None):
        raise ValidationError("--alpha and --beta must be given together")
    if args.alpha is not None:
        ep = ExponentPair(args.alpha, args.beta)
        ep.require_admissible()

    reports = []
    meta: dict = {
        "families": families,
        "kmax": args.kmax,
        "n": args.n,
        "tol_rel": args.tol_rel,
        "tol_abs": args.tol_abs,
        "alpha": args.alpha,
        "beta": args.beta,
    }

    solver_ok = True
    if args.spectrum:
        base = np.sort(reporting.read_spectrum_csv(args.spectrum))
        meta["spectrum"] = str(args.spectrum)
        meta["proxy"] = bool(args.proxy)
        operators = None
    else:
        if args.domain is None:
            raise ValidationError("verify needs either --spectrum or --domain flags")
        args.k = args.kmax + 1
        gp, dom, grid, A, pairs = _solve_pipeline(args)
        solver_ok = pairs.converged
        base = pairs.values
        operators = (gp, grid, A, pairs)
        meta.update({
            "domain": _domain_meta(args), "sigma": args.sigma, "h": args.h,
            "seed": args.seed, "interior_unknowns": grid.N,
            "solver_tol": args.tol, "proxy": True,
        })

    if args.kmax < 1:
        raise ValidationError("--kmax must be >= 1")
    for family in families:
        if family == "dirichlet":
            seq = spectrum_from_array(base)
            reports.extend(_dirichlet_rows(seq, args.kmax, args.n, ep,
                                           args.tol_rel, args.tol_abs))
        else:
            vals = base**2 if (operators is not None or args.proxy) else base
            proxy_flag = operators is not None or bool(args.proxy)
            seq = spectrum_from_array(np.sort(vals))
            reports.extend(_clamped_rows(seq, args.kmax, args.n, ep,
                                         args.tol_rel, args.tol_abs, proxy_flag))

    if operators is not None and args.operator_check:
        gp, grid, A, pairs = operators
        Ts = assemble_skew_fields(grid, gp)
        Bs = assemble_multipliers(grid)
        couple_ab = (args.alpha, args.beta) if ep is not None else (2.0, 2.0)
        for family in families:
            if family == "dirichlet":
                mat, prs, proxy_flag = A, pairs, False
            else:
                mat = clamped_proxy(A)
                prs, proxy_flag = eigensolver.proxy_pairs(pairs, mat), True
            for k in range(1, args.kmax + 1):
                pc = couples.PowerCouple(couple_ab[0], couple_ab[1],
                                         float(prs.values[k]))
                rep = eigensolver.verify_lemma_2_5(mat, Ts, Bs, prs, k, pc)
                reports.append(rep.relabel(proxy=proxy_flag))

    width = max(len(str(r.inequality_id)) for r in reports)
    print(f"{'inequality':<{width}}  {'k':>3} {'proxy':>5}  {'lhs':>13} {'rhs':>13} "
          f"{'slack':>10}  ok")
    for r in reports:
        print(f"{str(r.inequality_id):<{width}}  {r.k:>3} "
              f"{'yes' if r.proxy else 'no':>5}  {r.lhs:>13.6g} {r.rhs:>13.6g} "
              f"{r.slack:>10.3g}  {'yes' if r.satisfied else 'NO'}")
    if args.out:
        reporting.write_bounds_csv(reports, args.out)
        print(f"wrote {args.out}")
        if args.figures:
            fig = figures.save_bounds_figure(reports, _figure_path(args.out))
            print(f"wrote {fig}")
    if args.json:
        reporting.write_bounds_json(reports, meta, args.json)
        print(f"wrote {args.json}")

    if not solver_ok:
        print("solver did not reach the residual tolerance", file=sys.stderr)
        return EXIT_SOLVER
    failed = [r for r in reports if not r.satisfied]
    if failed:
        print(f"{len(failed)} bound check(s) failed", file=sys.stderr)
        return EXIT_BOUND_FAILURE
    return EXIT_OK


def cmd_couple_check(args) -> int:
    pc = couples.PowerCouple(args.alpha, args.beta, args.lam)
    result = couples.check_membership(pc, args.grid,
                                      apply_necessary_gate=args.gate)
    nec = couples.necessary_condition(args.alpha, args.beta)
    print(f"necessary condition (beta >= 0 and alpha^2 <= 2 beta): "
          f"{'holds' if nec else 'fails'}")
    if result.rejected_by_necessary_condition:
        print("verdict: rejected (necessary condition)")
    else:
        print(f"verdict: {'accepted (grid-verified)' if result.accepted else 'rejected'}")
        print(f"worst residual: {result.worst_residual:.6e} "
              f"at (x, y) = ({result.argmax[0]:.6g}, {result.argmax[1]:.6g})")
    if args.json:
        reporting.write_json(
            {
                "alpha": args.alpha, "beta": args.beta, "lam": args.lam,
                "grid_points": args.grid, "necessary_condition": nec,
                "accepted": result.accepted,
                "rejected_by_necessary_condition":
                    result.rejected_by_necessary_condition,
                "worst_residual": result.worst_residual,
                "argmax": list(result.argmax),
                "label": result.label,
            },
            args.json,
        )
        print(f"wrote {args.json}")
    return EXIT_OK


def cmd_lemma_test(args) -> int:
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    runners = {
        "generalized": lambda: [suites.generalized_chebyshev_trials(args.trials, args.seed)],
        "power-mean": lambda: [suites.power_mean_trials(args.trials, args.seed)],
        "chebyshev": lambda: [suites.chebyshev_trials(args.trials, args.seed)],
        "all": lambda: suites.run_all(args.trials, args.seed),
    }
    if args.lemma not in runners:
        raise ValidationError(f"unknown --lemma {args.lemma!r}")
    summaries = runners[args.lemma]()
    bad = 0
    for s in summaries:
        print(f"{s.name}: trials={s.trials} evaluated={s.evaluated} "
              f"skipped={s.skipped} violations={s.violations} "
              f"worst_relative_slack={s.worst_relative_slack:.3e}")
        bad += s.violations
    if bad:
        print(f"{bad} violation(s) found", file=sys.stderr)
        return EXIT_LEMMA_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser plumbing

_COMMON_DOMAIN = {
    "domain": None, "a": 2.0, "b": 0.0, "m": 1.0, "r": 1.0, "side": 1.0,
    "sigma": 1, "n": 1,
}

DEFAULTS: dict[str, dict] = {
    "classify": {**_COMMON_DOMAIN, "samples": 2000, "json": None},
    "solve": {
        **_COMMON_DOMAIN, "h": 0.2, "k": 6, "box": None,
        "zero_coefficients": False, "tol": 1e-8, "max_iter": 2000,
        "seed": None, "out": None, "export_matrix": None, "figures": True,
    },
    "verify": {
        **_COMMON_DOMAIN, "spectrum": None, "family": "dirichlet", "kmax": 8,
        "alpha": None, "beta": None, "proxy": False, "h": 0.2, "box": None,
        "zero_coefficients": False, "tol": 1e-8, "max_iter": 2000,
        "seed": None, "tol_rel": 1e-12, "tol_abs": 1e-14,
        "out": None, "json": None, "figures": True, "operator_check": True,
    },
    "couple-check": {"alpha": None, "beta": None, "lam": 1.0, "grid": 200,
                     "gate": True, "json": None},
    "lemma-test": {"trials": 10_000, "lemma": "all", "seed": None},
}


def _add_domain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", choices=["torus", "torus-shell", "greiner-ball",
                                        "ball", "box"])
    p.add_argument("--a", type=float, help="torus shell profile radius (a > 0)")
    p.add_argument("--b", type=float, help="torus shell center height")
    p.add_argument("--m", type=float, help="torus shell tube radius (m > 0)")
    p.add_argument("--r", type=float, help="anisotropic ball radius (r > 0)")
    p.add_argument("--side", type=float, help="box side length")
    p.add_argument("--sigma", type=int, help="degeneracy order (>= 1)")
    p.add_argument("--n", type=int, help="coordinate pairs (assembly needs n = 1)")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h", type=float, help="grid spacing")
    p.add_argument("--box", help="grid box override: lo,hi per axis, comma separated")
    p.add_argument("--zero-coefficients", dest="zero_coefficients",
                   action=argparse.BooleanOptionalAction,
                   help="assemble the plain grid Laplacian (solver oracle mode)")
    p.add_argument("--tol", type=float, help="relative residual target")
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypospec",
        description="Spectra and universal eigenvalue bounds for degenerate "
                    "sub-elliptic operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a domain boundary")
    _add_domain_flags(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--json", help="write a JSON report here")
    p.add_argument("--config")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="assemble and compute smallest eigenpairs")
    _add_domain_flags(p)
    _add_solver_flags(p)
    p.add_argument("--k", type=int, help="number of eigenpairs")
    p.add_argument("--out", help="spectrum CSV path")
    p.add_argument("--export-matrix", dest="export_matrix",
                   help="matrix export path (coordinate text format)")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction,
                   help="render figures next to the CSV output")
    p.add_argument("--config")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="evaluate the bound catalog on a spectrum")
    _add_domain_flags(p)
    _add_solver_flags(p)
    p.add_argument("--spectrum", help="spectrum CSV (skip the fresh solve)")
    p.add_argument("--family", choices=["dirichlet", "clamped", "both"])
    p.add_argument("--kmax", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--proxy", action=argparse.BooleanOptionalAction,
                   help="mark a file spectrum as squared-operator output")
    p.add_argument("--tol-rel", dest="tol_rel", type=float)
    p.add_argument("--tol-abs", dest="tol_abs", type=float)
    p.add_argument("--out", help="bound table CSV path")
    p.add_argument("--json", help="bound table JSON path")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction)
    p.add_argument("--operator-check", dest="operator_check",
                   action=argparse.BooleanOptionalAction,
                   help="include the abstract commutator rows (fresh solves only)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("couple-check", help="grid membership test for a power couple")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lam", "--lambda", dest="lam", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--gate", action=argparse.BooleanOptionalAction,
                   help="apply the necessary-condition gate (default on)")
    p.add_argument("--json")
    p.add_argument("--config")
    p.set_defaults(func=cmd_couple_check)

    p = sub.add_parser("lemma-test", help="randomized suites for the three lemmas")
    p.add_argument("--trials", type=int)
    p.add_argument("--lemma", choices=["all", "generalized", "power-mean",
                                       "chebyshev"])
    p.add_argument("--seed", type=int)
    p.add_argument("--config")
    p.set_defaults(func=cmd_lemma_test)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge(args, DEFAULTS[args.command])
        if getattr(args, "seed", None) is None and "seed" in DEFAULTS[args.command]:
            args.seed = _default_seed()
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HypospecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
