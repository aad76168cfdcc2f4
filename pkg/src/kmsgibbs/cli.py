"""Command-line driver.

Exit codes: 0 all residuals within tolerance, 1 residual failure,
2 malformed input, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra, verify
from .cocycle import cocycle_V, kappa, parse_pair, vartheta
from .errors import CapExceededError, ConvergenceError, InconsistentError, NotationError
from .potential import FiniteRangePotential
from .reports import (atomic_write, dumps, element_to_json, load_element, report_schema, to_csv,
                      validate_report)
from .symbolic import format_cylinder, parse_cylinder
from .thermo import FiniteVolumeMeasure, cylinder_measure, normalize

EXIT_OK, EXIT_RESIDUAL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
KMS_TIMES = (0.0, 0.7, 1 + 0.3j)


@dataclass
class RunConfig:
    potential_path: str | None = None
    beta: float = 1.0
    tol: float = 1e-10
    depth: int = 4
    max_len: int = 4
    max_shift: int = 4
    span_cap: int = 20
    hull_cap: int = algebra.HULL_CAP
    seed: int = 0
    output_path: str | None = None
    format: str = "json"
    cylinder: str | None = None
    pair: str | None = None
    left_ctx: str = ""
    right_ctx: str = ""
    span: int = 12
    samples: int = 20
    element_a: str | None = None
    element_b: str | None = None

    def __post_init__(self):
        if self.tol <= 0:
            raise NotationError("--tol must be positive")
        for name in ("depth", "max_len", "max_shift", "span_cap", "hull_cap", "span", "samples"):
            if getattr(self, name) <= 0:
                raise NotationError(f"--{name.replace('_', '-')} must be positive")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(ns.potential, ns.beta, ns.tol, ns.depth, ns.max_len, ns.max_shift, ns.span_cap,
                   ns.hull_cap, ns.seed, ns.output, ns.format, ns.cylinder, ns.pair, ns.left_ctx,
                   ns.right_ctx, ns.span, ns.samples, ns.element_a, ns.element_b)


def _potential(cfg: RunConfig) -> FiniteRangePotential:
    if cfg.potential_path is None:
        raise NotationError("--potential is required")
    return FiniteRangePotential.load(cfg.potential_path)


def _require(value, flag: str):
    if value is None:
        raise NotationError(f"{flag} is required")
    return value


def _check(residual: float, tol: float, **extra) -> dict:
    return {"residual": float(residual), "passed": bool(residual <= tol), **extra}


def _cmd_pressure(cfg, U):
    m = normalize(U)
    pd = m.perron
    return {"lambda": pd.lam, "pressure": pd.pressure, "h": pd.h, "nu": pd.nu}, None


def _cmd_normalize(cfg, U):
    m = normalize(U)
    return {"pressure": m.pressure, "normalized": m.normalized.to_dict(),
            "stationary": m.stationary}, None


def _cmd_measure(cfg, U):
    c = parse_cylinder(_require(cfg.cylinder, "--cylinder"), U.d)
    m = normalize(U.scaled(cfg.beta))
    return {"cylinder": format_cylinder(c), "measure": cylinder_measure(m, c)}, None


def _cmd_cocycle(cfg, U):
    p = parse_pair(_require(cfg.pair, "--pair"), U.d, cfg.left_ctx, cfg.right_ctx)
    equal = p.source == p.target
    return {"pair": cfg.pair, "kappa": kappa(p), "vartheta": None if equal else vartheta(p),
            "V": cocycle_V(p, U)}, None


def _cmd_finite_volume(cfg, U):
    c = parse_cylinder(_require(cfg.cylinder, "--cylinder"), U.d)
    a = -(cfg.span // 2)
    fv = FiniteVolumeMeasure(U, a, a + cfg.span, cfg.span_cap)
    value, exact = fv.measure(c), cylinder_measure(normalize(U), c)
    return {"cylinder": format_cylinder(c), "a": a, "b": a + cfg.span, "measure": value,
            "equilibrium": exact, "error": abs(value - exact)}, None


def _cmd_verify_gibbs(cfg, U):
    m = normalize(U.scaled(cfg.beta))
    rep = verify.gibbs_report(m, cfg.max_len, cfg.max_len, cfg.beta, U)
    items = [{"id": k, "residual": v} for k, v in rep.residuals]
    result = {"K_bound": rep.K_bound, "osc": rep.osc, "bowen_ratio_min": rep.bowen_ratio_min,
              "bowen_ratio_max": rep.bowen_ratio_max}
    return result, {"gibbs": _check(rep.max_residual, cfg.tol, residuals=items)}


def _cmd_verify_bowen(cfg, U):
    m = normalize(U.scaled(cfg.beta))
    lo, hi = verify.bowen_scan(m, cfg.max_len, normalized=True)
    b_lo, b_hi = verify.bowen_bounds(m)
    e_lo, e_hi = verify.bowen_envelope(m)
    violation = max(0.0, b_lo - lo, hi - b_hi)
    raw_lo, raw_hi = verify.bowen_scan(m, cfg.max_len)
    result = {"ratio_min": lo, "ratio_max": hi, "bounds": [b_lo, b_hi], "envelope": [e_lo, e_hi],
              "envelope_violation": max(0.0, e_lo - lo, hi - e_hi),
              "unnormalized_ratio_min": raw_lo, "unnormalized_ratio_max": raw_hi,
              "canonical_point": "word followed by symbol 1"}
    return result, {"bowen": _check(violation, cfg.tol)}


def _cmd_verify_invariance(cfg, U):
    m = normalize(U.scaled(cfg.beta))
    return {}, {"invariance": _check(verify.invariance_check(m, cfg.max_len, cfg.max_shift), cfg.tol)}


def _cmd_verify_bar_ratio(cfg, U):
    m = normalize(U.scaled(cfg.beta))
    lo, hi = verify.bar_ratio_scan(m, cfg.max_len)
    return {"b1": lo, "b2": hi}, {"bar_ratio": _check(max(abs(lo - 1), abs(hi - 1)), cfg.tol)}


def _cmd_verify_uniqueness(cfg, U):
    res = verify.solve_gibbs_system(U, cfg.depth, cfg.beta)
    residual = res.max_deviation if res.rank_deficiency == 1 else max(res.max_deviation, 1.0)
    result = {"rank_deficiency": res.rank_deficiency, "max_deviation": res.max_deviation,
              "constraint_residual": res.residual, "gibbs_rows": res.n_gibbs_rows,
              "solution": res.solution}
    return result, {"uniqueness": _check(residual, cfg.tol)}


def _elements(cfg, d):
    if cfg.element_a or cfg.element_b:
        A = load_element(_require(cfg.element_a, "--element-a"), d)
        B = load_element(_require(cfg.element_b, "--element-b"), d)
        return [(A, B)]
    rng = np.random.default_rng(cfg.seed)
    pairs = []
    for _ in range(cfg.samples):
        A = algebra.random_element(rng, d)
        pairs.append((A, algebra.involution(A, cfg.hull_cap) + algebra.random_element(rng, d)))
    return pairs


def _cmd_verify_kms(cfg, U):
    m = normalize(U.scaled(cfg.beta))
    items = []
    for k, (A, B) in enumerate(_elements(cfg, U.d)):
        worst = algebra.kms_residual(A, B, m, U, cfg.beta, cfg.hull_cap)
        for t in KMS_TIMES:
            worst = max(worst, algebra.kms_boundary_residual(A, B, m, U, t, cfg.beta, cfg.hull_cap))
        items.append({"id": f"sample{k}", "residual": worst})
    return {}, {"kms": _check(max(i["residual"] for i in items), cfg.tol, residuals=items)}


def _cmd_algebra_eval(cfg, U):
    A = load_element(_require(cfg.element_a, "--element-a"), U.d)
    m = normalize(U.scaled(cfg.beta))
    value = algebra.state(A, m)
    result = {"state_re": value.real, "state_im": value.imag}
    if cfg.pair:
        p = parse_pair(cfg.pair, U.d)
        z = algebra.evaluate_at(A, p.window, p.source, p.target)
        result.update(value_re=z.real, value_im=z.imag)
    return result, None


def _cmd_algebra_convolve(cfg, U):
    A = load_element(_require(cfg.element_a, "--element-a"), U.d)
    B = load_element(_require(cfg.element_b, "--element-b"), U.d)
    return {"product": element_to_json(algebra.convolve(A, B, cfg.hull_cap))}, None


COMMANDS = {
    "pressure": _cmd_pressure,
    "normalize": _cmd_normalize,
    "measure": _cmd_measure,
    "cocycle": _cmd_cocycle,
    "finite-volume": _cmd_finite_volume,
    "verify gibbs": _cmd_verify_gibbs,
    "verify bowen": _cmd_verify_bowen,
    "verify invariance": _cmd_verify_invariance,
    "verify bar-ratio": _cmd_verify_bar_ratio,
    "verify uniqueness": _cmd_verify_uniqueness,
    "verify kms": _cmd_verify_kms,
    "algebra eval": _cmd_algebra_eval,
    "algebra convolve": _cmd_algebra_convolve,
}


def build_report(command: str, cfg: RunConfig) -> dict:
    U = _potential(cfg)
    result, checks = COMMANDS[command](cfg, U)
    report = {"command": command, "ok": True, "potential": U.to_dict(), "beta": cfg.beta,
              "seed": cfg.seed, "result": result}
    if checks is not None:
        report["checks"] = checks
        report["tolerances"] = {"tol": cfg.tol}
        report["ok"] = all(c["passed"] for c in checks.values())
    return json.loads(dumps(report))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--potential", help="potential JSON file")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--max-shift", type=int, default=4)
    p.add_argument("--span-cap", type=int, default=20)
    p.add_argument("--hull-cap", type=int, default=algebra.HULL_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cylinder", help='cylinder such as "11|21"')
    p.add_argument("--pair", help='"<cyl>,<cyl>" with equal windows')
    p.add_argument("--left-ctx", default="")
    p.add_argument("--right-ctx", default="")
    p.add_argument("--span", type=int, default=12, help="finite-volume span b - a")
    p.add_argument("--samples", type=int, default=20, help="random element pairs for verify kms")
    p.add_argument("--element-a", help="element JSON file")
    p.add_argument("--element-b", help="element JSON file")
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="kmsgibbs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("pressure", "normalize", "measure", "cocycle", "finite-volume"):
        sub.add_parser(name, parents=[common])
    for group, names in (("verify", ("gibbs", "bowen", "invariance", "bar-ratio", "uniqueness", "kms")),
                         ("algebra", ("eval", "convolve"))):
        g = sub.add_parser(group).add_subparsers(dest="action", required=True)
        for name in names:
            g.add_parser(name, parents=[common])
    schema = sub.add_parser("schema")
    schema.add_argument("--output")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        atomic_write(path, text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    ns = make_parser().parse_args(argv)
    if ns.command == "schema":
        _emit(json.dumps(report_schema(), indent=2) + "\n", ns.output)
        return EXIT_OK
    command = f"{ns.command} {ns.action}" if getattr(ns, "action", None) else ns.command
    try:
        cfg = RunConfig.from_args(ns)
        report = build_report(command, cfg)
        validate_report(report)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InconsistentError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESIDUAL
    except (NotationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(dumps(report) if cfg.format == "json" else to_csv(report), cfg.output_path)
    return EXIT_OK if report["ok"] else EXIT_RESIDUAL


if __name__ == "__main__":
    sys.exit(main())
