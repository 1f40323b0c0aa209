"""Command-line entry point: ``hv2q {verify,sweep,evolve,contextuality}``.

Exit codes: 0 all checks passed, 1 a verification check failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bell import bell_correlation, bell_monte_carlo
from .config import TOL, HV2QError
from .contextuality import peres_square, product_rule_violation
from .dynamics import evolve, frame_timeline, hamiltonian_from_json
from .frame import frame_of, phase_aligned_residual
from .general import verify_general
from .minimal import locality_probe, sup_defect_closed_form, verify_minimal
from .reports import to_csv, to_json
from .sampling import DEFAULT_CHUNK
from .states import (
    LocalObservable,
    TwoQubitState,
    sample_unit_vectors,
    schmidt_form,
    singlet,
    spin,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CLI_SIGMAS = 5.0


class InputError(Exception):
    pass


def _load_json(text: str, what: str):
    """Parse ``text`` as inline JSON, or as a path to a JSON file."""
    if text is None:
        raise InputError(f"missing {what}")
    stripped = text.strip()
    if not stripped.startswith(("{", "[")):
        path = Path(text)
        if not path.is_file():
            raise InputError(f"{what}: no such file {text!r}")
        stripped = path.read_text()
    try:
        return json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc})") from exc


def load_state(text: str | None) -> TwoQubitState:
    if text is None or text == "singlet":
        return singlet()
    try:
        return TwoQubitState.from_dict(_load_json(text, "state"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_observable(text: str | None, default: LocalObservable, what: str) -> LocalObservable:
    if text is None:
        return default
    try:
        return LocalObservable.from_dict(_load_json(text, what))
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from exc


def load_hamiltonian(text: str | None) -> np.ndarray:
    if text is None:
        raise InputError("missing --hamiltonian")
    try:
        return hamiltonian_from_json(_load_json(text, "hamiltonian"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _observables(args) -> tuple[LocalObservable, LocalObservable]:
    x = load_observable(args.obs_x, spin([0.0, 0.0, 1.0]), "--obs-x")
    y = load_observable(args.obs_y, spin([0.0, 0.0, 1.0]), "--obs-y")
    return x, y


def _bell_report(state, x, y, args) -> dict:
    if phase_aligned_residual(singlet().ket, state.ket) > TOL.frame_residual:
        raise InputError("the bell model covers the singlet state only")
    if x.alpha1 != 0 or y.alpha1 != 0 or x.alpha2 != 1 or y.alpha2 != 1:
        raise InputError("the bell model covers spin observables only (alpha1 = 0, alpha2 = 1)")
    expected = -float(x.axis @ y.axis)
    analytic = bell_correlation(x.axis, y.axis)
    report = {
        "schema": 1,
        "model": "bell",
        "oracle": {"x": 0.0, "y": 0.0, "xy": expected},
        "analytic": {"x": 0.0, "y": 0.0, "xy": analytic},
        "analytic_discrepancy": abs(analytic - expected),
        "mc": None,
    }
    ok = abs(analytic - expected) <= TOL.analytic_check
    if args.samples:
        ea, eb, eab = bell_monte_carlo(x.axis, y.axis, args.samples, args.seed, args.chunk)
        report["mc"] = {"n": args.samples, "x": ea.to_dict(), "y": eb.to_dict(), "xy": eab.to_dict()}
        ok = ok and ea.within(0.0, CLI_SIGMAS) and eb.within(0.0, CLI_SIGMAS) and eab.within(expected, CLI_SIGMAS)
    report["checks"] = {"passed": ok}
    return report


def _verification_rows(rep: dict) -> list[dict]:
    rows = []
    for key in ("x", "y", "xy"):
        mc = rep.get("mc")
        rows.append({
            "moment": key,
            "oracle": rep["oracle"]["direct"][key] if "direct" in rep["oracle"] else rep["oracle"][key],
            "analytic": rep["analytic"][key],
            "mc": mc[key]["mean"] if mc else "",
            "stderr": mc[key]["stderr"] if mc else "",
        })
    return rows


def cmd_verify(args) -> int:
    state = load_state(args.state)
    x, y = _observables(args)
    if args.samples and args.samples < 10_000:
        raise InputError("--samples must be 0 or at least 10000")
    if args.model == "bell":
        rep = _bell_report(state, x, y, args)
        passed = rep["checks"]["passed"]
    else:
        verify = verify_general if args.model == "general" else verify_minimal
        report = verify(state, x, y, n_samples=args.samples, seed=args.seed, chunk_size=args.chunk, sigmas=CLI_SIGMAS)
        rep = report.to_dict(include_timing=args.timing)
        passed = report.passed
        if args.locality:
            rng = np.random.default_rng(args.seed)
            partners = [spin(b) for b in sample_unit_vectors(rng, args.locality)]
            frame = frame_of(state)
            loc = locality_probe(frame, x, partners)
            rep["locality"] = {
                "phi": loc.phi,
                "supremum": loc.supremum,
                "supremum_exact": sup_defect_closed_form(frame.phi, float(x.axis @ frame.n)),
                "verdict": loc.verdict,
            }
    if args.format == "csv":
        emit(to_csv(_verification_rows(rep)), args.out)
    else:
        emit(to_json(rep), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def _grid(rng_spec) -> np.ndarray:
    start, stop, count = rng_spec
    count = int(count)
    if count <= 0:
        raise InputError("--range needs a positive point count")
    return np.linspace(float(start), float(stop), count)


def cmd_sweep(args) -> int:
    grid = _grid(args.range)
    rows = []
    passed = True
    verify = verify_minimal if args.model == "minimal" else verify_general
    if args.param == "theta":
        state = singlet()
        for k, theta in enumerate(grid):
            x, y = spin([0.0, 0.0, 1.0]), spin([np.sin(theta), 0.0, np.cos(theta)])
            rep = verify(state, x, y, n_samples=args.samples, seed=args.seed + k, chunk_size=args.chunk, sigmas=CLI_SIGMAS)
            rows.append(_sweep_row("theta", theta, rep))
            passed &= rep.passed
    elif args.param == "phi":
        x, y = _observables(args)
        rng = np.random.default_rng(args.seed)
        partners = [spin(b) for b in sample_unit_vectors(rng, 256)]
        for k, phi in enumerate(grid):
            if not 0.0 <= phi <= np.pi / 4 + 1e-15:
                raise InputError("phi must lie in [0, pi/4]")
            state = schmidt_form(0.5 * (1.0 + np.sin(2 * phi)))
            frame = frame_of(state)
            rep = verify(state, x, y, n_samples=args.samples, seed=args.seed + k, chunk_size=args.chunk, sigmas=CLI_SIGMAS, frame=frame)
            row = _sweep_row("phi", phi, rep)
            row["locality_sup"] = locality_probe(frame, x, partners).supremum
            row["locality_sup_exact"] = sup_defect_closed_form(frame.phi, float(x.axis @ frame.n))
            rows.append(row)
            passed &= rep.passed
    else:
        state = load_state(args.state)
        h = load_hamiltonian(args.hamiltonian)
        x, y = _observables(args)
        for k, t in enumerate(grid):
            st = evolve(state, h, t)
            rep = verify(st, x, y, n_samples=args.samples, seed=args.seed + k, chunk_size=args.chunk, sigmas=CLI_SIGMAS)
            row = _sweep_row("t", t, rep)
            row["mu1"] = frame_of(st).schmidt.mu1
            rows.append(row)
            passed &= rep.passed
    emit(to_csv(rows), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def _sweep_row(name: str, value: float, rep) -> dict:
    return {
        name: float(value),
        "oracle_xy": rep.oracle.direct.xy,
        "model_xy": rep.analytic.xy,
        "mc_xy": rep.mc.xy.mean if rep.mc else "",
        "mc_stderr": rep.mc.xy.stderr if rep.mc else "",
        "passed": rep.passed,
    }


def cmd_evolve(args) -> int:
    state = load_state(args.state)
    h = load_hamiltonian(args.hamiltonian)
    x, y = _observables(args)
    if args.steps <= 0:
        raise InputError("--steps must be positive")
    times = np.linspace(0.0, args.t_max, args.steps + 1)
    timeline = frame_timeline(state, h, times, x, y, model=args.model)
    emit(timeline.to_csv() if args.format == "csv" else to_json(timeline.to_dict()), args.out)
    return EXIT_OK if timeline.passed else EXIT_FAIL


def cmd_contextuality(args) -> int:
    state = load_state(args.state)
    if args.demo == "peres":
        rep = peres_square(state, n_samples=args.samples, seed=args.seed)
        ok = rep.row_signs == [1, 1, 1] and rep.col_signs == [1, 1, -1] and rep.noncontextual_count == 0
        if args.samples:
            ok = ok and rep.violation_fraction > 0
        emit(to_json(rep.to_dict()), args.out)
        return EXIT_OK if ok else EXIT_FAIL
    b = np.array([0.0, 0.0, 1.0])
    a = np.array([np.sin(np.pi / 3), 0.0, np.cos(np.pi / 3)])
    x = load_observable(args.obs_x, spin(a), "--obs-x")
    y = load_observable(args.obs_y, spin(b), "--obs-y")
    rep = product_rule_violation(state, x, y, n_samples=args.samples, seed=args.seed, chunk_size=args.chunk)
    ok = all(rep.mc[c].within(rep.analytic[c], CLI_SIGMAS) for c in rep.mc)
    emit(to_json(rep.to_dict()), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hv2q", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hv2q {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_choices=("bell", "general", "minimal")):
        p.add_argument("--state", help="state JSON (inline or path); default: singlet")
        p.add_argument("--obs-x", help="observable JSON for party 1 (inline or path)")
        p.add_argument("--obs-y", help="observable JSON for party 2 (inline or path)")
        p.add_argument("--model", choices=model_choices, default="general")
        p.add_argument("--samples", type=int, default=0, help="Monte Carlo draws (0 = analytic only)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--chunk", type=int, default=DEFAULT_CHUNK)
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("verify", help="compare a model against the exact quantum averages")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--locality", type=int, default=0, metavar="N", help="probe locality with N random partner axes")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-reproducibility)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate correlations over a parameter grid (CSV)")
    common(p, ("general", "minimal"))
    p.add_argument("--param", choices=("theta", "phi", "t"), required=True)
    p.add_argument("--range", nargs=3, required=True, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--hamiltonian", help="Hamiltonian JSON for --param t")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("evolve", help="model parameters along a unitary trajectory")
    common(p, ("general", "minimal"))
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("contextuality", help="contextuality demonstrations")
    p.add_argument("demo", choices=("peres", "product-rule"))
    common(p, ("general",))
    p.set_defaults(func=cmd_contextuality)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("HV2Q_THREADS")
    if threads is not None and not threads.strip().isdigit():
        print(f"hv2q: HV2Q_THREADS must be a positive integer, got {threads!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InputError as exc:
        print(f"hv2q: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HV2QError as exc:
        print(f"hv2q: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
