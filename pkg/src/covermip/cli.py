"""Command-line interface: generate, solve, compare and emit.

Exit codes: 0 success, 1 usage or input error, 2 infeasible instance.
All output is deterministic for fixed inputs except the wall_time_ms field
of solve/check reports.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import exact, fptas, ptas
from .errors import CapExceededError, HypothesisError, InfeasibleInstanceError
from .formulation import (
    HullYParams,
    UniformInstance,
    build_eps_1mkc,
    build_uniform_perfect,
    emit_lp,
    hull_y,
    piece_count,
)
from .instances import (
    COVER,
    PACK,
    CoverInstance,
    GenConfig,
    MkcInstance,
    generate,
    read_json,
    write_json,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r} ({exc})") from exc


def _positive_rational(text: str) -> Fraction:
    value = _rational(text)
    if value <= 0:
        raise UsageError(f"value must be positive, got {text}")
    return value


def _decimal_text(value: Fraction) -> str:
    from .formulation import _format_number

    return _format_number(Fraction(value))[0]


def _rational_doc(value: Fraction) -> dict:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator, "decimal": _decimal_text(value)}


def _solution_doc(solution) -> dict:
    doc = {"y": list(solution.y)}
    if hasattr(solution, "x"):
        doc["x"] = [[str(val) for val in row] for row in solution.x]
    else:
        doc["alpha"] = [str(val) for val in solution.alpha]
    return doc


def _read_instance(path: str) -> CoverInstance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return read_json(handle.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _read_mkc(path: str) -> MkcInstance:
    """Single-dimension knapsack instance document for `emit --kind approx`.

    Keys: sense, eta, mu, fbar, vbar, cbar, wbar (eta rows of mu ints), dbar.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: parse error: {exc}") from exc
    required = {"sense", "eta", "mu", "fbar", "vbar", "cbar", "wbar", "dbar"}
    if not isinstance(doc, dict) or set(doc) != required:
        raise UsageError(f"{path}: document must carry exactly the keys {sorted(required)}")
    try:
        return MkcInstance(
            sense=doc["sense"], eta=doc["eta"], mu=doc["mu"], fbar=doc["fbar"],
            vbar=doc["vbar"], cbar=doc["cbar"], wbar=doc["wbar"], dbar=doc["dbar"],
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="covermip", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded random instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--coeff-max", type=int, default=10)
    gen.add_argument("--sense", choices=[COVER, PACK], default=COVER)

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("--input", required=True)
    solve.add_argument("--method", choices=["exact", "ptas", "fptas"], required=True)
    solve.add_argument("--epsilon", type=str, default=None)
    solve.add_argument("--poly-eta", type=str, default="eta")

    emit = sub.add_parser("emit", help="emit an LP-format model file")
    emit.add_argument("--kind", choices=["perfect", "approx", "hull-y"], required=True)
    emit.add_argument("--output", required=True)
    emit.add_argument("--input", default=None)
    emit.add_argument("--epsilon", type=str, default=None)
    emit.add_argument("--delta", type=str, default=None)
    emit.add_argument("--sigma", type=str, default=None)
    emit.add_argument("--nu", type=int, default=None)

    check = sub.add_parser("check", help="cross-check methods on an instance file")
    check.add_argument("--input", required=True)
    check.add_argument("--epsilon", type=str, required=True)
    check.add_argument("--poly-eta", type=str, default="eta")
    return parser


def _cmd_gen(args) -> int:
    if args.n < 1 or args.m < 1:
        raise UsageError("--n and --m must be positive")
    if args.coeff_max < 1:
        raise UsageError("--coeff-max must be >= 1")
    cfg = GenConfig(seed=args.seed, n=args.n, m=args.m, coeff_max=args.coeff_max, sense=args.sense)
    sys.stdout.write(write_json(generate(cfg)))
    return 0


def _certified_ratio(method, epsilon, warnings):
    if method == "exact":
        return Fraction(1)
    if warnings:
        return None
    return 1 + epsilon


def _run_method(instance, method, epsilon, poly):
    warnings = []
    if method == "exact":
        solution = exact.exact_p(instance)
        if solution is None:
            raise InfeasibleInstanceError("instance is infeasible")
    elif method == "ptas":
        solution = ptas.p_ptas(instance, ptas.PtasConfig(epsilon=epsilon))
    else:
        if instance.m != 1:
            raise UsageError("fptas handles single-constraint instances only (m = 1)")
        if instance.sense != COVER:
            raise UsageError("fptas handles cover-sense instances only")
        solution, fwarn = fptas.p1_fptas(instance, fptas.FptasConfig(epsilon=epsilon, poly=poly))
        warnings.extend(fwarn)
    return solution, warnings


def _cmd_solve(args) -> int:
    instance = _read_instance(args.input)
    epsilon = None
    if args.method in ("ptas", "fptas"):
        if args.epsilon is None:
            raise UsageError(f"--epsilon is required for method {args.method}")
        epsilon = _positive_rational(args.epsilon)
    poly = _parse_poly(args.poly_eta)
    start = time.monotonic()
    solution, warnings = _run_method(instance, args.method, epsilon, poly)
    elapsed_ms = int((time.monotonic() - start) * 1000)
    ratio = _certified_ratio(args.method, epsilon, warnings)
    report = {
        "method": args.method,
        "value": _rational_doc(solution.value),
        "certified_ratio": None if ratio is None else _rational_doc(ratio),
        "wall_time_ms": elapsed_ms,
        "solution": _solution_doc(solution),
        "warnings": list(warnings),
    }
    print(json.dumps(report, indent=2))
    return 0


def _parse_poly(text):
    try:
        return fptas.PolyEta.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_emit(args) -> int:
    if args.kind == "hull-y":
        if args.delta is None or args.sigma is None or args.nu is None:
            raise UsageError("--kind hull-y requires --delta, --sigma and --nu")
        model = hull_y(HullYParams(delta=_rational(args.delta), sigma=_rational(args.sigma), nu=args.nu))
        summary = f"hull-y model: {len(model.vars)} variables, {len(model.constraints)} constraints"
    elif args.kind == "perfect":
        if args.input is None:
            raise UsageError("--kind perfect requires --input")
        instance = _read_instance(args.input)
        if instance.m != 1:
            raise UsageError("perfect formulation requires m = 1")
        ells = {instance.l[i][0] for i in range(instance.n)}
        caps = {instance.c[i][0] for i in range(instance.n)}
        if len(ells) != 1 or len(caps) != 1:
            raise UsageError("perfect formulation requires uniform bounds")
        order = sorted(range(instance.n), key=lambda i: (-instance.v[i][0], i))
        uniform = UniformInstance(
            n=instance.n,
            v=[instance.v[i][0] for i in order],
            f=[instance.f[i] for i in order],
            ell=ells.pop(),
            cap=caps.pop(),
            d=instance.d[0],
        )
        model = build_uniform_perfect(uniform)
        summary = f"perfect model: {len(model.vars)} variables, {len(model.constraints)} constraints"
    else:
        if args.input is None or args.epsilon is None:
            raise UsageError("--kind approx requires --input and --epsilon")
        raw = _read_mkc(args.input)
        order = sorted(range(raw.eta), key=lambda i: (-raw.fbar[i], i))
        inst = MkcInstance(
            sense=raw.sense, eta=raw.eta, mu=raw.mu,
            fbar=[raw.fbar[i] for i in order],
            vbar=raw.vbar, cbar=raw.cbar,
            wbar=[raw.wbar[i] for i in order],
            dbar=raw.dbar,
        )
        model = build_eps_1mkc(inst, _positive_rational(args.epsilon))
        summary = (
            f"approx model: {len(model.vars)} variables, "
            f"{len(model.constraints)} constraints, {piece_count(model)} polyhedra"
        )
    text = emit_lp(model)
    try:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from exc
    print(summary)
    return 0


def _cmd_check(args) -> int:
    instance = _read_instance(args.input)
    epsilon = _positive_rational(args.epsilon)
    poly = _parse_poly(args.poly_eta)
    start = time.monotonic()
    entries = {}
    exact_sol, _ = _run_method(instance, "exact", None, poly)
    entries["exact"] = {"value": _rational_doc(exact_sol.value)}
    all_ok = True
    bound = 1 + epsilon
    ptas_sol, _ = _run_method(instance, "ptas", epsilon, poly)
    if instance.sense == COVER:
        ok = ptas_sol.value <= bound * exact_sol.value
    else:
        ok = ptas_sol.value * bound >= exact_sol.value
    entries["ptas"] = {"value": _rational_doc(ptas_sol.value), "ok": ok}
    all_ok &= ok
    if instance.m == 1 and instance.sense == COVER:
        fptas_sol, fwarn = _run_method(instance, "fptas", epsilon, poly)
        ok = fptas_sol.value <= bound * exact_sol.value
        entries["fptas"] = {
            "value": _rational_doc(fptas_sol.value),
            "ok": ok,
            "warnings": list(fwarn),
        }
        all_ok &= ok
    elapsed_ms = int((time.monotonic() - start) * 1000)
    report = {
        "epsilon": _rational_doc(epsilon),
        "certified_ratio": _rational_doc(bound),
        "methods": entries,
        "all_ok": bool(all_ok),
        "wall_time_ms": elapsed_ms,
    }
    print(json.dumps(report, indent=2))
    return 0 if all_ok else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "emit":
            return _cmd_emit(args)
        return _cmd_check(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CapExceededError, HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
