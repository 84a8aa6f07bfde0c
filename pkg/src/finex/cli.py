"""Command-line interface: bounds, curves, verification, sampling, demo.

Exit codes are a stable contract: 0 success, 1 verification failure,
2 usage or parse error, 3 numerical solver failure.  All numeric output
is printed with 12 significant digits.  Face labels are 1-based in every
user-facing file; internally outcomes are 0-based.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import boson
from .bernstein_lp import assemble, dump, lower_bound_lp
from .config import DEFAULT_TOLERANCES
from .errors import DomainError, FinexError, SolverFailure
from .exchangeable import (
    from_json as distribution_from_json,
    oracle_bound,
    sample as sample_sequences,
    urn_distribution,
)
from .multiindex import compositions
from .polynomial import SimplexPolynomial, from_json as polynomial_from_json

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

DEFAULT_LP_CAP = 8


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


@dataclass
class RunConfig:
    """Resolved settings for one command invocation."""

    command: str
    observable: SimplexPolynomial | None = None
    s_min: int | None = None
    s_max: int | None = None
    methods: tuple[str, ...] = ()
    out: str | None = None
    fmt: str = "json"
    seed: int = 0
    agreement_tol: float = DEFAULT_TOLERANCES.method_agreement
    lp_cap: int = DEFAULT_LP_CAP


def _agreement_tolerance(flag_value: float | None) -> float:
    """Precedence: --tol flag, then FINEX_TOL, then the built-in default."""
    if flag_value is not None:
        return flag_value
    env = os.environ.get("FINEX_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise DomainError(f"FINEX_TOL={env!r} is not a number") from exc
    return DEFAULT_TOLERANCES.method_agreement


def _load_observable(path: str) -> SimplexPolynomial:
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise DomainError(f"cannot read observable file {path}: {exc}") from exc
    return polynomial_from_json(text)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w") as handle:
            handle.write(text)


def _bound_for(method: str, g: SimplexPolynomial, s: int):
    if method == "oracle":
        return oracle_bound(g, s)
    if method == "lp":
        return lower_bound_lp(g, s)
    if method == "boson":
        return boson.quantum_bound(g, s)
    raise DomainError(f"unknown method {method!r}")


def cmd_bound(config: RunConfig) -> int:
    g = config.observable
    s = config.s_min
    results = [_bound_for(m, g, s) for m in config.methods]
    doc = {
        "d": g.d,
        "s": s,
        "bounds": [
            {
                "method": r.method,
                "value": r.value,
                "argmin": list(r.argmin) if r.argmin is not None else None,
            }
            for r in results
        ],
    }
    if len(results) > 1:
        values = [r.value for r in results]
        discrepancy = max(values) - min(values)
        doc["max_discrepancy"] = discrepancy
        doc["agreement_tolerance"] = config.agreement_tol
        doc["agree"] = bool(discrepancy <= config.agreement_tol)
    if config.fmt == "json":
        text = json.dumps(_round_floats(doc), indent=2)
    else:
        lines = ["method,value"]
        lines += [f"{r.method},{fmt(r.value)}" for r in results]
        text = "\n".join(lines)
    _write_output(text, config.out)
    return EXIT_OK


def cmd_curve(config: RunConfig) -> int:
    g = config.observable
    floor = boson.simplex_minimum(g)
    lines = ["s,v_oracle,v_lp,v_boson,v_infinity"]
    for s in range(config.s_min, config.s_max + 1):
        v_oracle = oracle_bound(g, s).value
        v_lp = fmt(lower_bound_lp(g, s).value) if s <= config.lp_cap else ""
        v_boson = boson.quantum_bound(g, s).value
        lines.append(f"{s},{fmt(v_oracle)},{v_lp},{fmt(v_boson)},{fmt(floor)}")
    _write_output("\n".join(lines) + "\n", config.out)
    return EXIT_OK


def _verify_checks(seed: int, tol: float, perturb: bool):
    """Yield (name, passed, residual) rows for the verification table."""
    rng = np.random.default_rng(seed)

    worst = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 4))
        g = SimplexPolynomial(
            d, 2, {n: float(rng.uniform(-1, 1)) for n in compositions(2, d)}
        )
        for s in range(2, 6):
            values = [
                oracle_bound(g, s).value,
                lower_bound_lp(g, s).value,
                boson.quantum_bound(g, s).value,
            ]
            worst = max(worst, max(values) - min(values))
    yield "three-method-agreement", worst <= tol, worst

    worst = 0.0
    for d in (2, 3):
        for s in (2, 3, 4):
            pi = boson.symmetrizer(s, d)
            if perturb:
                pi = pi.copy()
                pi[0, 0] += 1e-3
            worst = max(
                worst,
                float(np.abs(pi @ pi - pi).max()),
                float(np.abs(pi - pi.T).max()),
            )
    yield "symmetrizer-projector", worst <= 1e-12, worst

    worst = 0.0
    for d in (2, 3):
        for s in (2, 3, 4):
            pi = boson.symmetrizer(s, d)
            for _ in range(10):
                perm = tuple(int(v) for v in rng.permutation(s))
                p = boson.permutation_matrix(perm, d)
                worst = max(
                    worst,
                    float(np.abs(pi @ p - pi).max()),
                    float(np.abs(p @ pi - pi).max()),
                )
    yield "symmetrizer-absorbs-permutations", worst <= 1e-12, worst

    worst = 0.0
    for d in (2, 3):
        for s in range(1, 6):
            v = boson.OccupationBasis(d, s).dense_isometry()
            gram = v.T @ v
            worst = max(worst, float(np.abs(gram - np.eye(v.shape[1])).max()))
    yield "occupation-orthonormality", worst <= 1e-12, worst

    worst = 0.0
    for d, s in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        basis = boson.OccupationBasis(d, s)
        z = rng.normal(size=(basis.dimension, basis.dimension)) + 1j * rng.normal(
            size=(basis.dimension, basis.dimension)
        )
        m = z @ z.conj().T
        m /= np.trace(m).real
        dense = boson.BosonDensityMatrix(basis, m).dense()
        for _ in range(5):
            perm = tuple(int(v) for v in rng.permutation(s))
            p = boson.permutation_matrix(perm, d)
            worst = max(
                worst,
                float(np.abs(p @ dense - dense).max()),
                float(np.abs(dense @ p.T - dense).max()),
            )
    yield "state-index-symmetry", worst <= 1e-10, worst

    from .polynomial import two_face_witness

    cone_lp = assemble(two_face_witness(), 2)
    rows = len(cone_lp.rows)
    yield "cone-lp-has-21-rows", rows == 21, float(rows)

    gap = 0.0
    for s, expected in ((2, -0.5), (3, -1.0 / 6.0)):
        for value in (
            oracle_bound(two_face_witness(), s).value,
            lower_bound_lp(two_face_witness(), s).value,
            boson.quantum_bound(two_face_witness(), s).value,
        ):
            gap = max(gap, abs(value - expected))
    yield "reference-values", gap <= tol, gap


def cmd_verify(seed: int, tol: float, perturb: bool) -> int:
    failures = 0
    for name, passed, residual in _verify_checks(seed, tol, perturb):
        status = "PASS" if passed else "FAIL"
        print(f"{status}  {name:<34} {fmt(residual)}")
        failures += 0 if passed else 1
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_VERIFY_FAILED
    print("all checks passed")
    return EXIT_OK


def cmd_sample(args) -> int:
    if (args.urn is None) == (args.dist is None):
        raise DomainError("choose exactly one of --urn or --dist")
    if args.urn is not None:
        try:
            counts = tuple(int(v) for v in args.urn.split(","))
        except ValueError as exc:
            raise DomainError(f"bad urn composition {args.urn!r}") from exc
        dist = urn_distribution(counts)
    else:
        try:
            with open(args.dist) as handle:
                dist = distribution_from_json(handle.read())
        except OSError as exc:
            raise DomainError(f"cannot read distribution file: {exc}") from exc
    draws = sample_sequences(dist, args.n, args.seed)
    lines = [",".join(str(t + 1) for t in seq) for seq in draws]
    _write_output("\n".join(lines) + ("\n" if lines else ""), args.out)
    return EXIT_OK


def cmd_coin_demo() -> int:
    from .exchangeable import from_sequence_probs
    from .polynomial import two_face_witness, to_diagonal_observable

    coin = from_sequence_probs({(0, 1): 0.5, (1, 0): 0.5}, 2, 2)
    rho = boson.rho_from_exchangeable(coin)
    dense = rho.dense().real
    witness = np.diag([1.0, -0.5, -0.5, 1.0])
    value = boson.witness_value(witness.astype(complex), rho)
    # the witness polynomial is non-negative on every product state; its
    # infimum is 0, approached when both flagged faces carry no mass (the
    # minimal embedding that exhibits it appends one slack outcome)
    floor = boson.simplex_minimum(two_face_witness(3))

    print("two exchangeable coins with P(HT) = P(TH) = 0.5")
    print()
    print("density matrix rho (basis HH, HT, TH, TT):")
    for row in dense:
        print("  [" + "  ".join(f"{v:4.1f}" for v in row) + "]")
    print()
    print("witness D = diag(1, -0.5, -0.5, 1)")
    print(f"Tr(D rho) = {fmt(value)}")
    print(f"product-state minimum of the witness polynomial = {fmt(floor)}")
    print()
    obs = to_diagonal_observable(two_face_witness(2))
    assert abs(boson.witness_value(obs, rho) - value) < 1e-12
    print(
        "verdict: Tr(D rho) < product-state minimum, so this state is"
        " finitely exchangeable, not infinitely extendable"
        " / entangled-I witness fires"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finex",
        description="Worst-case expectations over finitely exchangeable sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="compute the worst-case bound at one length")
    bound.add_argument("--observable", required=True, help="polynomial JSON file")
    bound.add_argument("--s", type=int, required=True, help="sequence length")
    bound.add_argument(
        "--method",
        choices=["oracle", "lp", "boson", "all"],
        default="all",
    )
    bound.add_argument("--format", choices=["json", "csv"], default="json")
    bound.add_argument("--out", default=None)
    bound.add_argument("--tol", type=float, default=None)
    bound.add_argument("--dump-lp", action="store_true", help="print the assembled LP")

    curve = sub.add_parser("curve", help="bound as a function of sequence length")
    curve.add_argument("--observable", required=True)
    curve.add_argument("--s-min", type=int, required=True)
    curve.add_argument("--s-max", type=int, required=True)
    curve.add_argument("--out", default=None)
    curve.add_argument(
        "--lp-cap",
        type=int,
        default=DEFAULT_LP_CAP,
        help="omit the LP column above this length",
    )

    verify = sub.add_parser("verify", help="run the cross-method verification suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tol", type=float, default=None)
    verify.add_argument(
        "--inject-perturbation",
        action="store_true",
        help="deliberately corrupt one check (negative-control test hook)",
    )

    smp = sub.add_parser("sample", help="draw sequences from a distribution")
    group = smp.add_mutually_exclusive_group()
    group.add_argument("--urn", default=None, help="comma-separated ball counts")
    group.add_argument("--dist", default=None, help="distribution JSON file")
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--out", default=None)

    sub.add_parser("coin-demo", help="the two-coin worked example")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        if args.command == "bound":
            g = _load_observable(args.observable)
            if args.s < g.degree:
                raise DomainError(
                    f"--s {args.s} is below the observable degree {g.degree}"
                )
            config = RunConfig(
                command="bound",
                observable=g,
                s_min=args.s,
                methods=("oracle", "lp", "boson")
                if args.method == "all"
                else (args.method,),
                out=args.out,
                fmt=args.format,
                agreement_tol=_agreement_tolerance(args.tol),
            )
            if args.dump_lp:
                print(dump(assemble(g, args.s)))
            return cmd_bound(config)

        if args.command == "curve":
            g = _load_observable(args.observable)
            if args.s_min > args.s_max:
                raise DomainError(
                    f"empty length range: --s-min {args.s_min} > --s-max {args.s_max}"
                )
            if args.s_min < g.degree:
                raise DomainError(
                    f"--s-min {args.s_min} is below the observable degree {g.degree}"
                )
            config = RunConfig(
                command="curve",
                observable=g,
                s_min=args.s_min,
                s_max=args.s_max,
                out=args.out,
                fmt="csv",
                lp_cap=args.lp_cap,
            )
            return cmd_curve(config)

        if args.command == "verify":
            return cmd_verify(
                args.seed, _agreement_tolerance(args.tol), args.inject_perturbation
            )

        if args.command == "sample":
            return cmd_sample(args)

        if args.command == "coin-demo":
            return cmd_coin_demo()

        raise DomainError(f"unknown command {args.command!r}")
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, FinexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
