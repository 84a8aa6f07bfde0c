"""Worst-case bounds as cone-membership linear programs.

The bound for sequence length s is  max c  such that the lifted observable
minus the constant c is a non-negative combination of the degree-s
monomials theta^n.  Substituting theta_d = 1 - theta_1 - ... - theta_{d-1}
and equating coefficients of every surviving monomial turns membership
into equality constraints: one row per reduced monomial, one non-negative
column u_n per count vector, plus the single free column c.  For the
six-face degree-2 instance that is the 21-row system worked in full by
the LP assembly examples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DomainError, SolverFailure
from .exchangeable import BoundResult, oracle_bound
from .multiindex import CountVector, compositions, num_compositions
from .polynomial import (
    SimplexPolynomial,
    homogenize,
    monomial,
    reduce_to_free_vars,
)
from .solvers import OPTIMAL, LinearProgram, simplex_solve


@dataclass
class ConeMembershipLP:
    """Assembled equality system: columns u_n (non-negative) then c (free)."""

    d: int
    s: int
    u_columns: list[CountVector]
    rows: list[tuple[int, ...]]  # reduced-monomial exponent labelling each row
    lp: LinearProgram
    lifted: SimplexPolynomial = field(repr=False)


def assemble(g: SimplexPolynomial, s: int) -> ConeMembershipLP:
    """Build the coefficient-matching LP for g against length-s sequences.

    Rows are indexed by the reduced monomials theta_1^e1 ... theta_{d-1}^e_{d-1};
    the map n -> (n_1, ..., n_{d-1}) is a bijection from degree-s count
    vectors onto exponents with total degree <= s, so there are exactly
    C(s+d-1, d-1) rows.
    """
    if s < g.degree:
        raise DomainError(f"sequence length {s} < polynomial degree {g.degree}")
    d = g.d
    comps = compositions(s, d)
    row_of = {n[: d - 1]: i for i, n in enumerate(comps)}
    m = len(comps)

    a = np.zeros((m, m + 1))
    for j, n in enumerate(comps):
        for e, coeff in reduce_to_free_vars(monomial(n)).items():
            a[row_of[e], j] = coeff
    # the constant c contributes only to the constant-monomial row
    a[row_of[(0,) * (d - 1)], m] = 1.0

    lifted = homogenize(g, s)
    b = np.zeros(m)
    for e, coeff in reduce_to_free_vars(lifted).items():
        b[row_of[e]] = coeff

    objective = np.zeros(m + 1)
    objective[m] = 1.0
    free = np.zeros(m + 1, dtype=bool)
    free[m] = True
    assert m == num_compositions(s, d)
    return ConeMembershipLP(
        d=d,
        s=s,
        u_columns=comps,
        rows=[n[: d - 1] for n in comps],
        lp=LinearProgram(a, b, objective, free),
        lifted=lifted,
    )


def solve_lp(
    cone_lp: ConeMembershipLP, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> tuple[float, np.ndarray, np.ndarray]:
    """Solve an assembled system; returns (optimal value, primal, dual).

    The dual has one entry per monomial row; paired with the reduction of
    any degree-s monomial it prices that monomial's expectation, which is
    how the optimal dual encodes the minimizing exchangeable distribution.
    """
    result = simplex_solve(cone_lp.lp, tolerances)
    if result.status != OPTIMAL:
        # a valid assembly always admits c = min(g) - 1 say, and c is capped
        # above by max(g), so any other status is an internal failure
        raise SolverFailure(
            f"cone LP terminated with status {result.status}",
            {"status": result.status, "iterations": result.iterations},
        )
    if result.residuals["complementary_slackness"] > tolerances.complementary_slackness:
        raise SolverFailure(
            "complementary slackness residual too large", result.residuals
        )
    return result.optimum, result.primal, result.dual


def lower_bound_lp(
    g: SimplexPolynomial, s: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> BoundResult:
    """LP route to the worst-case expectation over length-s sequences.

    Post-verifies the solution: the equality residual must be within the
    primal feasibility tolerance and the optimum must agree with the
    enumeration oracle within the cross-method tolerance.
    """
    cone_lp = assemble(g, s)
    result = simplex_solve(cone_lp.lp, tolerances)
    if result.status != OPTIMAL:
        raise SolverFailure(
            f"cone LP terminated with status {result.status}",
            {"status": result.status, "iterations": result.iterations},
        )
    if result.residuals["primal"] > tolerances.primal_feasibility:
        raise SolverFailure("LP feasibility residual too large", result.residuals)
    oracle = oracle_bound(g, s)
    gap = abs(result.optimum - oracle.value)
    if gap > tolerances.method_agreement:
        raise SolverFailure(
            "LP bound disagrees with the enumeration oracle",
            {"lp": result.optimum, "oracle": oracle.value, "gap": gap},
        )
    u = {
        n: float(v)
        for n, v in zip(cone_lp.u_columns, result.primal[:-1])
        if abs(v) > 0.0
    }
    certificate = {
        "u": u,
        "c": float(result.primal[-1]),
        "dual": result.dual.tolist(),
    }
    return BoundResult(
        value=result.optimum,
        method="lp",
        argmin=None,
        certificate=certificate,
        diagnostics={
            "iterations": result.iterations,
            "residuals": result.residuals,
            "rows": len(cone_lp.rows),
            "columns": len(cone_lp.u_columns) + 1,
            "oracle_gap": gap,
        },
    )


def dump(cone_lp: ConeMembershipLP) -> str:
    """Human-readable listing of the assembled system (debugging aid)."""
    lines = [
        f"cone membership LP  d={cone_lp.d}  s={cone_lp.s}",
        f"rows={len(cone_lp.rows)}  columns={len(cone_lp.u_columns) + 1}"
        "  (non-negative u columns + free c)",
        "objective: maximize c",
    ]
    a, b = cone_lp.lp.a, cone_lp.lp.b
    for i, e in enumerate(cone_lp.rows):
        parts = []
        for j, n in enumerate(cone_lp.u_columns):
            coeff = a[i, j]
            if coeff:
                parts.append(f"{coeff:+g}*u{list(n)}")
        if a[i, -1]:
            parts.append(f"{a[i, -1]:+g}*c")
        label = "".join(f"t{k+1}^{p}" for k, p in enumerate(e) if p) or "1"
        lines.append(f"[{label}]  " + " ".join(parts) + f" = {b[i]:g}")
    return "\n".join(lines)
