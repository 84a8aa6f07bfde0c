"""Central tolerance record.

Every numerical threshold used anywhere in the package lives in this one
frozen dataclass, so there is a single tuning point.  The defaults are the
contract values quoted in error messages and enforced by the test suite;
override them only by constructing a new record and passing it explicitly.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # linear programming
    primal_feasibility: float = 1e-8
    dual_feasibility: float = 1e-8
    complementary_slackness: float = 1e-8
    pivot_threshold: float = 1e-10
    simplex_iteration_cap: int = 1_000_000
    simplex_stall_limit: int = 200      # degenerate iterations before Bland's rule engages
    simplex_refresh_every: int = 50     # basis-inverse refactorization period

    # eigensolver
    eigen_residual: float = 1e-9        # ||A v - lambda v|| <= this * ||A||_F
    eigen_orthonormality: float = 1e-10
    eigen_sweep_cap: int = 100
    hermiticity: float = 1e-12

    # distributions
    symmetry_check: float = 1e-9
    normalization: float = 1e-9
    negativity: float = 1e-12
    psd: float = 1e-9

    # polynomial arithmetic
    coefficient_prune: float = 1e-15

    # cross-method verification
    method_agreement: float = 1e-7
    grid_slack: float = 1e-6


DEFAULT_TOLERANCES = Tolerances()
