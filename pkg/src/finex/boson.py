"""The quantum route: symmetric subspace, occupation compression, eigenbounds.

A length-s exchangeable experiment over d outcomes maps onto s
indistinguishable d-level bosons.  The permutation-symmetric subspace of
the d**s tensor space has one orthonormal basis vector per count vector
(the occupation basis); compressing an orbit-constant diagonal observable
onto it gives a diagonal operator whose smallest eigenvalue is exactly
the worst-case expectation over all boson-symmetric density matrices,
which by the classical/quantum equivalence is the same worst case the urn
oracle and the cone LP compute.

Dense tensor-space objects (symmetrizer, permutation matrices, dense
density matrices) are capped at d**s <= 4096; they exist to let tests
verify the compressed path against literal matrix algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import CapacityError, DomainError, SolverFailure
from .exchangeable import BoundResult, ExchangeableDistribution
from .multiindex import (
    CountVector,
    compositions,
    num_compositions,
    orbit_size,
    rank,
    sequence_to_counts,
    sequences,
)
from .polynomial import (
    DiagonalObservable,
    SimplexPolynomial,
    evaluate,
    gradient,
    homogenize,
    to_diagonal_observable,
)
from .solvers import jacobi_eigen, require_hermitian

DENSE_CAP = 4096


def _check_dense(s: int, d: int) -> int:
    dim = d**s
    if dim > DENSE_CAP:
        raise CapacityError(
            f"dense tensor space d**s = {dim} exceeds the cap {DENSE_CAP}; "
            "use the occupation-basis path"
        )
    return dim


@dataclass(frozen=True)
class OccupationBasis:
    """Orthonormal symmetric states, one per count vector of degree s."""

    d: int
    s: int
    elements: tuple[CountVector, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(compositions(self.s, self.d)))

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def index(self, n: CountVector) -> int:
        return rank(tuple(n))

    def dense_isometry(self) -> np.ndarray:
        """V with columns (1/sqrt(orbit)) * sum of the orbit's basis vectors."""
        dim = _check_dense(self.s, self.d)
        v = np.zeros((dim, self.dimension))
        for i, seq in enumerate(sequences(self.s, self.d)):
            n = sequence_to_counts(seq, self.d)
            v[i, self.index(n)] = 1.0 / np.sqrt(orbit_size(n))
        return v


@dataclass(frozen=True)
class BosonDensityMatrix:
    """Density matrix of s indistinguishable d-level bosons, compressed form.

    matrix lives on the occupation basis; the dense tensor-space state is
    V @ matrix @ V.conj().T.  PSD and unit trace are validated on
    construction; the symmetry constraint holds by construction because
    the occupation basis spans exactly the symmetric subspace.
    """

    basis: OccupationBasis
    matrix: np.ndarray

    def __post_init__(self):
        tol = DEFAULT_TOLERANCES
        m = require_hermitian(self.matrix, tol)
        if m.shape[0] != self.basis.dimension:
            raise DomainError(
                f"matrix dimension {m.shape[0]} != occupation dimension "
                f"{self.basis.dimension}"
            )
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > tol.normalization:
            raise DomainError(f"density matrix trace {trace} != 1")
        smallest = float(jacobi_eigen(m, tol).eigenvalues[0])
        if smallest < -tol.psd:
            raise DomainError(f"density matrix not PSD: min eigenvalue {smallest}")
        object.__setattr__(self, "matrix", m)

    def dense(self) -> np.ndarray:
        # equal to V @ matrix @ V^H, but written with one exact integer
        # orbit product per entry: same-orbit entries come out bit-exact
        # (probability/orbit_size) instead of picking up sqrt round-off
        _check_dense(self.basis.s, self.basis.d)
        seqs = sequences(self.basis.s, self.basis.d)
        idx = np.array(
            [self.basis.index(sequence_to_counts(seq, self.basis.d)) for seq in seqs]
        )
        orb = np.array(
            [orbit_size(sequence_to_counts(seq, self.basis.d)) for seq in seqs],
            dtype=float,
        )
        return self.matrix[np.ix_(idx, idx)] / np.sqrt(np.outer(orb, orb))


def permutation_matrix(perm, d: int) -> np.ndarray:
    """Tensor-factor relabelling: maps e_seq to e_(seq reordered by perm)."""
    perm = tuple(perm)
    s = len(perm)
    if sorted(perm) != list(range(s)):
        raise DomainError(f"{perm} is not a permutation of 0..{s - 1}")
    dim = _check_dense(s, d)
    p = np.zeros((dim, dim))
    for col, seq in enumerate(sequences(s, d)):
        permuted = tuple(seq[perm[i]] for i in range(s))
        row = 0
        for t in permuted:
            row = row * d + t
        p[row, col] = 1.0
    return p


def compose_permutations(pi, sigma):
    """The permutation whose matrix is permutation_matrix(pi) @ permutation_matrix(sigma)."""
    return tuple(sigma[pi[i]] for i in range(len(pi)))


def symmetrizer(s: int, d: int) -> np.ndarray:
    """Orthogonal projector onto the permutation-symmetric subspace.

    Equals the average of all s! tensor-factor permutation matrices;
    built here from the orbit structure (entries 1/orbit_size within an
    orbit block), which is the same matrix without the factorial sum.
    """
    dim = _check_dense(s, d)
    pi = np.zeros((dim, dim))
    orbit_members: dict[CountVector, list[int]] = {}
    for i, seq in enumerate(sequences(s, d)):
        orbit_members.setdefault(sequence_to_counts(seq, d), []).append(i)
    for n, members in orbit_members.items():
        weight = 1.0 / orbit_size(n)
        for a in members:
            for b in members:
                pi[a, b] = weight
    return pi


def symmetrizer_from_permutations(s: int, d: int) -> np.ndarray:
    """Literal (1/s!) sum over permutation matrices; test-scale reference."""
    dim = _check_dense(s, d)
    total = np.zeros((dim, dim))
    count = 0
    for perm in permutations(range(s)):
        total += permutation_matrix(perm, d)
        count += 1
    return total / count


def occupation_diagonal(obs: DiagonalObservable) -> np.ndarray:
    """Diagonal of the compressed observable, in occupation-basis order.

    Compressing an orbit-constant diagonal observable V^H diag(obs) V
    gives a diagonal matrix whose (n, n) entry is the observable's shared
    value on orbit n.
    """
    return np.array([obs.value(n) for n in compositions(obs.s, obs.d)])


def compress(obs: DiagonalObservable) -> np.ndarray:
    """Compressed observable as a dense matrix on the occupation basis."""
    return np.diag(occupation_diagonal(obs).astype(complex))


def compress_hermitian(g_matrix: np.ndarray, s: int, d: int) -> np.ndarray:
    """V^H G V for a dense Hermitian G on the d**s tensor space."""
    g_matrix = require_hermitian(g_matrix)
    dim = _check_dense(s, d)
    if g_matrix.shape[0] != dim:
        raise DomainError(f"matrix dimension {g_matrix.shape[0]} != d**s = {dim}")
    v = OccupationBasis(d, s).dense_isometry()
    return v.T @ g_matrix @ v


def quantum_bound(
    g: SimplexPolynomial, s: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> BoundResult:
    """Minimum of Tr(D rho) over boson-symmetric density matrices.

    The compressed operator of the lifted observable is diagonal on the
    occupation basis, so its minimum eigenvalue is the smallest diagonal
    entry and the optimal rho is the rank-one projector onto the matching
    occupation state; that basis vector is returned as the certificate.
    """
    if s < g.degree:
        raise DomainError(f"sequence length {s} < polynomial degree {g.degree}")
    obs = to_diagonal_observable(homogenize(g, s))
    diagonal = occupation_diagonal(obs)
    k = int(np.argmin(diagonal))  # first minimum wins: deterministic tie-break
    eigenvector = np.zeros(len(diagonal))
    eigenvector[k] = 1.0
    basis = OccupationBasis(g.d, s)
    return BoundResult(
        value=float(diagonal[k]),
        method="boson",
        argmin=basis.elements[k],
        certificate=eigenvector,
        diagnostics={"occupation_dimension": len(diagonal), "s": s},
    )


def rho_from_exchangeable(dist: ExchangeableDistribution) -> BosonDensityMatrix:
    """Boson state reproducing an exchangeable distribution.

    Mixture of occupation projectors weighted by the orbit probabilities;
    the dense form has the per-sequence probabilities on its diagonal and
    is invariant under the symmetrizer.
    """
    basis = OccupationBasis(dist.d, dist.r)
    weights = np.zeros(basis.dimension)
    for n, p in dist.orbit_probs.items():
        weights[basis.index(n)] = p
    return BosonDensityMatrix(basis, np.diag(weights.astype(complex)))


def witness_value(observable, rho: BosonDensityMatrix) -> float:
    """Tr(G rho) for a diagonal observable or a dense Hermitian matrix.

    Negative output for an observable whose polynomial is non-negative on
    product states certifies that rho is no mixture of identical products
    (the finite-exchangeability / entanglement witness test).
    """
    if isinstance(observable, DiagonalObservable):
        if (observable.d, observable.s) != (rho.basis.d, rho.basis.s):
            raise DomainError(
                f"observable is d={observable.d}, s={observable.s}; state is "
                f"d={rho.basis.d}, s={rho.basis.s}"
            )
        compressed = np.diag(occupation_diagonal(observable).astype(complex))
    else:
        compressed = compress_hermitian(
            np.asarray(observable), rho.basis.s, rho.basis.d
        )
    value = np.trace(compressed @ rho.matrix)
    return float(value.real)


def to_json(rho: BosonDensityMatrix) -> str:
    """Serialize a boson state: basis in rank order, entries as [re, im]."""
    matrix = [
        [[float(v.real), float(v.imag)] for v in row] for row in rho.matrix
    ]
    doc = {
        "d": rho.basis.d,
        "s": rho.basis.s,
        "basis": [list(n) for n in rho.basis.elements],
        "matrix": matrix,
    }
    return json.dumps(doc)


def from_json(text: str) -> BosonDensityMatrix:
    """Parse the JSON density-matrix format; validates PSD and unit trace."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    for key in ("d", "s", "matrix"):
        if not isinstance(doc, dict) or key not in doc:
            raise DomainError('density-matrix JSON must carry "d", "s", "matrix"')
    basis = OccupationBasis(doc["d"], doc["s"])
    if "basis" in doc and [tuple(n) for n in doc["basis"]] != list(basis.elements):
        raise DomainError("basis listing does not match the occupation rank order")
    raw = doc["matrix"]
    dim = basis.dimension
    if len(raw) != dim or any(len(row) != dim for row in raw):
        raise DomainError(f"matrix must be {dim}x{dim} for d={doc['d']}, s={doc['s']}")
    matrix = np.array(
        [[complex(entry[0], entry[1]) for entry in row] for row in raw]
    )
    return BosonDensityMatrix(basis, matrix)


def _project_to_simplex(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(x)[::-1]
    cumulative = np.cumsum(u) - 1.0
    indices = np.arange(1, len(x) + 1)
    positive = u - cumulative / indices > 0
    k = indices[positive][-1]
    tau = cumulative[k - 1] / k
    return np.maximum(x - tau, 0.0)


def _descent_starts(d: int, total: int = 64) -> np.ndarray:
    """Corners, edge midpoints, barycenter, then seeded random fill."""
    starts = [np.eye(d)[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            mid = np.zeros(d)
            mid[i] = mid[j] = 0.5
            starts.append(mid)
    starts.append(np.full(d, 1.0 / d))
    rng = np.random.default_rng(0)  # fixed stream: the routine is deterministic
    while len(starts) < total:
        starts.append(rng.dirichlet(np.ones(d)))
    return np.array(starts[:total])


def _grid_minimum(g: SimplexPolynomial, target_points: int = 100_000) -> float:
    """Minimum over the densest rational grid with at most ~target points."""
    resolution = 1
    while num_compositions(resolution + 1, g.d) <= target_points:
        resolution += 1
    points = np.array(compositions(resolution, g.d), dtype=float) / resolution
    values = np.zeros(len(points))
    for n, c in g.terms.items():
        term = np.full(len(points), c)
        for i, e in enumerate(n):
            if e:
                term *= points[:, i] ** e
        values += term
    return float(values.min())


def simplex_minimum(
    g: SimplexPolynomial, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Minimum of g over the probability simplex (the iid-mixture limit).

    Multistart projected gradient descent with backtracking, verified
    against a deterministic grid scan of roughly 1e5 simplex points: the
    descent result must not exceed the grid minimum by more than the grid
    slack, otherwise the routine failed and says so.
    """
    best = np.inf
    for start in _descent_starts(g.d):
        x = start.copy()
        step = 1.0
        value = evaluate(g, x)
        for _ in range(500):
            grad = np.array(gradient(g, x))
            moved = False
            while step > 1e-14:
                candidate = _project_to_simplex(x - step * grad)
                candidate_value = evaluate(g, candidate)
                if candidate_value < value - 1e-15:
                    x, value = candidate, candidate_value
                    moved = True
                    step *= 1.5
                    break
                step *= 0.5
            if not moved:
                break
        best = min(best, value)

    grid = _grid_minimum(g)
    if best > grid + tolerances.grid_slack:
        raise SolverFailure(
            "descent missed the grid minimum",
            {"descent": best, "grid": grid, "slack": tolerances.grid_slack},
        )
    return float(best)
