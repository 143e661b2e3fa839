"""Dense pure-state tensors: flattenings, rank tests, Schmidt decomposition.

States are projective: nothing here normalizes on construction, and every
rank/membership output is invariant under rescaling the coefficient vector.
Coefficients are stored row-major with the last subsystem index fastest.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NotSquare, ShapeMismatch, TooLarge, WrongShape, ZeroState

DEFAULT_RANK_TOL = 1e-9
MINOR_SIZE_CAP = 8


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """A nonzero vector in a tensor product of subsystems, up to scale."""

    dims: tuple[int, ...]
    coeffs: np.ndarray

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Coefficients reshaped to one axis per subsystem."""
        return self.coeffs.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> "PureState":
        return PureState(self.dims, _frozen(self.coeffs / self.norm()))


def make_state(dims, coeffs) -> PureState:
    """Validate and build a PureState. Does not normalize.

    Raises ZeroState if every coefficient vanishes, ShapeMismatch if the
    coefficient count disagrees with the subsystem dimensions.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1 or any(d < 2 for d in dims):
        raise ShapeMismatch(f"subsystem dimensions must all be >= 2, got {dims}")
    vec = np.asarray(coeffs, dtype=complex).reshape(-1)
    n = int(np.prod(dims))
    if vec.size != n:
        raise ShapeMismatch(f"got {vec.size} coefficients for dims {dims} (need {n})")
    if not np.any(vec != 0):
        raise ZeroState("state has no nonzero coefficient")
    return PureState(dims, _frozen(vec))


@dataclass(frozen=True)
class Bipartition:
    """A cut A|A^c of the subsystem index set, canonicalized to contain 0."""

    n_subsystems: int
    block_a: tuple[int, ...]

    def __post_init__(self):
        n = self.n_subsystems
        block = tuple(sorted(set(self.block_a)))
        if not block or len(block) >= n or any(i < 0 or i >= n for i in block):
            raise ShapeMismatch(f"block {self.block_a} is not a proper nonempty subset of range({n})")
        if 0 not in block:
            block = self.complement_of(block, n)
        object.__setattr__(self, "block_a", block)

    @staticmethod
    def complement_of(block, n) -> tuple[int, ...]:
        return tuple(i for i in range(n) if i not in block)

    @property
    def block_b(self) -> tuple[int, ...]:
        return self.complement_of(self.block_a, self.n_subsystems)


@dataclass(frozen=True)
class FlatteningMatrix:
    """The state's coefficients regrouped into a D_A x D_B matrix."""

    rows: int
    cols: int
    entries: np.ndarray
    source_bipartition: Bipartition


def flatten(state: PureState, cut: Bipartition) -> FlatteningMatrix:
    """Flatten a state along a bipartition.

    Entry (alpha, beta) is the coefficient at the multi-index obtained by
    merging alpha over the block-A subsystems and beta over the complement,
    both row-major in sorted subsystem order.
    """
    if cut.n_subsystems != state.n_subsystems:
        raise ShapeMismatch(f"cut is over {cut.n_subsystems} subsystems, state has {state.n_subsystems}")
    a, b = cut.block_a, cut.block_b
    d_a = int(np.prod([state.dims[i] for i in a]))
    d_b = int(np.prod([state.dims[i] for i in b]))
    m = state.tensor().transpose(a + b).reshape(d_a, d_b)
    return FlatteningMatrix(d_a, d_b, _frozen(m), cut)


def _svd_rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def numerical_rank(m: FlatteningMatrix | np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Count singular values above tol times the largest one."""
    if not 0 < tol < 1:
        raise ShapeMismatch(f"relative tolerance must lie in (0, 1), got {tol}")
    entries = m.entries if isinstance(m, FlatteningMatrix) else np.asarray(m, dtype=complex)
    return _svd_rank(entries, tol)


def minor_rank(m: FlatteningMatrix | np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank by exhaustive minor enumeration: the independent oracle.

    Returns the smallest k such that every (k+1)-minor of the
    max-modulus-normalized matrix has modulus <= tol. Capped at 8x8.
    """
    entries = m.entries if isinstance(m, FlatteningMatrix) else np.asarray(m, dtype=complex)
    rows, cols = entries.shape
    if rows > MINOR_SIZE_CAP or cols > MINOR_SIZE_CAP:
        raise TooLarge(f"minor enumeration capped at {MINOR_SIZE_CAP}x{MINOR_SIZE_CAP}, got {rows}x{cols}")
    top = np.abs(entries).max()
    if top == 0.0:
        return 0
    scaled = entries / top
    for k in range(min(rows, cols), 0, -1):
        for ri in combinations(range(rows), k):
            sub = scaled[np.ix_(ri, range(cols))]
            for ci in combinations(range(cols), k):
                if abs(np.linalg.det(sub[:, ci])) > tol:
                    return k
    return 0


@dataclass(frozen=True)
class SchmidtDecomposition:
    """sigma/left/right data of a bipartite cut, for the normalized state.

    input_norm records the norm of the supplied state so the caller can
    undo the internal normalization.
    """

    sigmas: tuple[float, ...]
    left_vecs: np.ndarray
    right_vecs: np.ndarray
    input_norm: float

    @property
    def rank(self) -> int:
        return len(self.sigmas)


def _lex_key(v: np.ndarray):
    return tuple(x for c in v for x in (round(c.real, 9), round(c.imag, 9)))


def schmidt_decompose(state: PureState, cut: Bipartition, tol: float = DEFAULT_RANK_TOL) -> SchmidtDecomposition:
    """SVD of the flattening with deterministic phases.

    The state is normalized internally. Phase convention: the first
    nonvanishing component of each left vector is real positive. Ties in
    sigma are ordered lexicographically on the phase-fixed left vectors.
    """
    norm = state.norm()
    m = flatten(state.normalized(), cut).entries
    u, s, vh = np.linalg.svd(m)
    k = _svd_rank(m, tol)
    cols = []
    for a in range(k):
        ua, va = u[:, a].copy(), vh[a, :].copy()
        nz = np.flatnonzero(np.abs(ua) > 1e-12)
        if nz.size:
            phase = ua[nz[0]] / abs(ua[nz[0]])
            ua, va = ua * np.conj(phase), va * phase
        cols.append((round(float(s[a]), 12), ua, va, float(s[a])))
    cols.sort(key=lambda c: (-c[0], _lex_key(c[1])))
    sigmas = tuple(c[3] for c in cols)
    left = np.column_stack([c[1] for c in cols]) if cols else np.zeros((m.shape[0], 0))
    right = np.column_stack([c[2] for c in cols]) if cols else np.zeros((m.shape[1], 0))
    return SchmidtDecomposition(sigmas, _frozen(left), _frozen(right), norm)


def concurrence(state: PureState) -> float:
    """2|det| of the two-qubit flattening; zero exactly on product states."""
    if state.dims != (2, 2):
        raise WrongShape(f"concurrence needs two qubits, got dims {state.dims}")
    m = flatten(state.normalized(), Bipartition(2, (0,))).entries
    return float(2.0 * abs(np.linalg.det(m)))


def cofactor_matrix(m: np.ndarray) -> np.ndarray:
    """Signed (n-1)-minor matrix; vanishes identically iff rank <= n-2."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"cofactor matrix needs a square input, got shape {m.shape}")
    n = m.shape[0]
    if n > MINOR_SIZE_CAP:
        raise TooLarge(f"cofactor enumeration capped at {MINOR_SIZE_CAP}, got {n}")
    out = np.empty((n, n), dtype=complex)
    idx = np.arange(n)
    for i in range(n):
        for j in range(n):
            sub = m[np.ix_(idx != i, idx != j)]
            out[i, j] = (-1) ** (i + j) * (np.linalg.det(sub) if n > 1 else 1.0)
    return out


@dataclass(frozen=True)
class IncidenceLift:
    """Orthonormal support bases on both sides plus the k x k core.

    Reassembling sum_ij core[i,j] ua_i (x) ub_j reproduces the state.
    """

    ua_basis: np.ndarray
    ub_basis: np.ndarray
    core: np.ndarray

    @property
    def rank(self) -> int:
        return self.core.shape[0]


def incidence_lift(state: PureState, cut: Bipartition, tol: float = DEFAULT_RANK_TOL) -> IncidenceLift:
    """Lift a state to (support of A-side, support of B-side, core).

    ua_basis spans the column space of the flattening, ub_basis the column
    space of its transpose; in the chosen bases the flattening takes the
    block form with only the leading k x k block nonzero.
    """
    m = flatten(state, cut).entries
    u, s, vh = np.linalg.svd(m)
    k = max(_svd_rank(m, tol), 1)
    ua = u[:, :k]
    ub = vh[:k, :].T
    core = ua.conj().T @ m @ ub.conj()
    return IncidenceLift(_frozen(ua), _frozen(ub), _frozen(core))


def reassemble_lift(lift: IncidenceLift) -> np.ndarray:
    """Rebuild the flattening matrix encoded by an incidence lift."""
    return lift.ua_basis @ lift.core @ lift.ub_basis.T


@dataclass(frozen=True)
class SectorDecomposition:
    """Split of an operator on H_A (x) H_B into scalar/local/entangling parts."""

    scalar: complex
    a_local: np.ndarray
    b_local: np.ndarray
    entangling: np.ndarray


def _partial_trace(op4: np.ndarray, over_b: bool) -> np.ndarray:
    # op4 has axes (i, a, j, b) with row index i*d_b + a.
    return np.trace(op4, axis1=1, axis2=3) if over_b else np.trace(op4, axis1=0, axis2=2)


def sector_decompose(op: np.ndarray, d_a: int, d_b: int) -> SectorDecomposition:
    """Project an operator onto scalar + A-local + B-local + entangling.

    The entangling component lies in End_0 (x) End_0: both partial traces
    vanish. Reconstruction scalar*I + a (x) I + I (x) b + entangling is exact
    up to floating error.
    """
    op = np.asarray(op, dtype=complex)
    n = d_a * d_b
    if op.shape != (n, n):
        raise ShapeMismatch(f"operator shape {op.shape} does not match ({n}, {n})")
    op4 = op.reshape(d_a, d_b, d_a, d_b)
    scalar = complex(np.trace(op)) / n
    a_marg = _partial_trace(op4, over_b=True) / d_b
    b_marg = _partial_trace(op4, over_b=False) / d_a
    a_local = a_marg - (np.trace(a_marg) / d_a) * np.eye(d_a)
    b_local = b_marg - (np.trace(b_marg) / d_b) * np.eye(d_b)
    ent = op - scalar * np.eye(n) - np.kron(a_local, np.eye(d_b)) - np.kron(np.eye(d_a), b_local)
    return SectorDecomposition(scalar, _frozen(a_local), _frozen(b_local), _frozen(ent))
