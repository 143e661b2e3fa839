"""Weyl operators, projective holonomy, locality tests, torus spin chain.

Loop letters map to fixed gauge elements: u -> [Z], v -> [X^-1], capital
letters to the inverse classes; words compose left to right as matrix
products. This is one consistent convention for absorbing root-of-unity
branch jumps as gauge transformations; any other consistent assignment
differs by coboundaries only.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import BadWord, NotCentral, OutOfRange, ShapeMismatch
from .tensor_core import DEFAULT_RANK_TOL, PureState, _frozen, _svd_rank, make_state

WEYL_MAX_DIM = 64
PROJ_TOL = 1e-9


@dataclass(frozen=True)
class WeylSystem:
    """Clock and shift pair in dimension m with its primitive root of unity."""

    m: int
    zeta: complex
    x_op: np.ndarray
    z_op: np.ndarray


def weyl_ops(m: int) -> WeylSystem:
    """Shift X|r> = |r+1> and clock Z|r> = zeta^r |r>, zeta = exp(2 pi i / m)."""
    if not 2 <= m <= WEYL_MAX_DIM:
        raise OutOfRange(f"Weyl dimension must satisfy 2 <= m <= {WEYL_MAX_DIM}, got {m}")
    zeta = cmath.exp(2j * cmath.pi / m)
    x = np.zeros((m, m), dtype=complex)
    for r in range(m):
        x[(r + 1) % m, r] = 1.0
    z = np.diag([zeta**r for r in range(m)])
    return WeylSystem(m, zeta, _frozen(x), _frozen(z))


def det_normalize(g: np.ndarray) -> np.ndarray:
    """Scale an invertible matrix to determinant 1.

    The scaling root is the one with argument in [0, 2 pi / n), n the
    matrix size, so the normalization is deterministic.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    det = complex(np.linalg.det(g))
    if abs(det) < 1e-12:
        raise ShapeMismatch("matrix is numerically singular, cannot normalize")
    target = 1.0 / det
    theta = cmath.phase(target) % (2 * cmath.pi)
    scale = abs(target) ** (1.0 / n) * cmath.exp(1j * theta / n)
    return g * scale


@dataclass(frozen=True)
class ProjectiveOperator:
    """An invertible lift; equality is only meaningful modulo scalars."""

    lift: np.ndarray

    def __post_init__(self):
        lift = np.asarray(self.lift, dtype=complex)
        if lift.ndim != 2 or lift.shape[0] != lift.shape[1]:
            raise ShapeMismatch(f"lift must be square, got shape {lift.shape}")
        norm = det_normalize(lift)  # also certifies invertibility
        object.__setattr__(self, "lift", _frozen(norm))

    @property
    def dim(self) -> int:
        return self.lift.shape[0]


def proj_equal(g: np.ndarray | ProjectiveOperator, h: np.ndarray | ProjectiveOperator, tol: float = PROJ_TOL) -> bool:
    """Projective equality: rescale both by the same max-modulus entry and compare."""
    ga = g.lift if isinstance(g, ProjectiveOperator) else np.asarray(g, dtype=complex)
    ha = h.lift if isinstance(h, ProjectiveOperator) else np.asarray(h, dtype=complex)
    if ga.shape != ha.shape:
        return False
    pos = np.unravel_index(np.argmax(np.abs(ga)), ga.shape)
    if abs(ha[pos]) < tol * np.abs(ha).max():
        return False
    return bool(np.max(np.abs(ga / ga[pos] - ha / ha[pos])) < tol)


@dataclass(frozen=True)
class HolonomyConfig:
    """Loop data on the unit torus for the dimension-p^2 symbol model."""

    p: int
    base_point: tuple[complex, complex] = (1.0 + 0j, 1.0 + 0j)
    loop_word: str = ""

    def __post_init__(self):
        if self.p < 2:
            raise OutOfRange(f"p must be >= 2, got {self.p}")
        u0, v0 = self.base_point
        if abs(abs(u0) - 1.0) > 1e-9 or abs(abs(v0) - 1.0) > 1e-9:
            raise OutOfRange("base point must lie on the unit torus")

    @property
    def m(self) -> int:
        return self.p**2


def loop_holonomy(cfg: HolonomyConfig) -> ProjectiveOperator:
    """Evaluate a loop word as a product of gauge elements in PGL(m)."""
    if not cfg.loop_word:
        raise BadWord("loop word must be nonempty")
    w = weyl_ops(cfg.m)
    x_inv = np.linalg.matrix_power(w.x_op, cfg.m - 1)
    z_inv = np.conj(w.z_op)
    gauge = {
        "u": det_normalize(w.z_op),
        "U": det_normalize(z_inv),
        "v": det_normalize(x_inv),
        "V": det_normalize(w.x_op),
    }
    acc = np.eye(cfg.m, dtype=complex)
    for letter in cfg.loop_word:
        if letter not in gauge:
            raise BadWord(f"unknown loop letter {letter!r} (allowed: u U v V)")
        acc = acc @ gauge[letter]
    return ProjectiveOperator(acc)


def commutator_scalar(g: np.ndarray | ProjectiveOperator, h: np.ndarray | ProjectiveOperator, tol: float = PROJ_TOL) -> complex:
    """The central scalar g h g^-1 h^-1, normalized to modulus 1."""
    ga = g.lift if isinstance(g, ProjectiveOperator) else np.asarray(g, dtype=complex)
    ha = h.lift if isinstance(h, ProjectiveOperator) else np.asarray(h, dtype=complex)
    comm = ga @ ha @ np.linalg.inv(ga) @ np.linalg.inv(ha)
    n = comm.shape[0]
    scalar = complex(np.trace(comm)) / n
    if np.max(np.abs(comm - scalar * np.eye(n))) > tol * max(1.0, abs(scalar)):
        raise NotCentral("commutator is not a scalar matrix")
    return scalar / abs(scalar)


def _swap_operator(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def _realignment_rank_one(g: np.ndarray, d_a: int, d_b: int, tol: float) -> bool:
    r = g.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)
    return _svd_rank(r, tol) == 1


def is_local_operator(g: np.ndarray | ProjectiveOperator, d_a: int, d_b: int, tol: float = DEFAULT_RANK_TOL) -> bool:
    """Membership in the Segre-variety stabilizer.

    True iff some scalar multiple of the lift is a Kronecker product
    A (x) B (realignment rank 1), or, when d_a = d_b, becomes one after
    composing with the factor swap.
    """
    ga = g.lift if isinstance(g, ProjectiveOperator) else np.asarray(g, dtype=complex)
    if ga.shape != (d_a * d_b, d_a * d_b):
        raise ShapeMismatch(f"operator shape {ga.shape} does not match ({d_a * d_b}, {d_a * d_b})")
    if _realignment_rank_one(ga, d_a, d_b, tol):
        return True
    if d_a == d_b:
        return _realignment_rank_one(ga @ _swap_operator(d_a), d_a, d_b, tol)
    return False


def qudit_encode(r: int, p: int) -> tuple[int, int]:
    """Digits (a, b) with r = a + p*b, both in {0..p-1}."""
    if not 0 <= r < p * p:
        raise OutOfRange(f"index {r} outside range(p^2) for p = {p}")
    return r % p, r // p


def wire_order(state: PureState) -> np.ndarray:
    """Coefficients reindexed to the little-endian wire basis r = sum_i digit_i * prod(d_(<i))."""
    n = state.n_subsystems
    return state.tensor().transpose(tuple(reversed(range(n)))).ravel()


def from_wire(vec: np.ndarray, dims) -> PureState:
    """Inverse of wire_order: build a PureState from a wire-ordered vector."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    tensor = np.asarray(vec, dtype=complex).reshape(dims[::-1]).transpose(tuple(reversed(range(n))))
    return make_state(dims, tensor.ravel())


def to_qudit_pair(state: PureState, p: int) -> PureState:
    """Reinterpret a dimension-p^2 state as two p-level subsystems (r = a + p*b)."""
    if int(np.prod(state.dims)) != p * p:
        raise ShapeMismatch(f"state dimension {np.prod(state.dims)} is not p^2 = {p * p}")
    return from_wire(wire_order(state), (p, p))


def apply_holonomy(g: np.ndarray | ProjectiveOperator, state: PureState) -> PureState:
    """Act on a state by a projective operator (in the wire basis)."""
    ga = g.lift if isinstance(g, ProjectiveOperator) else np.asarray(g, dtype=complex)
    m = ga.shape[0]
    if int(np.prod(state.dims)) != m:
        raise ShapeMismatch(f"state dimension {np.prod(state.dims)} does not match operator size {m}")
    return from_wire(ga @ wire_order(state), state.dims)


@dataclass(frozen=True)
class SpinChainParams:
    """Couplings and the branch-resolved fourth root for the one-magnon block."""

    j_coupling: float = 1.0
    delta: float = 2.0
    theta_u: float = 0.0
    branch_offset: int = 0

    def __post_init__(self):
        if not self.delta > self.j_coupling > 0:
            raise OutOfRange(f"need delta > J > 0, got J={self.j_coupling}, delta={self.delta}")
        if self.branch_offset not in (0, 1, 2, 3):
            raise OutOfRange(f"branch offset must be in 0..3, got {self.branch_offset}")

    @property
    def u_quarter_root(self) -> complex:
        return cmath.exp(1j * (self.theta_u + 2 * cmath.pi * self.branch_offset) / 4)


def spin_hamiltonian(params: SpinChainParams) -> np.ndarray:
    """One-magnon block: hopping on sites 0,1 with a Peierls phase, penalty on 2,3."""
    j, d = params.j_coupling, params.delta
    w = params.u_quarter_root
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = -j * w
    h[1, 0] = -j / w
    h[2, 2] = d
    h[3, 3] = d
    return h


def ground_state(params: SpinChainParams) -> PureState:
    """Normalized minimal-energy eigenvector, |1>-coefficient real positive.

    Equals (u^(1/4)|0> + |1>)/sqrt(2) at energy -J.
    """
    h = spin_hamiltonian(params)
    vals, vecs = np.linalg.eigh(h)
    gs = vecs[:, int(np.argmin(vals))]
    phase = gs[1] / abs(gs[1])
    return make_state([4], gs * np.conj(phase))


def glue_ground_state(params: SpinChainParams) -> PureState:
    """Ground state carried to the neighboring chart: X^-1 applied, (2,2)-encoded.

    Equals (|00> + u^(1/4)|11>)/sqrt(2); Schmidt rank 2 whenever u != 0.
    """
    w = weyl_ops(4)
    x_inv = np.linalg.matrix_power(w.x_op, 3)
    glued = apply_holonomy(x_inv, ground_state(params))
    return to_qudit_pair(glued, 2)
