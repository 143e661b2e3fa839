"""Finite-cover Cech machinery for projective transition data.

Covers are combinatorial nerves with one constant invertible lift per
overlap (the desk-scale stand-in for a sheaf-theoretic cover with
contractible overlaps). The scalar discrepancies of triple products form
a mu_m-valued 2-cocycle; its order modulo coboundaries is decided by an
exact Smith-normal-form solve over Z/m.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import lcm

import numpy as np

from .errors import (
    BadNerve,
    NotCocycle,
    NotPGLCocycle,
    NotRootOfUnity,
    OutOfRange,
    ShapeMismatch,
)
from .gluing_sim import det_normalize, is_local_operator, proj_equal, weyl_ops
from .modular import solve_mod
from .tensor_core import DEFAULT_RANK_TOL, _frozen

SCALAR_TOL = 1e-9
ROOT_ORDER_CAP = 64


@dataclass(frozen=True)
class CechCover:
    """Nerve of a finite cover with invertible transition lifts.

    transitions maps ordered index pairs to n x n lifts; the reverse of a
    stored pair is implicitly the inverse lift. triples and quadruples
    list the higher overlaps of the nerve, ascending.
    """

    chart_count: int
    n: int
    pairs: tuple[tuple[int, int], ...]
    transitions: dict
    triples: tuple[tuple[int, int, int], ...]
    quadruples: tuple[tuple[int, int, int, int], ...]
    m: int | None = None

    def lift(self, i: int, j: int) -> np.ndarray:
        if i == j:
            return np.eye(self.n, dtype=complex)
        if (i, j) in self.transitions:
            return self.transitions[(i, j)]
        if (j, i) in self.transitions:
            return np.linalg.inv(self.transitions[(j, i)])
        raise BadNerve(f"no transition stored for pair ({i}, {j})")


def make_cover(n: int, pairs_with_lifts, triples=(), quadruples=(), m: int | None = None, chart_count: int | None = None) -> CechCover:
    """Assemble a cover; chart_count defaults to 1 + the largest index seen."""
    transitions = {}
    pairs = []
    for i, j, lift in pairs_with_lifts:
        lift = np.asarray(lift, dtype=complex)
        if lift.shape != (n, n):
            raise ShapeMismatch(f"lift for pair ({i}, {j}) has shape {lift.shape}, expected ({n}, {n})")
        transitions[(i, j)] = _frozen(lift)
        pairs.append((i, j))
    indices = [i for p in pairs for i in p] + [i for t in triples for i in t] + [0]
    count = chart_count if chart_count is not None else max(indices) + 1
    return CechCover(
        count,
        n,
        tuple(pairs),
        transitions,
        tuple(tuple(t) for t in triples),
        tuple(tuple(q) for q in quadruples),
        m,
    )


def _canonical_pairs(cover: CechCover) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for i, j in cover.pairs:
        key = (min(i, j), max(i, j))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def validate_nerve(cover: CechCover, tol: float = SCALAR_TOL) -> None:
    """Check downward closure and inverse-pair consistency; raise BadNerve."""
    have = {(min(i, j), max(i, j)) for i, j in cover.pairs}
    for t in cover.triples:
        if list(t) != sorted(set(t)):
            raise BadNerve(f"triple {t} is not strictly ascending")
        for a in range(3):
            for b in range(a + 1, 3):
                if (t[a], t[b]) not in have:
                    raise BadNerve(f"triple {t} lists overlap but pair ({t[a]}, {t[b]}) is missing")
    triple_set = set(cover.triples)
    for q in cover.quadruples:
        if list(q) != sorted(set(q)):
            raise BadNerve(f"quadruple {q} is not strictly ascending")
        for skip in range(4):
            face = tuple(x for k, x in enumerate(q) if k != skip)
            if face not in triple_set:
                raise BadNerve(f"quadruple {q} lists overlap but triple {face} is missing")
    for i, j in cover.pairs:
        if (j, i) in cover.transitions:
            if not proj_equal(cover.transitions[(j, i)], np.linalg.inv(cover.transitions[(i, j)]), tol):
                raise BadNerve(f"lifts for ({i}, {j}) and ({j}, {i}) are not inverse up to scalar")


@dataclass(frozen=True)
class Cocycle2:
    """mu_m-valued triple-overlap scalars, stored as exponents mod m."""

    m: int
    values: dict

    def exponent(self, triple: tuple[int, int, int]) -> int:
        return self.values[triple]


def _scalar_of(product: np.ndarray, tol: float) -> complex:
    n = product.shape[0]
    scalar = complex(np.trace(product)) / n
    if np.max(np.abs(product - scalar * np.eye(n))) > tol * max(1.0, abs(scalar)):
        raise NotPGLCocycle("triple product of lifts is not a scalar matrix")
    return scalar


def _root_exponent(scalar: complex, m: int, tol: float) -> int:
    if abs(abs(scalar) - 1.0) > tol:
        raise NotRootOfUnity(f"scalar {scalar} does not lie on the unit circle")
    e = round(m * (cmath.phase(scalar) % (2 * cmath.pi)) / (2 * cmath.pi)) % m
    if abs(scalar - cmath.exp(2j * cmath.pi * e / m)) > tol:
        raise NotRootOfUnity(f"scalar {scalar} is not close to a {m}-th root of unity")
    return e


def _infer_order(scalar: complex, tol: float) -> int:
    if abs(abs(scalar) - 1.0) > tol:
        raise NotRootOfUnity(f"scalar {scalar} does not lie on the unit circle")
    for order in range(1, ROOT_ORDER_CAP + 1):
        if abs(scalar**order - 1.0) < tol * order:
            return order
    raise NotRootOfUnity(f"scalar {scalar} has no small root-of-unity order")


def pgl_cocycle_defect(cover: CechCover, tol: float = SCALAR_TOL) -> Cocycle2:
    """Scalars of all triple products, as exponents in Z/m.

    m is taken from the cover when present, otherwise inferred as the lcm
    of the detected scalar orders.
    """
    scalars = {}
    for t in cover.triples:
        i, j, k = t
        product = cover.lift(i, j) @ cover.lift(j, k) @ cover.lift(k, i)
        scalars[t] = _scalar_of(product, tol)
    m = cover.m
    if m is None:
        m = 1
        for c in scalars.values():
            m = lcm(m, _infer_order(c, tol))
    values = {t: _root_exponent(c, m, tol) for t, c in scalars.items()}
    return Cocycle2(m, values)


def is_2cocycle(c: Cocycle2, cover: CechCover) -> bool:
    """Check the alternating-sum identity on every nerve quadruple."""
    for q in cover.quadruples:
        i, j, k, l = q
        total = (
            c.exponent((j, k, l))
            - c.exponent((i, k, l))
            + c.exponent((i, j, l))
            - c.exponent((i, j, k))
        )
        if total % c.m != 0:
            return False
    return True


def _coboundary_matrix(cover: CechCover) -> tuple[list[list[int]], list[tuple[int, int]]]:
    pairs = _canonical_pairs(cover)
    index = {p: col for col, p in enumerate(pairs)}
    rows = []
    for i, j, k in cover.triples:
        row = [0] * len(pairs)
        row[index[(j, k)]] += 1
        row[index[(i, k)]] -= 1
        row[index[(i, j)]] += 1
        rows.append(row)
    return rows, pairs


def coboundary_witness(c: Cocycle2, cover: CechCover, scale: int = 1) -> dict | None:
    """b on pairs with (delta b)_ijk = scale * c_ijk mod m, or None."""
    matrix, pairs = _coboundary_matrix(cover)
    rhs = [(scale * c.exponent(t)) % c.m for t in cover.triples]
    sol = solve_mod(matrix, rhs, c.m)
    if sol is None:
        return None
    return dict(zip(pairs, sol))


def class_order(c: Cocycle2, cover: CechCover) -> int:
    """Smallest l >= 1 such that l * c is a coboundary over Z/m."""
    if not is_2cocycle(c, cover):
        raise NotCocycle("exponent cochain fails the 2-cocycle identity")
    m = c.m
    divisors = sorted(d for d in range(1, m + 1) if m % d == 0)
    for ell in divisors:
        if coboundary_witness(c, cover, scale=ell) is not None:
            return ell
    return m  # unreachable: l = m always solves with b = 0


def rescale_lifts(cover: CechCover, b_exponents: dict, m: int) -> CechCover:
    """Multiply each canonical lift by zeta_m^(-b): shifts the defect by -delta(b)."""
    zeta = cmath.exp(2j * cmath.pi / m)
    new = {}
    for (i, j), lift in cover.transitions.items():
        key = (i, j) if (i, j) in b_exponents else (j, i)
        sign = 1 if (i, j) in b_exponents else -1
        b = b_exponents.get(key, 0)
        new[(i, j)] = _frozen(lift * zeta ** (-sign * b))
    return CechCover(cover.chart_count, cover.n, cover.pairs, new, cover.triples, cover.quadruples, cover.m)


@dataclass(frozen=True)
class ReductionReport:
    """Per-pair stabilizer-membership verdicts and the overall reduction flag."""

    pair_verdicts: dict
    reducible: bool
    torsion: int


def torsion_bound(dims) -> int:
    """lcm of the subsystem dimensions: the order bound for reducible classes."""
    dims = [int(d) for d in dims]
    if any(d < 2 for d in dims):
        raise OutOfRange(f"subsystem dimensions must be >= 2, got {dims}")
    out = 1
    for d in dims:
        out = lcm(out, d)
    return out


def check_reduction(cover: CechCover, d_a: int, d_b: int, tol: float = DEFAULT_RANK_TOL) -> ReductionReport:
    """Test every transition for Segre-stabilizer membership of type (d_a, d_b)."""
    if cover.n != d_a * d_b:
        raise ShapeMismatch(f"cover acts in dimension {cover.n}, not {d_a}*{d_b}")
    verdicts = {}
    for i, j in _canonical_pairs(cover):
        verdicts[(i, j)] = is_local_operator(cover.lift(i, j), d_a, d_b, tol)
    return ReductionReport(verdicts, all(verdicts.values()), torsion_bound((d_a, d_b)))


_ARC_COUNT = 3


def _arc_jump(a_i: int, a_j: int) -> int:
    # Branch sheet of chart i minus that of chart j on their overlap; the
    # 2 pi jump sits on the seam between the last arc and the first.
    if (a_i, a_j) == (_ARC_COUNT - 1, 0):
        return 1
    if (a_i, a_j) == (0, _ARC_COUNT - 1):
        return -1
    return 0


def symbol_cover(p: int) -> CechCover:
    """Desk-scale symbol-algebra cover of the unit torus, m = p^2.

    Nine charts (3 arcs per circle factor); crossing a u-seam contributes
    a power of Z, crossing a v-seam a power of X^-1, and lifts are
    normalized to determinant 1. Higher overlaps exist exactly when the
    charts involve at most two distinct arcs per factor.
    """
    if not 2 <= p <= 5:
        raise OutOfRange(f"symbol cover supports 2 <= p <= 5, got {p}")
    m = p * p
    w = weyl_ops(m)
    x_inv = np.linalg.matrix_power(w.x_op, m - 1)
    charts = [(a, b) for a in range(_ARC_COUNT) for b in range(_ARC_COUNT)]
    count = len(charts)

    def lift_for(i: int, j: int) -> np.ndarray:
        (ai, bi), (aj, bj) = charts[i], charts[j]
        s = _arc_jump(ai, aj) % m
        t = _arc_jump(bi, bj) % m
        g = np.linalg.matrix_power(w.z_op, s) @ np.linalg.matrix_power(x_inv, t)
        return det_normalize(g)

    pairs = [(i, j, lift_for(i, j)) for i in range(count) for j in range(i + 1, count)]

    def in_nerve(ids) -> bool:
        return len({charts[i][0] for i in ids}) <= 2 and len({charts[i][1] for i in ids}) <= 2

    from itertools import combinations

    triples = [t for t in combinations(range(count), 3) if in_nerve(t)]
    quadruples = [q for q in combinations(range(count), 4) if in_nerve(q)]
    return make_cover(m, pairs, triples, quadruples, m=m, chart_count=count)
