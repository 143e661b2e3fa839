"""Satake-side product criteria on unit-product eigenvalue multisets.

Spectral classes are renormalized to unit product on construction (the
principal n-th root of the product is divided out). The polynomial
criteria work purely at the level of elementary symmetric coordinates;
the brute-force slot-assignment oracle is their independent check.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import combinations
from math import prod

from .errors import OutOfRange, TooLarge, WrongSize, ZeroState

SPECTRAL_TOL = 1e-9
ORACLE_SIZE_CAP = 16


def _unit_product(values) -> tuple[complex, ...]:
    zs = tuple(complex(z) for z in values)
    if any(z == 0 for z in zs):
        raise ZeroState("spectral classes require nonzero eigenvalues")
    total = prod(zs)
    root = cmath.exp(cmath.log(total) / len(zs))
    return tuple(z / root for z in zs)


@dataclass(frozen=True)
class SpectralClass:
    """Multiset of nonzero eigenvalues with product 1."""

    eigenvalues: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _unit_product(self.eigenvalues))

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class LocalSpectra:
    """Per-factor eigenvalue lists, each with product 1."""

    factors: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(_unit_product(f) for f in self.factors))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)


def elem_sym(s: SpectralClass) -> list[complex]:
    """Elementary symmetric values e_1 .. e_n of the eigenvalues."""
    coeffs = [1.0 + 0j]
    for z in s.eigenvalues:
        coeffs = [coeffs[k] + (z * coeffs[k - 1] if k else 0) for k in range(len(coeffs))] + [z * coeffs[-1]]
    return coeffs[1:]


def tensor_spectrum(locals_: LocalSpectra) -> SpectralClass:
    """All slotwise products prod_i a_(i, j_i) over index tuples."""
    values = [1.0 + 0j]
    for factor in locals_.factors:
        values = [v * a for v in values for a in factor]
    return SpectralClass(tuple(values))


def _match_multiset(candidates, targets, tol: float) -> bool:
    pool = list(targets)
    for c in candidates:
        best, best_err = None, None
        for k, z in enumerate(pool):
            err = abs(c - z)
            if best_err is None or err < best_err:
                best, best_err = k, err
        if best is None or best_err > tol * (1.0 + abs(c)):
            return False
        pool.pop(best)
    return not pool


def is_22_product(s: SpectralClass, tol: float = SPECTRAL_TOL) -> tuple[bool, tuple[complex, complex] | None]:
    """Palindromic test e_1 = e_3 with witness reconstruction.

    The witness pairs the multiset into inversion pairs {u, 1/u, v, 1/v},
    then takes a with a^2 = uv and b = u/a.
    """
    if s.n != 4:
        raise WrongSize(f"(2,2) test needs 4 eigenvalues, got {s.n}")
    e = elem_sym(s)
    verdict = abs(e[0] - e[2]) <= tol * (1.0 + abs(e[0]))
    if not verdict:
        return False, None
    zs = s.eigenvalues
    wtol = max(tol, 1e-7)  # witness matching may be looser than the verdict
    for j in range(1, 4):
        u = zs[0]
        v = next(zs[k] for k in range(1, 4) if k != j)
        for sign in (1, -1):
            a = sign * cmath.sqrt(u * v)
            if a == 0:
                continue
            b = u / a
            spectrum = (a * b, a / b, b / a, 1.0 / (a * b))
            if _match_multiset(spectrum, zs, wtol):
                return True, (a, b)
    return True, None


def quartic_f(e) -> complex:
    """F = e3^2 + 2 e1 e3 + e1^4 - (e4 + 2 e2 + 1) e1^2 on the first four e's."""
    e1, e2, e3, e4 = (complex(x) for x in e[:4])
    return e3 * e3 + 2 * e1 * e3 + e1**4 - (e4 + 2 * e2 + 1) * e1 * e1


def is_222_product(s: SpectralClass, tol: float = SPECTRAL_TOL) -> bool:
    """Three palindromic relations plus the vanishing of the quartic F."""
    if s.n != 8:
        raise WrongSize(f"(2,2,2) test needs 8 eigenvalues, got {s.n}")
    e = elem_sym(s)
    for k in (1, 2, 3):
        if abs(e[8 - k - 1] - e[k - 1]) > tol * (1.0 + max(abs(e[k - 1]), abs(e[8 - k - 1]))):
            return False
    scale = 1.0 + abs(e[2]) ** 2 + 2 * abs(e[0]) * abs(e[2]) + abs(e[0]) ** 4 + (abs(e[3]) + 2 * abs(e[1]) + 1) * abs(e[0]) ** 2
    return abs(quartic_f(e)) <= tol * scale


def margin_222(s: SpectralClass) -> float:
    """Largest scaled residual of the (2,2,2) relations; small iff product."""
    e = elem_sym(s)
    worst = 0.0
    for k in (1, 2, 3):
        worst = max(worst, abs(e[8 - k - 1] - e[k - 1]) / (1.0 + max(abs(e[k - 1]), abs(e[8 - k - 1]))))
    scale = 1.0 + abs(e[2]) ** 2 + 2 * abs(e[0]) * abs(e[2]) + abs(e[0]) ** 4 + (abs(e[3]) + 2 * abs(e[1]) + 1) * abs(e[0]) ** 2
    return max(worst, abs(quartic_f(e)) / scale)


def margin_22(s: SpectralClass) -> float:
    e = elem_sym(s)
    return abs(e[0] - e[2]) / (1.0 + abs(e[0]))


def _bipartite_splits(zs: tuple[complex, ...], d_a: int, d_b: int, tol: float):
    """Yield (alpha, beta) with alpha_i * beta_j matching zs, unit products.

    Fixes the (0,0) cell at zs[0] (Weyl symmetry), enumerates the first
    row and column, predicts the rest of the grid, and verifies the
    multiset. Root-of-unity rescales are tried to meet the unit-product
    constraint on both sides.
    """
    rest = list(range(1, len(zs)))
    z00 = zs[0]
    for row_idx in combinations(rest, d_b - 1):
        row_left = [k for k in rest if k not in row_idx]
        for col_idx in combinations(row_left, d_a - 1):
            remaining = [zs[k] for k in row_left if k not in col_idx]
            row = [z00] + [zs[k] for k in row_idx]
            col = [z00] + [zs[k] for k in col_idx]
            interior = [col[i] * row[j] / z00 for i in range(1, d_a) for j in range(1, d_b)]
            if not _match_multiset(interior, remaining, max(tol, 1e-7)):
                continue
            col_prod = prod(col)
            for k in range(d_a):
                beta0 = cmath.exp((cmath.log(col_prod) + 2j * cmath.pi * k) / d_a)
                alpha = tuple(c / beta0 for c in col)
                alpha0 = z00 / beta0
                beta = tuple(r / alpha0 for r in row)
                if abs(prod(alpha) - 1.0) <= tol * 10 and abs(prod(beta) - 1.0) <= tol * 10:
                    yield alpha, beta


def d_product_oracle(s: SpectralClass, d, tol: float = SPECTRAL_TOL) -> LocalSpectra | None:
    """Brute-force factorization of the spectrum into slotwise products.

    Recursive over bipartite splits (d_1, prod of the rest); returns local
    witnesses or None. Exhaustive up to Weyl symmetry; capped at n <= 16.
    """
    dims = tuple(int(x) for x in d)
    if any(x < 1 for x in dims) or not dims:
        raise OutOfRange(f"bad type {d}")
    n = prod(dims)
    if n > ORACLE_SIZE_CAP:
        raise TooLarge(f"oracle capped at {ORACLE_SIZE_CAP} eigenvalues, got {n}")
    if s.n != n:
        raise WrongSize(f"spectrum has {s.n} eigenvalues, type {dims} needs {n}")
    if len(dims) == 1:
        return LocalSpectra((s.eigenvalues,))
    d_rest = prod(dims[1:])
    for alpha, beta in _bipartite_splits(s.eigenvalues, dims[0], d_rest, tol):
        inner = d_product_oracle(SpectralClass(beta), dims[1:], tol)
        if inner is not None:
            return LocalSpectra((alpha,) + inner.factors)
    return None


def sphericity_check(d) -> bool:
    """Necessary dimension condition n^2 - n - 2 sum(d_i^2) + 2r <= 0."""
    dims = tuple(int(x) for x in d)
    if len(dims) < 2 or any(x < 2 for x in dims):
        raise OutOfRange(f"need r >= 2 factors all of dimension >= 2, got {dims}")
    n = prod(dims)
    return n * n - n - 2 * sum(x * x for x in dims) + 2 * len(dims) <= 0
