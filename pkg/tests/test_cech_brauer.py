import numpy as np
import pytest

from egeo import (
    BadNerve,
    Cocycle2,
    NotPGLCocycle,
    NotRootOfUnity,
    OutOfRange,
    check_reduction,
    class_order,
    is_2cocycle,
    make_cover,
    pgl_cocycle_defect,
    symbol_cover,
    torsion_bound,
    validate_nerve,
    weyl_ops,
)
from egeo.cech_brauer import coboundary_witness, rescale_lifts
from egeo.modular import smith_normal_form, solve_mod


def vertex_gauge_cover(n, charts, lifts_at_charts, m=None, full_nerve=True):
    """Cover with g_ij = h_i h_j^-1: an honest cocycle with trivial defect."""
    pairs = []
    for i in range(charts):
        for j in range(i + 1, charts):
            pairs.append((i, j, lifts_at_charts[i] @ np.linalg.inv(lifts_at_charts[j])))
    triples = []
    quads = []
    if full_nerve:
        from itertools import combinations

        triples = list(combinations(range(charts), 3))
        quads = list(combinations(range(charts), 4))
    return make_cover(n, pairs, triples, quads, m=m, chart_count=charts)


# ------------------------------------------------------------ modular solver


def exact_det(mat):
    from fractions import Fraction

    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def test_smith_normal_form_random():
    rng = np.random.default_rng(7)
    for _ in range(30):
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        a = rng.integers(-5, 6, (rows, cols)).tolist()
        s, u, v = smith_normal_form(a)
        assert (np.array(u, dtype=object) @ np.array(a, dtype=object) @ np.array(v, dtype=object) == np.array(s, dtype=object)).all()
        assert abs(exact_det(u)) == 1
        assert abs(exact_det(v)) == 1
        diag = [s[i][i] for i in range(min(rows, cols))]
        for x, y in zip(diag, diag[1:]):
            assert x >= 0
            assert x == 0 or y % x == 0


def test_solve_mod_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        rows, cols = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        mod = int(rng.choice([2, 3, 4, 6, 9, 12]))
        a = rng.integers(-4, 5, (rows, cols))
        x_true = rng.integers(0, mod, cols)
        rhs = (a @ x_true) % mod
        x = solve_mod(a.tolist(), rhs.tolist(), mod)
        assert x is not None
        assert ((a @ np.array(x) - rhs) % mod == 0).all()


def test_solve_mod_unsolvable():
    assert solve_mod([[2]], [1], 4) is None
    assert solve_mod([[0]], [1], 3) is None


# ------------------------------------------------------------ nerve checking


def test_validate_two_chart_cover():
    cover = make_cover(2, [(0, 1, np.eye(2))])
    validate_nerve(cover)


def test_validate_missing_pair():
    cover = make_cover(2, [(0, 1, np.eye(2)), (1, 2, np.eye(2))], triples=[(0, 1, 2)])
    with pytest.raises(BadNerve):
        validate_nerve(cover)


def test_validate_missing_triple_under_quadruple():
    from itertools import combinations

    pairs = [(i, j, np.eye(2)) for i, j in combinations(range(4), 2)]
    cover = make_cover(2, pairs, triples=[(0, 1, 2)], quadruples=[(0, 1, 2, 3)])
    with pytest.raises(BadNerve):
        validate_nerve(cover)


def test_validate_inconsistent_inverse_pair():
    cover = make_cover(2, [(0, 1, np.diag([1.0, 2.0])), (1, 0, np.diag([1.0, 3.0]))])
    with pytest.raises(BadNerve):
        validate_nerve(cover)


def test_symbol_cover_nerve_is_valid():
    cover = symbol_cover(2)
    assert cover.chart_count == 9
    assert len(cover.triples) > 0
    validate_nerve(cover)


# ------------------------------------------------------------------- defect


def test_defect_of_honest_cocycle_is_zero():
    rng = np.random.default_rng(3)
    hs = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4)]
    cover = vertex_gauge_cover(2, 4, hs, m=2)
    defect = pgl_cocycle_defect(cover)
    assert all(v == 0 for v in defect.values.values())
    assert is_2cocycle(defect, cover)
    assert class_order(defect, cover) == 1


def test_defect_of_symbol_cover():
    cover = symbol_cover(2)
    defect = pgl_cocycle_defect(cover)
    assert defect.m == 4
    assert set(defect.values.values()) <= {0, 1, 2, 3}
    assert any(v != 0 for v in defect.values.values())
    assert is_2cocycle(defect, cover)


def test_defect_rejects_nonscalar_product():
    rng = np.random.default_rng(5)
    lifts = {
        (0, 1): rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
        (1, 2): rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
        (0, 2): rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
    }
    cover = make_cover(2, [(i, j, m) for (i, j), m in lifts.items()], triples=[(0, 1, 2)])
    with pytest.raises(NotPGLCocycle):
        pgl_cocycle_defect(cover)


def test_defect_rejects_nonunit_scalar():
    cover = make_cover(
        2,
        [(0, 1, np.eye(2)), (1, 2, np.eye(2)), (0, 2, 0.5 * np.eye(2))],
        triples=[(0, 1, 2)],
    )
    with pytest.raises(NotRootOfUnity):
        pgl_cocycle_defect(cover)


def test_is_2cocycle_zero_and_tampered():
    cover = symbol_cover(2)
    zero = Cocycle2(4, {t: 0 for t in cover.triples})
    assert is_2cocycle(zero, cover)
    defect = pgl_cocycle_defect(cover)
    tampered = dict(defect.values)
    face = cover.quadruples[0][:3]
    tampered[face] = (tampered[face] + 1) % 4
    assert not is_2cocycle(Cocycle2(4, tampered), cover)


# -------------------------------------------------------------- class order


def test_class_order_symbol_cover_and_multiples():
    cover = symbol_cover(2)
    defect = pgl_cocycle_defect(cover)
    assert class_order(defect, cover) == 4
    doubled = Cocycle2(4, {t: (2 * v) % 4 for t, v in defect.values.items()})
    assert class_order(doubled, cover) == 2
    zero = Cocycle2(4, {t: 0 for t in cover.triples})
    assert class_order(zero, cover) == 1


def test_class_order_divides_modulus():
    cover = symbol_cover(3)
    defect = pgl_cocycle_defect(cover)
    assert defect.m == 9
    assert is_2cocycle(defect, cover)
    assert 9 % class_order(defect, cover) == 0


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_symbol_cover_obstruction_exceeds_torsion_bound(p):
    # the class order is p^2 while reducibility would force it to divide p
    cover = symbol_cover(p)
    defect = pgl_cocycle_defect(cover)
    assert class_order(defect, cover) == p * p
    assert torsion_bound((p, p)) == p


def test_trivial_class_rescales_to_genuine_cocycle():
    # start from an honest cocycle and twist every lift by a root of unity:
    # the defect is a coboundary and the witness undoes it
    rng = np.random.default_rng(13)
    hs = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4)]
    cover = vertex_gauge_cover(2, 4, hs, m=4)
    twists = {p: int(t) for p, t in zip([(i, j) for i in range(4) for j in range(i + 1, 4)], rng.integers(0, 4, 6))}
    zeta = np.exp(2j * np.pi / 4)
    twisted = make_cover(
        2,
        [(i, j, cover.transitions[(i, j)] * zeta ** twists[(i, j)]) for (i, j) in cover.pairs],
        cover.triples,
        cover.quadruples,
        m=4,
    )
    defect = pgl_cocycle_defect(twisted)
    assert class_order(defect, twisted) == 1
    b = coboundary_witness(defect, twisted)
    assert b is not None
    fixed = rescale_lifts(twisted, b, 4)
    for i, j, k in fixed.triples:
        product = fixed.lift(i, j) @ fixed.lift(j, k) @ fixed.lift(k, i)
        assert np.abs(product - np.eye(2)).max() < 1e-9


def test_gauge_invariance_of_class_order():
    cover = symbol_cover(2)
    base_order = class_order(pgl_cocycle_defect(cover), cover)
    target = cover.pairs[5]
    zeta = np.exp(2j * np.pi / 4)
    new_pairs = [
        (i, j, cover.transitions[(i, j)] * (zeta if (i, j) == target else 1.0))
        for (i, j) in cover.pairs
    ]
    moved = make_cover(4, new_pairs, cover.triples, cover.quadruples, m=4)
    defect = pgl_cocycle_defect(moved)
    assert is_2cocycle(defect, moved)
    assert class_order(defect, moved) == base_order


# ---------------------------------------------------------------- reduction


def test_reduction_local_cover():
    rng = np.random.default_rng(17)
    hs = [
        np.kron(
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)),
        )
        for _ in range(4)
    ]
    cover = vertex_gauge_cover(4, 4, hs, m=2)
    report = check_reduction(cover, 2, 2)
    assert report.reducible
    assert report.torsion == 2
    defect = pgl_cocycle_defect(cover)
    assert report.torsion % class_order(defect, cover) == 0


def test_reduction_symbol_cover_fails():
    report = check_reduction(symbol_cover(2), 2, 2)
    assert not report.reducible
    assert report.torsion == 2
    assert any(not v for v in report.pair_verdicts.values())
    assert any(v for v in report.pair_verdicts.values())  # identity overlaps stay local


def test_reduction_single_chart_cover():
    cover = make_cover(4, [], chart_count=1)
    report = check_reduction(cover, 2, 2)
    assert report.reducible


def test_torsion_bound():
    assert torsion_bound((2, 2)) == 2
    assert torsion_bound((3, 3)) == 3
    assert torsion_bound((5, 5)) == 5
    assert torsion_bound((2, 3)) == 6
    with pytest.raises(OutOfRange):
        torsion_bound((1, 2))


def test_symbol_cover_bounds():
    with pytest.raises(OutOfRange):
        symbol_cover(1)
    with pytest.raises(OutOfRange):
        symbol_cover(6)


def test_symbol_cover_lifts_are_special():
    cover = symbol_cover(2)
    for pair in cover.pairs[:8]:
        assert abs(np.linalg.det(cover.transitions[pair]) - 1.0) < 1e-9


def test_seam_reassignment_shifts_defect_by_coboundary():
    # same torus nerve, but the 2-pi branch jump placed on the (0,1) seam
    # instead of (2,0): the defect differs by a coboundary, the class does not
    from itertools import combinations

    from egeo.gluing_sim import det_normalize

    m = 4
    w = weyl_ops(m)
    x_inv = np.linalg.inv(w.x_op)
    charts = [(a, b) for a in range(3) for b in range(3)]

    def jump(x, y):
        if (x, y) == (0, 1):
            return 1
        if (x, y) == (1, 0):
            return -1
        return 0

    def lift_for(i, j):
        (ai, bi), (aj, bj) = charts[i], charts[j]
        g = np.linalg.matrix_power(w.z_op, jump(ai, aj) % m) @ np.linalg.matrix_power(
            x_inv, jump(bi, bj) % m
        )
        return det_normalize(g)

    def in_nerve(ids):
        return len({charts[i][0] for i in ids}) <= 2 and len({charts[i][1] for i in ids}) <= 2

    pairs = [(i, j, lift_for(i, j)) for i in range(9) for j in range(i + 1, 9)]
    triples = [t for t in combinations(range(9), 3) if in_nerve(t)]
    quads = [q for q in combinations(range(9), 4) if in_nerve(q)]
    variant = make_cover(m, pairs, triples, quads, m=m, chart_count=9)
    validate_nerve(variant)

    reference = symbol_cover(2)
    d_ref = pgl_cocycle_defect(reference)
    d_var = pgl_cocycle_defect(variant)
    assert is_2cocycle(d_var, variant)
    assert class_order(d_var, variant) == class_order(d_ref, reference) == 4
    difference = Cocycle2(m, {t: (d_var.exponent(t) - d_ref.exponent(t)) % m for t in reference.triples})
    assert coboundary_witness(difference, reference) is not None


def test_weyl_transitions_appear_in_symbol_cover():
    # the clock and inverse-shift gauge elements show up across the seams
    cover = symbol_cover(2)
    w = weyl_ops(4)
    seen_z = seen_x = False
    from egeo import proj_equal

    for i, j in cover.pairs:
        for lift in (cover.lift(i, j), cover.lift(j, i)):
            if proj_equal(lift, w.z_op):
                seen_z = True
            if proj_equal(lift, np.linalg.inv(w.x_op)):
                seen_x = True
    assert seen_z and seen_x
