from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cinfinity.algebra import (AlgebraError, Dgca, apply_d, betti, canonicalize,
                               cohomology_basis, integrate, koszul_sort, multiply, pair)
from cinfinity.linalg import Q, inverse, matvec, qstr, rank, solve_exact


# ------------------------------------------------------------ scalars

def test_q_normalizes_and_prints():
    assert Q("6/4") == Fraction(3, 2)
    assert Q(-0) == 0
    assert qstr(Q("-6/4")) == "-3/2"
    assert qstr(Q(2)) == "2/1"


# ----------------------------------------------------------- products

def test_koszul_sort_signs():
    assert koszul_sort([1, 0], [1, 1]) == ((0, 1), -1)
    assert koszul_sort([1, 0], [2, 1]) == ((0, 1), 1)
    assert koszul_sort([0, 0], [1]) is None
    assert koszul_sort([0, 0], [2]) == ((0, 0), 1)


def test_unit_and_koszul(heis):
    a, b = heis["a"], heis["b"]
    one = heis.one()
    assert multiply(one, a) == a
    assert multiply(a, b) == heis.element({("a", "b"): 1})
    assert multiply(b, a) == -multiply(a, b)
    assert multiply(a, a).is_zero()


def test_fm8_four_factor_word(fm):
    x = fm["mu"] * fm["mubar"]
    y = fm["nu"] * fm["etabar"]
    # sorting mu mubar nu etabar is already in generator order
    assert canonicalize(fm, ["mu", "mubar", "nu", "etabar"])[1] == 1
    assert multiply(x, y) == fm.element({("mu", "mubar", "nu", "etabar"): 1})
    # nu mu mubar etabar needs two odd swaps
    r = canonicalize(fm, ["nu", "mu", "mubar", "etabar"])
    assert r[1] == 1
    r = canonicalize(fm, ["mubar", "mu", "nu", "etabar"])
    assert r[1] == -1


def test_fm8_differential(fm):
    assert apply_d(fm, fm["theta"]) == fm["mu"] * fm["nu"]
    assert apply_d(fm, fm["mu"]).is_zero()
    tt = fm["theta"] * fm["thetabar"]
    want = fm["mu"] * fm["nu"] * fm["thetabar"] - fm["theta"] * fm["mubar"] * fm["nubar"]
    assert apply_d(fm, tt) == want


def test_dd_zero_on_basis(fm):
    for i in range(fm.dim):
        assert not fm.d_vec(fm.d_vec({i: 1}))


def test_heisenberg_pairing(heis):
    a, b, c = heis["a"], heis["b"], heis["c"]
    assert pair(heis, a, b * c) == 1
    assert integrate(heis, a * b * c) == 1
    assert pair(heis, a, b) == 0


def test_pairing_needs_functional(three_gen):
    with pytest.raises(AlgebraError):
        pair(three_gen, three_gen["x"], three_gen["y"])


def test_heisenberg_cohomology(heis):
    h1 = cohomology_basis(heis, 1)
    assert [r.terms() for r in h1.representatives] == [{"a": 1}, {"b": 1}]
    h2 = cohomology_basis(heis, 2)
    assert [r.terms() for r in h2.representatives] == [{"a*c": 1}, {"b*c": 1}]
    # ab = dc is exact, so it has zero coordinates
    assert h2.coordinates(heis["a"] * heis["b"]) == [0, 0]
    assert h2.coordinates(heis["a"] * heis["c"] + heis["a"] * heis["b"]) == [1, 0]
    assert betti(heis) == {0: 1, 1: 2, 2: 2, 3: 1}


def test_coordinates_reject_non_closed(heis):
    with pytest.raises(ValueError):
        cohomology_basis(heis, 1).coordinates(heis["c"])


def test_formal_cohomology_is_everything(three_gen):
    for k in three_gen.degrees():
        assert len(cohomology_basis(three_gen, k).representatives) == len(three_gen.degree_indices(k))


def test_fm8_betti(fm):
    b = betti(fm)
    assert b[0] == 1 and b[1] == 6 and b[8] == 1
    assert all(b[k] == b[8 - k] for k in range(9))


def test_bad_table_rejected():
    with pytest.raises(AlgebraError):
        # x·y = w but y·x = w breaks graded commutativity for odd x, y
        Dgca([("x", 1), ("y", 1), ("w", 2)], table={("x", "y"): {("w",): 1}, ("y", "x"): {("w",): 1}},
             top_degree=2)


def test_d_squared_rejected():
    with pytest.raises(AlgebraError):
        # da = b, db = c gives d²a = c ≠ 0
        Dgca([("a", 1), ("b", 2), ("c", 3)], {"a": {("b",): 1}, "b": {("c",): 1}}, top_degree=6)


# ------------------------------------------------------------ solve_exact

def test_solve_identity_and_zero():
    x, ker = solve_exact([[1, 0], [0, 1]], [3, -2])
    assert x == {0: 3, 1: -2} and ker == []
    x, ker = solve_exact([[0, 0], [0, 0]], [0, 0])
    assert x == {} and len(ker) == 2


def test_solve_two_by_two():
    A = [[2, Q("1/3")], [-1, 4]]
    b = [Q(5), Q("7/2")]
    x, ker = solve_exact(A, b)
    assert ker == []
    for row, rhs in zip(A, b):
        assert sum(Q(a) * x.get(j, 0) for j, a in enumerate(row)) == rhs


def test_solve_inconsistent_and_shape():
    x, _ = solve_exact([[1, 1], [2, 2]], [1, 3])
    assert x is None
    with pytest.raises(ValueError):
        solve_exact([[1, 0], [0, 1]], [1, 2, 3])
    with pytest.raises(ValueError):
        solve_exact([[1, 0], [1]], [1, 2])


def test_inverse_roundtrip():
    M = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    Mi = inverse(M)
    for i in range(3):
        for j in range(3):
            assert sum(Q(M[i][k]) * Mi[k][j] for k in range(3)) == (1 if i == j else 0)


ints = st.integers(-5, 5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(ints, min_size=4, max_size=4), min_size=1, max_size=4),
       st.lists(ints, min_size=4, max_size=4))
def test_solve_exact_property(rows, xs):
    """Random consistent systems: the returned x solves them and the kernel is annihilated."""
    A = [{j: Q(a) for j, a in enumerate(r) if a} for r in rows]
    x0 = {j: Q(v) for j, v in enumerate(xs) if v}
    b = matvec(A, x0)
    x, ker = solve_exact(A, b, 4)
    assert x is not None
    assert matvec(A, x) == {i: c for i, c in b.items() if c}
    for k in ker:
        assert not matvec(A, k)
    assert len(ker) == 4 - rank(A)


# ------------------------------------------------------------ properties

def _basis_elements(A):
    return [A.basis_element(i) for i in range(A.dim)]


def test_commutativity_and_associativity(three_gen, heis):
    for A in (three_gen, heis):
        es = _basis_elements(A)
        for x in es:
            for y in es:
                s = (-1) ** ((x.degree * y.degree) % 2)
                assert x * y == s * (y * x)
                for z in es:
                    assert (x * y) * z == x * (y * z)


@st.composite
def fm_elements(draw, degree):
    from cinfinity.fixtures import fm8
    A = fm8()
    idx = A.degree_indices(degree)
    terms = draw(st.dictionaries(st.sampled_from(idx), st.integers(-3, 3), max_size=3))
    return A, {i: Q(c) for i, c in terms.items() if c}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.data())
def test_leibniz_and_adjointness(p, data):
    A, u = data.draw(fm_elements(p))
    _, v = data.draw(fm_elements(7 - p))
    x, y = A.element(), A.element()
    x.vec.update(u)
    y.vec.update(v)
    # d(xy) = dx·y + (−1)^{|x|} x·dy
    lhs = apply_d(A, x * y)
    rhs = apply_d(A, x) * y + (-1) ** p * (x * apply_d(A, y))
    assert lhs == rhs
    # ⟨dx, y⟩ + (−1)^{|x|}⟨x, dy⟩ = 0
    assert pair(A, apply_d(A, x), y) + (-1) ** p * pair(A, x, apply_d(A, y)) == 0


def test_pairing_graded_symmetric(fm):
    for p in range(9):
        for i in fm.degree_indices(p):
            for j in fm.degree_indices(8 - p):
                assert fm.pair_basis(i, j) == (-1) ** (p * (8 - p)) * fm.pair_basis(j, i)
