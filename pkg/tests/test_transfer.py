import itertools

import pytest

from cinfinity.algebra import Dgca, Element
from cinfinity.harrison import mc_check, normalized_check, shuffle_vanishing
from cinfinity.hodge import hodge_from_inner_product, hodge_from_table
from cinfinity.transfer import (check_cyclicity, check_symmetries, check_vanishing_diagonal,
                                m3_explicit, shuffle_report, transfer,
                                unitality_report)


def r2_model():
    """2-connected model: x, y of degree 2 killed in degree 4 by z₁, z₂, z₃."""
    return Dgca([("x", 2), ("y", 2), ("z1", 3), ("z2", 3), ("z3", 3)],
                {"z1": {("x", "x"): 1}, "z2": {("x", "y"): 1}, "z3": {("y", "y"): 1}},
                top_degree=6, name="R2")


@pytest.fixture(scope="module")
def r2_T():
    return transfer(hodge_from_inner_product(r2_model()), 4)


def idx(T, label):
    return T.H.labels.index(label)


def test_heisenberg_m3_aab(heis_T):
    T = heis_T
    a, b = idx(T, "a"), idx(T, "b")
    val = T.m_value(a, a, b)
    # π(d⁻(aa)·b) + π(a·d⁻(ab)) = π(ac) = ac
    assert val.terms() == {"a*c": 1}


def test_heisenberg_hand_homotopy_agrees(heis, heis_T):
    C = hodge_from_table(heis, {("a", "b"): {("c",): 1}})
    T = transfer(C, 4)
    assert T.H.labels == heis_T.H.labels
    for k in (3, 4):
        assert T.m[k].values == heis_T.m[k].values


def test_m3_explicit_matches_recursion(heis_T, fm_T):
    for T in (heis_T, fm_T):
        C = T.contraction
        A = C.algebra
        hs = [Element(A, v) for v in C.harmonic]
        deg1 = [h for h, d in enumerate(C.harmonic_deg) if d in (1, 2)][:8]
        for i, j, k in itertools.product(deg1, repeat=3):
            want = C.pi(T.hat[3].get((i, j, k), {}))
            assert m3_explicit(C, hs[i], hs[j], hs[k]).vec == want


def test_m3_explicit_needs_harmonic_inputs(heis, heis_C):
    c = heis["c"]
    with pytest.raises(ValueError):
        m3_explicit(heis_C, c, c, c)


def test_transfer_checks_heisenberg(heis_C, heis_T):
    T = heis_T
    assert mc_check(T.m) == []
    assert unitality_report(T) == []
    assert shuffle_report(T) == []
    assert check_cyclicity(heis_C, T) == []
    assert shuffle_vanishing(T.m[3]) == []
    assert normalized_check(T.m[3]) == []


def test_transfer_checks_fm8(fm_C, fm_T, fm_T_auto):
    for T in (fm_T, fm_T_auto):
        assert mc_check(T.m) == []
        assert unitality_report(T) == []
        assert shuffle_report(T) == []
        assert check_cyclicity(T.contraction, T) == []


def test_fm8_diagonal(fm_T):
    T = fm_T
    al = idx(T, "mu*mubar")
    for k in (3, 4):
        assert T.m[k](*(al,) * k) == {}
        assert not T.hat[k].get((al,) * k)


def test_arity_bound_and_contraction_checked(heis):
    C = hodge_from_table(heis, {("a", "b"): {("c",): 1}, ("c",): {(): 1}})
    with pytest.raises(ValueError):
        transfer(C, 3)
    with pytest.raises(ValueError):
        transfer(hodge_from_inner_product(heis), 1)


def test_cohomology_algebra_is_poincare(heis_T):
    H = heis_T.H
    assert H.has_pairing and H.top_degree == 3
    assert H.d.is_zero()


def test_heisenberg_symmetries_r_odd(heis_T5):
    assert check_symmetries(heis_T5, 1) == []
    assert check_vanishing_diagonal(heis_T5, 1) == []


def test_r_even_symmetries(r2_T):
    T = r2_T
    assert not T.m[3].is_zero() and not T.m[4].is_zero()
    assert mc_check(T.m) == []
    assert check_symmetries(T, 2) == []
    assert check_vanishing_diagonal(T, 2) == []


def test_connectivity_required(heis_T):
    with pytest.raises(ValueError):
        check_symmetries(heis_T, 2)


def test_symmetry_check_detects_tampering(heis_T):
    T = transfer(heis_T.contraction, 3)
    a, b = idx(T, "a"), idx(T, "b")
    ac = T.contraction.harmonic[idx(T, "a*c")]
    # m̂₃(a,a,b) = m̂₃(b,a,a) must hold for r odd; break one side
    T.hat[3][(b, a, a)] = {p: -c for p, c in T.hat[3].get((a, a, b), ac).items()}
    T.hat[3][(a, a, b)] = dict(ac)
    assert check_symmetries(T, 1) != []
