import pytest

from cinfinity.algebra import AlgebraError, Dgca
from cinfinity.hodge import (ContractionData, harmonic_projection, hodge_from_inner_product,
                             hodge_from_table, orthogonality_report,
                             validate_hodge)
from cinfinity.linalg import Q


def test_heisenberg_hand_homotopy(heis):
    C = hodge_from_table(heis, {("a", "b"): {("c",): 1}})
    assert validate_hodge(C) == []
    assert orthogonality_report(C) == []


def test_laplacian_heisenberg(heis, heis_C):
    assert validate_hodge(heis_C) == []
    assert heis_C.dm((heis["a"] * heis["b"]).vec) == heis["c"].vec
    names = sorted(heis_C.harmonic_name(h) for h in range(len(heis_C.harmonic)))
    assert names == sorted(["1", "a", "b", "a*c", "b*c", "a*b*c"])


def test_projection_kills_exact_and_coexact(heis, heis_C):
    assert harmonic_projection(heis_C, heis["c"]).is_zero()
    assert harmonic_projection(heis_C, heis["a"] * heis["b"]).is_zero()
    ac = heis["a"] * heis["c"]
    assert harmonic_projection(heis_C, ac) == ac


def test_formal_algebra_has_zero_homotopy(three_gen):
    C = hodge_from_inner_product(three_gen)
    assert C.d_minus.is_zero()
    assert validate_hodge(C) == []
    for i in range(three_gen.dim):
        assert C.pi({i: 1}) == {i: 1}


def test_spurious_value_detected(heis):
    # d⁻(c) = 1 makes (d⁻)²(ab) = 1
    C = hodge_from_table(heis, {("a", "b"): {("c",): 1}, ("c",): {(): 1}})
    rep = validate_hodge(C)
    assert any("d⁻d⁻ = 0" in r for r in rep)


def test_wrong_degree_reported(heis):
    C = ContractionData(heis, {4: {0: Q(1)}})  # ab ↦ 1 has degree −2
    assert any("degree" in r for r in validate_hodge(C))


def test_orthogonality_heisenberg(heis, heis_C):
    c = heis["c"].vec
    assert heis.pair_vec(c, c) == 0
    for x in ("a", "b"):
        assert heis.pair_vec((heis[x] * heis["c"]).vec, c) == 0
    assert orthogonality_report(heis_C) == []


def test_skewed_homotopy_breaks_orthogonality(heis):
    # ab ↦ c + a keeps the algebraic identities but ⟨bc, d⁻(ab)⟩ ≠ 0
    C = hodge_from_table(heis, {("a", "b"): {("c",): 1, ("a",): 1}})
    assert validate_hodge(C) == [r for r in validate_hodge(C) if r.startswith("⟨")]
    assert orthogonality_report(C) != []


def test_orthogonality_needs_pairing(three_gen):
    C = hodge_from_inner_product(three_gen)
    with pytest.raises(AlgebraError):
        orthogonality_report(C)


def test_fm8_degree_two_harmonics(fm, fm_C, fm_C_auto):
    for C in (fm_C, fm_C_auto):
        assert validate_hodge(C) == []
        h2 = [v for h, v in enumerate(C.harmonic) if C.harmonic_deg[h] == 2]
        span = {tuple(sorted(v.items())) for v in h2}
        for word in (("mu", "mubar"), ("nu", "etabar"), ("nubar", "eta")):
            v = fm.element({word: 1}).vec
            # harmonic and in the chosen harmonic space
            assert C.pi(v) == v
        assert len(h2) == len(span)


def test_tensor_homotopy_matches_on_mu_nu_multiples(fm, fm_C):
    # on μν·X the homotopy is θ·X
    x = fm["eta"] * fm["nubar"]
    v = (fm["mu"] * fm["nu"] * x).vec
    assert fm_C.dm(v) == (fm["theta"] * x).vec


def test_laplacian_on_zero_products():
    A = Dgca([("t", 2), ("s", 2)], table={}, top_degree=2)
    C = hodge_from_inner_product(A)
    assert C.d_minus.is_zero()
