"""Built-in algebras: Heisenberg, the FM8 model and synthetic Poincaré GCAs."""
from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from .algebra import AlgebraError, Dgca
from .linalg import Q
from .specfile import AlgebraSpec, parse_spec

HEISENBERG_SPEC = """\
name: heisenberg
generators: a:1, b:1, c:1
r: 1
[differential]
c: a*b
[pairing]
top_degree: 3
orientation: a*b*c
scale: 1
"""


def heisenberg_spec() -> AlgebraSpec:
    return parse_spec(HEISENBERG_SPEC)


def heisenberg() -> Dgca:
    from .specfile import build_algebra
    return build_algebra(heisenberg_spec())


FM8_GENERATORS = ["mu", "mubar", "nu", "nubar", "eta", "etabar", "theta", "thetabar"]
FM8_GROUPS = [["mu", "nu", "theta"], ["mubar", "nubar", "thetabar"], ["eta", "etabar"]]


def _fm8_base() -> str:
    gens = ", ".join(f"{g}:1" for g in FM8_GENERATORS)
    return (f"name: fm8\ngenerators: {gens}\nr: 1\n"
            "[differential]\ntheta: mu*nu\nthetabar: mubar*nubar\n"
            "[pairing]\ntop_degree: 8\n"
            f"orientation: {'*'.join(FM8_GENERATORS)}\nscale: 1\n")


_FM8_CACHE: dict = {}


def fm8_spec() -> AlgebraSpec:
    """FM8 spec carrying the tensor-product homotopy as an explicit d⁻ table."""
    if "spec" not in _FM8_CACHE:
        from .hodge import tensor_homotopy
        from .specfile import build_algebra, spec_from_algebra
        base = parse_spec(_fm8_base())
        A = build_algebra(base)
        C = tensor_homotopy(A, FM8_GROUPS)
        spec = spec_from_algebra(A, r=1, contraction=C)
        spec.name = "fm8"
        _FM8_CACHE["spec"] = spec
    return _FM8_CACHE["spec"]


def fm8() -> Dgca:
    from .specfile import build_algebra
    return build_algebra(fm8_spec())


# ------------------------------------------------------- synthetic algebras

def _perm_sign(order: Sequence[int], degs: Sequence[int]) -> int:
    """Koszul sign of sorting ``order`` (a permutation of positions)."""
    s = 1
    o = list(order)
    for i in range(len(o)):
        for j in range(i + 1, len(o)):
            if o[i] > o[j] and degs[o[i]] * degs[o[j]] % 2:
                s = -s
    return s


def cubic_poincare(low: Sequence[tuple[str, int]], n: int, cubic: Mapping, name: str = "P") -> Dgca:
    """Poincaré GCA of degree n generated by a graded-symmetric cubic form.

    ``low`` lists basis elements a (degree < n); each gets a dual ``Da`` of
    degree n − |a| with ∫ a·Da = 1, and the top class is ``w``.  ``cubic``
    maps name triples to ∫ a·b·c; the remaining values follow by graded
    symmetry.  Products of two low elements are the duals dictated by the
    cubic form, a·Da is the top class, all other products of positive
    elements vanish.  Every triple product of low elements is therefore top.
    """
    names = [a for a, _ in low]
    deg = dict(low)
    if len(set(names)) != len(names):
        raise AlgebraError("duplicate basis names")
    gens = list(low) + [(f"D{a}", n - d) for a, d in low] + [("w", n)]
    C: dict = {}
    for (a, b, c), v in cubic.items():
        if deg[a] + deg[b] + deg[c] != n:
            raise AlgebraError(f"cubic term {(a, b, c)} is not of degree {n}")
        word = (a, b, c)
        ds = [deg[x] for x in word]
        for perm in itertools.permutations(range(3)):
            key = tuple(word[p] for p in perm)
            val = Q(v) * _perm_sign(perm, ds)
            if key in C and C[key] != val:
                raise AlgebraError(f"cubic form is not graded symmetric at {key}")
            C[key] = val
    table: dict = {}

    def put(x, y, term, c):
        if c:
            d = table.setdefault((x, y), {})
            d[(term,)] = d.get((term,), 0) + c

    for a in names:
        for b in names:
            for z in names:
                v = C.get((a, b, z))
                if v:
                    # ∫ Dz·z = (−1)^{|z|(n−|z|)}
                    put(a, b, f"D{z}", v * (-1) ** (deg[z] * (n - deg[z])))
        put(a, f"D{a}", "w", 1)
        put(f"D{a}", a, "w", (-1) ** (deg[a] * (n - deg[a])))
    return Dgca(gens, table=table, top_degree=n, orientation="w", name=name)


def kn_fixture(r: int, g: Sequence[Sequence], name: str = "KN") -> Dgca:
    """Degree 4r−1 Poincaré GCA with H^r = ⟨e1..eb⟩ and Lefschetz element p.

    ∫ p·e_i·e_j = g_ij, so ⟨−,−⟩_p = g.  Requires r even (g symmetric) or
    r odd (g antisymmetric).
    """
    b = len(g)
    low = [(f"e{i + 1}", r) for i in range(b)] + [("p", 2 * r - 1)]
    cubic = {}
    for i in range(b):
        for j in range(i, b):
            if g[i][j]:
                cubic[(f"e{i + 1}", f"e{j + 1}", "p")] = g[i][j]
    return cubic_poincare(low, 4 * r - 1, cubic, name=name)


def lefschetz_4r_fixture(r: int, g: Sequence[Sequence], extra: Sequence[tuple[str, int]] = (),
                         cubic: Mapping | None = None, name: str = "L4r") -> Dgca:
    """Degree 4r Poincaré GCA with H^r = ⟨e1,e2⟩, Lefschetz element f ∈ H^{2r}
    (∫ f·e_i·e_j = g_ij) and optional extra low elements with cubic terms."""
    b = len(g)
    low = [(f"e{i + 1}", r) for i in range(b)] + [("f", 2 * r)] + list(extra)
    cub = dict(cubic or {})
    for i in range(b):
        for j in range(i, b):
            if g[i][j]:
                cub[(f"e{i + 1}", f"e{j + 1}", "f")] = g[i][j]
    return cubic_poincare(low, 4 * r, cub, name=name)
