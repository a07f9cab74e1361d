"""Hodge homotopies: axioms, Laplacian construction, harmonic projection."""
from __future__ import annotations

from typing import Mapping, Sequence


from .algebra import AlgebraError, Dgca, Element, LinearMap, koszul_sort
from .linalg import ONE, ZERO, Echelon, inverse, reduced_basis, vadd


class ContractionData:
    """A Hodge homotopy d⁻ on a Dgca with its projection and harmonic basis.

    The harmonic basis is the fully reduced echelon basis of im π_H, so the
    coordinate of a harmonic vector along ``harmonic[h]`` is simply its
    coefficient at the pivot monomial ``pivots[h]``.
    """

    def __init__(self, alg: Dgca, d_minus: LinearMap | Mapping, name: str = ""):
        if not isinstance(d_minus, LinearMap):
            d_minus = LinearMap(alg, -1, d_minus)
        self.algebra = alg
        self.name = name
        self.d_minus = d_minus
        d = alg.d
        self.pi_H = LinearMap.identity(alg) - d.compose(d_minus) - d_minus.compose(d)
        harm = []
        for k in alg.degrees():
            harm += reduced_basis(self.pi_H.col(i) for i in alg.degree_indices(k))
        self.harmonic = harm
        self.pivots = [min(v) for v in harm]
        self.harmonic_deg = [alg.deg[p] for p in self.pivots]
        self._pivot_pos = {p: h for h, p in enumerate(self.pivots)}

    @property
    def include(self) -> dict[int, dict]:
        """Harmonic index -> ambient vector."""
        return {h: dict(v) for h, v in enumerate(self.harmonic)}

    def harmonic_basis(self) -> dict[int, list[Element]]:
        out: dict[int, list[Element]] = {}
        for h, v in enumerate(self.harmonic):
            out.setdefault(self.harmonic_deg[h], []).append(Element(self.algebra, v))
        return out

    def harmonic_name(self, h: int) -> str:
        v = self.harmonic[h]
        if len(v) == 1:
            return self.algebra.mono_name(self.pivots[h])
        return "(" + repr(Element(self.algebra, v)) + ")"

    def dm(self, v: Mapping) -> dict:
        return self.d_minus.apply(v)

    def pi(self, v: Mapping) -> dict:
        return self.pi_H.apply(v)

    def coords(self, v: Mapping) -> dict:
        """Harmonic coordinates of π_H(v)."""
        w = self.pi_H.apply(v)
        return {h: w[p] for p, h in self._pivot_pos.items() if p in w}

    def harmonic_coords(self, v: Mapping) -> dict:
        """Coordinates of a vector already known to be harmonic."""
        return {self._pivot_pos[p]: c for p, c in v.items() if p in self._pivot_pos}

    def from_coords(self, c: Mapping) -> dict:
        out: dict = {}
        for h, a in c.items():
            vadd(out, self.harmonic[h], a)
        return out

    @property
    def unit_index(self) -> int:
        return 0


def harmonic_projection(C: ContractionData, x: Element) -> Element:
    return Element(C.algebra, C.pi(x.vec))


def _witness(alg, i):
    return alg.mono_name(i)


def validate_hodge(C: ContractionData) -> list[str]:
    """Check the Hodge homotopy identities on every basis monomial."""
    alg = C.algebra
    d, h, pi = alg.d, C.d_minus, C.pi_H
    report = []

    def check(label, f):
        for i in range(alg.dim):
            if f(i):
                report.append(f"{label} fails at {_witness(alg, i)}")
                return

    for i, v in h.cols.items():
        if any(alg.deg[t] != alg.deg[i] - 1 for t in v):
            report.append(f"d⁻ is not of degree -1 at {_witness(alg, i)}")
            break
    check("d⁻d⁻ = 0", lambda i: h.apply(h.col(i)))
    check("d⁻dd⁻ = d⁻", lambda i: vadd(h.apply(d.apply(h.col(i))), h.col(i), -ONE))
    check("dd⁻d = d", lambda i: vadd(d.apply(h.apply(d.col(i))), d.col(i), -ONE))
    check("d π_H = 0", lambda i: d.apply(pi.col(i)))
    check("π_H d = 0", lambda i: pi.apply(d.col(i)))
    check("d⁻ π_H = 0", lambda i: h.apply(pi.col(i)))
    check("π_H d⁻ = 0", lambda i: pi.apply(h.col(i)))
    check("π_H² = π_H", lambda i: vadd(pi.apply(pi.col(i)), pi.col(i), -ONE))
    if h.col(0):
        report.append("d⁻(1) ≠ 0")
    if alg.has_pairing:
        report += orthogonality_report(C)
    return report


def orthogonality_report(C: ContractionData) -> list[str]:
    """⟨im d⁻, im d⁻⟩ = 0 and ⟨im π_H, im d⁻⟩ = 0 over complementary degrees."""
    alg = C.algebra
    if not alg.has_pairing:
        raise AlgebraError("orthogonality needs a fundamental functional")
    n = alg.top_degree
    out = []
    imh = {}
    for i, v in C.d_minus.cols.items():
        imh.setdefault(alg.deg[i] - 1, []).append((i, v))
    for k, cols in imh.items():
        for i, u in cols:
            for j, v in imh.get(n - k, []):
                if alg.pair_vec(u, v):
                    out.append(f"⟨d⁻{_witness(alg, i)}, d⁻{_witness(alg, j)}⟩ ≠ 0")
                    return out
    for hidx, u in enumerate(C.harmonic):
        k = C.harmonic_deg[hidx]
        for j, v in imh.get(n - k, []):
            if alg.pair_vec(u, v):
                out.append(f"⟨{C.harmonic_name(hidx)}, d⁻{_witness(alg, j)}⟩ ≠ 0")
                return out
    return out


def hodge_from_inner_product(alg: Dgca) -> ContractionData:
    """Hodge homotopy from the inner product making monomials orthonormal.

    d⁻ is the Moore–Penrose inverse of d: on im d it inverts d with values in
    im d*, and it vanishes on (im d)^⊥ = ker d*.  This is the restriction of
    Δ⁻¹d* described by the Laplacian construction.
    """
    if alg.degree_indices(0) != [0]:
        raise AlgebraError("degree-0 component must be spanned by the unit")
    d = alg.d
    cols: dict[int, dict] = {}
    for k in alg.degrees():
        src = alg.degree_indices(k)
        tgt = alg.degree_indices(k + 1)
        if not src or not tgt:
            continue
        # d* e_t = sum_i <d e_i, e_t> e_i
        dstar = {t: {} for t in tgt}
        for i in src:
            for t, a in d.col(i).items():
                dstar[t][i] = a
        ech = Echelon()
        W = []
        for t in tgt:
            if dstar[t] and ech.add(dstar[t]):
                W.append(dstar[t])
        if not W:
            continue
        U = [d.apply(w) for w in W]
        G = [[sum((a * v.get(t, ZERO) for t, a in u.items()), ZERO) for v in U] for u in U]
        Ginv = inverse(G)
        r = len(W)
        for t in tgt:
            b = [u.get(t, ZERO) for u in U]
            if not any(b):
                continue
            c = [sum((Ginv[i][j] * b[j] for j in range(r) if b[j]), ZERO) for i in range(r)]
            out: dict = {}
            for ci, w in zip(c, W):
                vadd(out, w, ci)
            if out:
                cols[t] = out
    return ContractionData(alg, LinearMap(alg, -1, cols), name="laplacian")


def hodge_from_table(alg: Dgca, table: Mapping) -> ContractionData:
    """User-supplied d⁻ given as {monomial word: terms}."""
    cols = {}
    for w, val in table.items():
        word = alg._word(w)
        r = koszul_sort(word, alg.gen_deg)
        if r is None:
            raise AlgebraError(f"d⁻ given on a vanishing monomial {w!r}")
        v = alg._terms_to_vec(val)
        if r[1] < 0:
            v = {k: -c for k, c in v.items()}
        cols[alg.index[r[0]]] = v
    return ContractionData(alg, LinearMap(alg, -1, cols), name="given")


def tensor_homotopy(alg: Dgca, groups: Sequence[Sequence[str]]) -> ContractionData:
    """Hodge homotopy of a free algebra split as a tensor product of sub-algebras.

    ``groups`` partitions the generators so that each differential stays in
    its group; on each factor the Laplacian homotopy is used and factors are
    combined by h(a·x) = h₁(a)·x + (−1)^{|a|} π₁(a)·h₂(x).
    """
    names = [g.name for g in alg.generators]
    flat = [n for g in groups for n in g]
    if sorted(flat) != sorted(names):
        raise AlgebraError("groups must partition the generators")
    factors = []
    for grp in groups:
        gens = [(n, alg.generators[alg.gen_index[n]].degree) for n in grp]
        diff = {}
        for n in grp:
            col = alg.d.col(alg.index[(alg.gen_index[n],)])
            terms = {}
            for t, c in col.items():
                word = tuple(alg.generators[g].name for g in alg.basis[t])
                if not set(word) <= set(grp):
                    raise AlgebraError(f"d({n}) leaves its tensor factor")
                terms[word] = c
            diff[n] = terms
        sub = Dgca(gens, diff, top_degree=alg.top_degree, cap=alg.cap)
        factors.append((sub, hodge_from_inner_product(sub)))

    def split(word):
        """Split a canonical ambient monomial into per-factor words with the sign."""
        parts = []
        order = []
        for sub, _ in factors:
            part = tuple(g for g in word if alg.generators[g].name in sub.gen_index)
            parts.append(part)
            order += part
        s = koszul_sort(order, alg.gen_deg)
        # sign to go from the canonical word to the factor-ordered word
        return parts, s[1]

    def sub_vec(sub, part):
        return {sub.index[tuple(sub.gen_index[alg.generators[g].name] for g in part)]: ONE}

    def to_ambient(sub, v):
        out = {}
        for i, c in v.items():
            word = tuple(alg.gen_index[sub.generators[g].name] for g in sub.basis[i])
            out[alg.index[word]] = c
        return out

    cols = {}
    for idx, word in enumerate(alg.basis):
        parts, sign = split(word)
        # h on a product x1 x2 ... xr of factor elements
        total: dict = {}
        prefix_pi = {0: ONE}  # ambient vector: π(x1)...π(x_{j-1})
        prefix_deg = 0
        for j, (sub, C) in enumerate(factors):
            xj = sub_vec(sub, parts[j])
            hx = C.dm(xj)
            if hx:
                term = alg.mul_vec(prefix_pi, to_ambient(sub, hx))
                for sub2, part2 in zip([f[0] for f in factors[j + 1:]], parts[j + 1:]):
                    term = alg.mul_vec(term, to_ambient(sub2, sub_vec(sub2, part2)))
                vadd(total, term, -ONE if prefix_deg & 1 else ONE)
            pj = C.pi(xj)
            if not pj:
                break
            prefix_pi = alg.mul_vec(prefix_pi, to_ambient(sub, pj))
            prefix_deg += sum(alg.gen_deg[g] for g in parts[j])
        if total:
            cols[idx] = {k: c * sign for k, c in total.items()}
    return ContractionData(alg, LinearMap(alg, -1, cols), name="tensor")
