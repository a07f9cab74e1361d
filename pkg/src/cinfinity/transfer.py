"""Homotopy transfer of the product to the harmonic subspace.

m̂₂(α,β) = αβ and for k ≥ 3

    m̂_k(α₁..α_k) = (−1)^{k−1} d⁻m̂_{k−1}(α₁..α_{k−1})·α_k
                 − (−1)^{k|α₁|} α₁·d⁻m̂_{k−1}(α₂..α_k)
                 − Σ_{i=2}^{k−2} (−1)^ν d⁻m̂_i(α₁..α_i)·d⁻m̂_{k−i}(α_{i+1}..α_k),

with ν = i + (k−i−1)(|α₁|+…+|α_i|), and m_k = π_H∘m̂_k.  Values are computed
by pushing the nonzero entries of d⁻m̂_j forward, so only tuples with a
nonzero value are ever touched.
"""
from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from gmpy2 import mpq

from .algebra import Dgca, Element
from .harrison import CInfinity, Cochain, cyclicity_report, normalized_check, shuffle_vanishing
from .hodge import ContractionData, validate_hodge
from .linalg import ONE, vadd


def _gen_name(C: ContractionData, h: int) -> str:
    v = C.harmonic[h]
    if len(v) == 1 and v[C.pivots[h]] == 1:
        return C.algebra.mono_name(C.pivots[h]).replace("*", "_")
    return f"h{h}"


def cohomology_algebra(C: ContractionData) -> Dgca:
    """The harmonic space as a table-mode algebra with the induced product.

    Basis index h of the result is harmonic basis element h of C.
    """
    A = C.algebra
    n = len(C.harmonic)
    names = [_gen_name(C, h) for h in range(n)]
    gens = [(names[h], C.harmonic_deg[h]) for h in range(1, n)]
    table = {}
    for i in range(1, n):
        for j in range(1, n):
            if C.harmonic_deg[i] + C.harmonic_deg[j] > A.top_degree:
                continue
            c = C.coords(A.mul_vec(C.harmonic[i], C.harmonic[j]))
            if c:
                table[(names[i], names[j])] = {(names[h],): a for h, a in c.items()}
    orientation = None
    scale = 1
    if A.has_pairing:
        top = [h for h in range(n) if C.harmonic_deg[h] == A.top_degree]
        if len(top) == 1:
            orientation = names[top[0]]
            scale = A.integrate_vec(C.harmonic[top[0]])
    H = Dgca(gens, table=table, top_degree=A.top_degree if n > 1 else 0,
             orientation=orientation, scale=scale, name=f"H({A.name})", validate=False)
    H.labels = [C.harmonic_name(h) for h in range(n)]
    return H


class TransferResult:
    """Values of m̂_k (ambient) and m_k (harmonic coordinates) up to arity K."""

    def __init__(self, C: ContractionData, K: int, hat: dict, D: dict, H: Dgca):
        self.contraction = C
        self.arity_max = K
        self.hat = hat          # k -> {tuple: ambient vector}
        self.dminus_hat = D     # k -> {tuple: d⁻ m̂_k(tuple)}
        self.H = H
        comps = {}
        for k in range(3, K + 1):
            vals = {}
            for t, v in hat[k].items():
                c = C.coords(v)
                if c:
                    vals[t] = c
            comps[k] = Cochain(H, k, 2 - k, vals)
        m2 = {}
        for t, v in hat[2].items():
            c = C.coords(v)
            if c:
                m2[t] = c
        self.m2 = Cochain(H, 2, 0, m2)
        self.m = CInfinity(H, comps, K)
        self.flags = {"unital": "not-checked", "cyclic": "not-checked"}

    def hat_m(self, *t) -> Element:
        return Element(self.contraction.algebra, self.hat[len(t)].get(tuple(t), {}))

    def m_value(self, *t) -> Element:
        """m_k(t) as a harmonic element of the ambient algebra."""
        k = len(t)
        if k == 2:
            vals = self.m2.values
        else:
            vals = self.m[k].values
        return Element(self.contraction.algebra, self.contraction.from_coords(vals.get(tuple(t), {})))


def transfer(C: ContractionData, K: int, check: bool = True) -> TransferResult:
    if K < 2:
        raise ValueError("arity bound must be at least 2")
    if check:
        rep = [r for r in validate_hodge(C) if not r.startswith("⟨")]
        if rep:
            raise ValueError("invalid contraction data: " + "; ".join(rep))
    A = C.algebra
    hv = C.harmonic
    hd = C.harmonic_deg
    N = len(hv)
    mul = A.mul_vec
    hat: dict[int, dict] = {2: {}}
    D: dict[int, dict] = {}
    for i in range(N):
        for j in range(N):
            p = mul(hv[i], hv[j])
            if p:
                hat[2][(i, j)] = p
    D[2] = {t: w for t, v in hat[2].items() if (w := C.dm(v))}
    for k in range(3, K + 1):
        acc: dict = {}
        sA = -ONE if (k - 1) & 1 else ONE
        for s, v in D[k - 1].items():
            for j in range(N):
                w = mul(v, hv[j])
                if w:
                    vadd(acc.setdefault(s + (j,), {}), w, sA)
            for i in range(N):
                w = mul(hv[i], v)
                if w:
                    sB = ONE if (k * hd[i]) & 1 else -ONE
                    vadd(acc.setdefault((i,) + s, {}), w, sB)
        for i in range(2, k - 1):
            for s1, v1 in D[i].items():
                deg1 = sum(hd[x] for x in s1)
                nu = i + (k - i - 1) * deg1
                sC = ONE if nu & 1 else -ONE
                for s2, v2 in D[k - i].items():
                    w = mul(v1, v2)
                    if w:
                        vadd(acc.setdefault(s1 + s2, {}), w, sC)
        hat[k] = {t: v for t, v in acc.items() if v}
        if k < K:
            D[k] = {t: w for t, v in hat[k].items() if (w := C.dm(v))}
    H = cohomology_algebra(C)
    return TransferResult(C, K, hat, D, H)


def m3_explicit(C: ContractionData, x: Element, y: Element, z: Element) -> Element:
    """π(d⁻(xy)·z) − (−1)^{|x|} π(x·d⁻(yz)) on harmonic inputs."""
    A = C.algebra
    for e in (x, y, z):
        if C.pi(e.vec) != e.vec:
            raise ValueError("inputs must be harmonic")
    dx = x.degree or 0
    a = A.mul_vec(C.dm(A.mul_vec(x.vec, y.vec)), z.vec)
    b = A.mul_vec(x.vec, C.dm(A.mul_vec(y.vec, z.vec)))
    out = dict(C.pi(a))
    vadd(out, C.pi(b), ONE if dx & 1 else -ONE)
    return Element(A, out)


def unitality_report(T: TransferResult) -> list[str]:
    rep = []
    for k in range(3, T.arity_max + 1):
        rep += [f"m_{k}: {r}" for r in normalized_check(T.m[k])]
    H = T.H
    for x in range(H.dim):
        if T.m2.values.get((0, x), {}) != {x: ONE} or T.m2.values.get((x, 0), {}) != {x: ONE}:
            rep.append(f"m_2(1, {x}) ≠ {x}")
            break
    T.flags["unital"] = "failed" if rep else "verified"
    return rep


def shuffle_report(T: TransferResult) -> list[str]:
    rep = []
    for k in range(3, T.arity_max + 1):
        rep += [f"m_{k}: {r}" for r in shuffle_vanishing(T.m[k])]
    return rep


def check_cyclicity(C: ContractionData, T: TransferResult) -> list[str]:
    from .hodge import orthogonality_report
    if not C.algebra.has_pairing:
        raise ValueError("cyclicity needs a fundamental functional")
    if orthogonality_report(C):
        raise ValueError("orthogonality fails; cyclicity is not claimed")
    rep = []
    for k in range(3, T.arity_max + 1):
        rep += [f"m_{k}: {r}" for r in cyclicity_report(T.m[k])]
    T.flags["cyclic"] = "failed" if rep else "verified"
    return rep


def _degree_r_indices(T: TransferResult, r: int) -> list[int]:
    return [h for h, d in enumerate(T.contraction.harmonic_deg) if d == r]


def connectivity_ok(C: ContractionData, r: int) -> bool:
    return all(not (0 < d < r) for d in C.harmonic_deg)


def check_vanishing_diagonal(T: TransferResult, r: int) -> list[str]:
    """m̂_k(α,…,α) = 0 and m_k(α,…,α) = 0 for harmonic α of degree r.

    α ranges over the degree-r basis and over sums of pairs of basis
    elements, so the check covers the polarised identities as well.
    """
    C = T.contraction
    if not connectivity_ok(C, r):
        raise ValueError(f"algebra is not {r - 1}-connected")
    idx = _degree_r_indices(T, r)
    alphas = [{i: ONE} for i in idx] + [{i: ONE, j: ONE} for i, j in itertools.combinations(idx, 2)]
    rep = []
    for k in range(3, T.arity_max + 1):
        for a in alphas:
            v = _eval_hat(T, k, [a] * k)
            if v:
                rep.append(f"m̂_{k} diagonal nonzero at {sorted(a)}")
            if C.coords(v):
                rep.append(f"m_{k} diagonal nonzero at {sorted(a)}")
    return rep


def _eval_hat(T: TransferResult, k: int, vecs: Sequence[Mapping]) -> dict:
    out: dict = {}
    table = T.hat[k]
    for combo in itertools.product(*[list(v.items()) for v in vecs]):
        t = tuple(i for i, _ in combo)
        val = table.get(t)
        if val:
            c = ONE
            for _, x in combo:
                c *= x
            vadd(out, val, c)
    return out


def _symmetry_inputs(idx: list[int]) -> list[dict]:
    """Basis vectors of H^r together with pairwise sums and differences.

    The identities are polynomial in repeated arguments, so combinations are
    tested as well as basis elements.
    """
    out = [{i: ONE} for i in idx]
    for i, j in itertools.combinations(idx, 2):
        out.append({i: ONE, j: ONE})
        out.append({i: ONE, j: mpq(-2)})
    return out


def check_symmetries(T: TransferResult, r: int) -> list[str]:
    """Generalised odd/even symmetry identities for m̂_k on harmonic inputs.

    r odd:  m̂_k(x,…,x,y) = (−1)^{k−1} m̂_k(y,x,…,x) and
            m̂_k(x,y,…,y,z) = (−1)^{k−1} m̂_k(z,y,…,y,x), for k ≤ K.
    r even: m̂₃(x,x,y) = −(−1)^{|x|} m̂₃(y,x,x), m̂₃(x,y,z) = −(−1)^{|x||z|} m̂₃(z,y,x)
            (y of degree r, x and z any homogeneous harmonic), m̂₃(x,y,x) = 0,
            m̂₄(x,x,x,y) = −m̂₄(y,x,x,x) and m̂₄(x,y,y,z) = −m̂₄(z,y,y,x).
    """
    C = T.contraction
    if not connectivity_ok(C, r):
        raise ValueError(f"algebra is not {r - 1}-connected")
    idx = _degree_r_indices(T, r)
    vecs = _symmetry_inputs(idx)
    K = T.arity_max
    rep = []

    def ev(*args):
        return _eval_hat(T, len(args), args)

    def expect(u, v, sign, label):
        w = dict(u)
        vadd(w, v, -sign)
        if w:
            rep.append(label)

    if r % 2:
        for k in range(3, K + 1):
            s = -1 if (k - 1) % 2 else 1
            for a, x in enumerate(vecs):
                for b, y in enumerate(vecs):
                    expect(ev(*([x] * (k - 1) + [y])), ev(*([y] + [x] * (k - 1))), s,
                           f"odd symmetry (1), k={k}, inputs {a},{b}")
            for x in idx:
                for y in idx:
                    for z in idx:
                        X, Y, Z = {x: ONE}, {y: ONE}, {z: ONE}
                        expect(ev(X, *([Y] * (k - 2)), Z), ev(Z, *([Y] * (k - 2)), X), s,
                               f"odd symmetry (2), k={k}, at {(x, y, z)}")
        return rep
    allh = range(len(C.harmonic))
    hd = C.harmonic_deg
    if K >= 3:
        for y in idx:
            Y = {y: ONE}
            for x in allh:
                X = {x: ONE}
                expect(ev(X, X, Y), ev(Y, X, X), 1 if hd[x] % 2 else -1,
                       f"even symmetry (1), k=3, at {(x, y)}")
                for z in allh:
                    Z = {z: ONE}
                    expect(ev(X, Y, Z), ev(Z, Y, X), 1 if (hd[x] * hd[z]) % 2 else -1,
                           f"even symmetry (2), k=3, at {(x, y, z)}")
        for x in vecs:
            for y in vecs:
                if ev(x, y, x):
                    rep.append(f"m̂₃(x,y,x) ≠ 0 at {(sorted(x), sorted(y))}")
    if K >= 4:
        for a, x in enumerate(vecs):
            for b, y in enumerate(vecs):
                expect(ev(x, x, x, y), ev(y, x, x, x), -1, f"even symmetry (1), k=4, inputs {a},{b}")
        for x in idx:
            for y in vecs:
                for z in idx:
                    X, Z = {x: ONE}, {z: ONE}
                    expect(ev(X, y, y, Z), ev(Z, y, y, X), -1, f"even symmetry (2), k=4, at {(x, z)}")
    return rep
