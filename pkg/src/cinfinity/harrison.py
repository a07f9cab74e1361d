"""Hochschild/Harrison cochains on a graded commutative algebra H.

H is a :class:`Dgca` with zero differential (usually a table-mode algebra
built from a harmonic basis).  A cochain of arity k and internal degree m is
stored sparsely as ``{input tuple: {output index: coeff}}``.

Signs.  Every operation is transported from the shifted (bar) picture, where
a cochain f corresponds to f' = s∘f∘(s^{⊗k})⁻¹, i.e.

    f'(sa₁,…,sa_k) = (−1)^{Σ_j (k−j)|a_j|} s f(a₁,…,a_k),

and braces are the plain Koszul-signed insertions of f'.  The Lie degree of
f is k+m−1 and the bracket is [f,g] = f∘g − (−1)^{|f||g|} g∘f in Lie
degrees.  Pre-Lie, Jacobi and δ² = 0 hold because they hold upstairs.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .algebra import Dgca
from .linalg import ONE, ZERO, Q, qstr, solve_exact, vadd, vscale


# ------------------------------------------------------------------ signs

def _decal(degs: Sequence[int]) -> int:
    k = len(degs)
    return sum(k - 1 - j for j, a in enumerate(degs) if a & 1)


def circle_sign(k: int, l: int, gm: int, r: int, a: Sequence[int]) -> int:
    """Sign of the term f(a₁..a_r, g(a_{r+1}..a_{r+l}), …) in f∘g.

    ``k`` is the arity of f, ``l`` and ``gm`` arity and internal degree of g,
    ``a`` the degrees of all inputs.
    """
    e = _decal(a)
    glie = l + gm - 1
    if glie & 1:
        e += sum(x - 1 for x in a[:r])
    e += _decal(a[r:r + l])
    b = sum(a[r:r + l]) + gm
    c = list(a[:r]) + [b] + list(a[r + l:])
    e += _decal(c)
    return -1 if e & 1 else 1


def brace_sign(k: int, shapes: Sequence[tuple[int, int]], positions: Sequence[int], a: Sequence[int]) -> int:
    """Sign of one term of f{g₁,…,g_p}; ``shapes`` are (arity, internal) of the g's,
    ``positions`` the slots of f receiving them (increasing)."""
    e = _decal(a)
    c = []
    pos = 0
    slot = 0
    for (l, gm), r in zip(shapes, positions):
        while slot < r:
            c.append(a[pos])
            pos += 1
            slot += 1
        if (l + gm - 1) & 1:
            e += sum(x - 1 for x in a[:pos])
        e += _decal(a[pos:pos + l])
        c.append(sum(a[pos:pos + l]) + gm)
        pos += l
        slot += 1
    c += list(a[pos:])
    e += _decal(c)
    return -1 if e & 1 else 1


# ---------------------------------------------------------------- cochains

class Cochain:
    """Multilinear map H^{⊗k} → H of internal degree m."""

    __slots__ = ("H", "arity", "internal", "values")

    def __init__(self, H: Dgca, arity: int, internal: int, values: Mapping | None = None):
        self.H = H
        self.arity = arity
        self.internal = internal
        vals = {}
        for t, v in (values or {}).items():
            v = {i: mpq(c) for i, c in v.items() if c}
            if v:
                vals[tuple(t)] = v
        self.values = vals

    # bookkeeping
    @property
    def lie_degree(self) -> int:
        return self.arity + self.internal - 1

    total_degree = lie_degree

    def __call__(self, *args) -> dict:
        """Value on basis indices, or on sparse vectors (multilinear extension)."""
        if all(isinstance(a, int) for a in args):
            return dict(self.values.get(tuple(args), {}))
        vecs = [a if isinstance(a, Mapping) else {a: ONE} for a in args]
        out: dict = {}
        for combo in itertools.product(*[list(v.items()) for v in vecs]):
            t = tuple(i for i, _ in combo)
            val = self.values.get(t)
            if val:
                c = ONE
                for _, x in combo:
                    c *= x
                vadd(out, val, c)
        return out

    def copy(self) -> "Cochain":
        return Cochain(self.H, self.arity, self.internal, self.values)

    def is_zero(self) -> bool:
        return not self.values

    def _check(self, other: "Cochain"):
        if other.H is not self.H:
            raise ValueError("cochains over different algebras")
        if (other.arity, other.internal) != (self.arity, self.internal):
            if other.is_zero() or self.is_zero():
                return
            raise ValueError(f"bidegree mismatch {(self.arity, self.internal)} vs {(other.arity, other.internal)}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        base = self if self.values or not other.values else other
        vals = {t: dict(v) for t, v in self.values.items()}
        for t, v in other.values.items():
            w = vadd(vals.setdefault(t, {}), v)
            if not w:
                del vals[t]
        return Cochain(self.H, base.arity, base.internal, vals)

    def __neg__(self):
        return Cochain(self.H, self.arity, self.internal, {t: vscale(v, -ONE) for t, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Q(c)
        return Cochain(self.H, self.arity, self.internal, {t: vscale(v, c) for t, v in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.arity, self.internal) == (other.arity, other.internal) and self.values == other.values

    def __repr__(self):
        return f"Cochain(arity={self.arity}, internal={self.internal}, nnz={len(self.values)})"

    def describe(self, names=None) -> dict[str, dict[str, str]]:
        names = names or [self.H.mono_name(i) for i in range(self.H.dim)]
        out = {}
        for t in sorted(self.values):
            key = "(" + ", ".join(names[i] for i in t) + ")"
            out[key] = {names[i]: qstr(c) for i, c in sorted(self.values[t].items())}
        return out

    def first_difference(self, other: "Cochain"):
        d = self - other
        if d.is_zero():
            return None
        t = min(d.values)
        return t, d.values[t]


def zero(H: Dgca, arity: int, internal: int) -> Cochain:
    return Cochain(H, arity, internal)


def identity_cochain(H: Dgca) -> Cochain:
    return Cochain(H, 1, 0, {(i,): {i: ONE} for i in range(H.dim)})


def element_cochain(H: Dgca, vec: Mapping) -> Cochain:
    """An element x ∈ H viewed as a 0-ary cochain."""
    degs = {H.deg[i] for i in vec}
    if len(degs) > 1:
        raise ValueError("element must be homogeneous")
    m = degs.pop() if degs else 0
    return Cochain(H, 0, m, {(): dict(vec)})


def product_cochain(H: Dgca) -> Cochain:
    """m₂(x, y) = x·y."""
    vals = {}
    for i in range(H.dim):
        for j in range(H.dim):
            p = H.mul_basis(i, j)
            if p:
                vals[(i, j)] = p
    return Cochain(H, 2, 0, vals)


# ------------------------------------------------------------- operations

def _index_by_slot(f: Cochain) -> dict:
    idx: dict = {}
    for t in f.values:
        for r, w in enumerate(t):
            idx.setdefault((r, w), []).append(t)
    return idx


def circle(f: Cochain, g: Cochain) -> Cochain:
    """Gerstenhaber circle product f∘g = f{g}."""
    H = f.H
    k, l, gm = f.arity, g.arity, g.internal
    out_arity = k + l - 1
    internal = f.internal + gm
    if k == 0 or f.is_zero() or g.is_zero():
        return Cochain(H, max(out_arity, 0), internal)
    deg = H.deg
    slot = _index_by_slot(f)
    vals: dict = {}
    for tg, vg in g.values.items():
        dg = [deg[i] for i in tg]
        for w, cw in vg.items():
            for r in range(k):
                for tf in slot.get((r, w), ()):
                    t = tf[:r] + tg + tf[r + 1:]
                    a = [deg[i] for i in tf[:r]] + dg + [deg[i] for i in tf[r + 1:]]
                    s = circle_sign(k, l, gm, r, a)
                    vadd(vals.setdefault(t, {}), f.values[tf], cw if s > 0 else -cw)
    return Cochain(H, out_arity, internal, {t: v for t, v in vals.items() if v})


def brace(f: Cochain, gs: Sequence[Cochain]) -> Cochain:
    """Multi-brace f{g₁,…,g_p}: order-preserving insertions with Koszul signs."""
    H = f.H
    p = len(gs)
    k = f.arity
    if p > k:
        raise ValueError("more insertions than inputs")
    if p == 0:
        return f.copy()
    if p == 1:
        return circle(f, gs[0])
    deg = H.deg
    shapes = [(g.arity, g.internal) for g in gs]
    out_arity = k - p + sum(g.arity for g in gs)
    internal = f.internal + sum(g.internal for g in gs)
    vals: dict = {}
    entries = [list(g.values.items()) for g in gs]
    for positions in itertools.combinations(range(k), p):
        for combo in itertools.product(*entries):
            outs = [list(v.items()) for _, v in combo]
            for choice in itertools.product(*outs):
                # f-inputs: fixed slots get the outputs of the g's
                fixed = dict(zip(positions, (w for w, _ in choice)))
                coeff = ONE
                for _, c in choice:
                    coeff *= c
                for tf, vf in f.values.items():
                    if any(tf[r] != w for r, w in fixed.items()):
                        continue
                    t: list = []
                    gi = 0
                    for r in range(k):
                        if r in fixed:
                            t += combo[gi][0]
                            gi += 1
                        else:
                            t.append(tf[r])
                    a = [deg[i] for i in t]
                    s = brace_sign(k, shapes, positions, a)
                    vadd(vals.setdefault(tuple(t), {}), vf, coeff if s > 0 else -coeff)
    return Cochain(H, out_arity, internal, {t: v for t, v in vals.items() if v})


def bracket(a: Cochain, b: Cochain) -> Cochain:
    """Gerstenhaber bracket [a,b] = a∘b − (−1)^{|a||b|} b∘a (Lie degrees)."""
    s = -1 if (a.lie_degree * b.lie_degree) & 1 else 1
    ab = circle(a, b)
    ba = circle(b, a)
    return ab - ba if s > 0 else ab + ba


def delta(f: Cochain, m2: Cochain | None = None) -> Cochain:
    """Harrison/Hochschild differential δf = [m₂, f]."""
    if m2 is None:
        m2 = product_cochain(f.H)
    if f.is_zero():
        return Cochain(f.H, f.arity + 1, f.internal)
    return _delta_fast(f, m2)


def _delta_fast(f: Cochain, m2: Cochain) -> Cochain:
    # m2∘f − (−1)^{|f|} f∘m2 with m2 of Lie degree 1
    a = circle(m2, f)
    b = circle(f, m2)
    return a + b if f.lie_degree & 1 else a - b


def _product_cache(H: Dgca):
    c = getattr(H, "_m2_cochain", None)
    if c is None:
        c = product_cochain(H)
        H._m2_cochain = c
    return c


def m2_of(H: Dgca) -> Cochain:
    return _product_cache(H)


def dot(x: Mapping, y: Mapping, H: Dgca) -> dict:
    return H.mul_vec(x, y)


# ------------------------------------------------------------- structures

class CInfinity:
    """Truncated family (m₃, …, m_K) of cochains of bidegree (k, 2−k)."""

    def __init__(self, H: Dgca, components: Mapping[int, Cochain] | None = None, K: int | None = None):
        self.H = H
        comps = dict(components or {})
        if K is None:
            K = max(comps, default=3)
        self.K = K
        self.components = {k: comps.get(k, Cochain(H, k, 2 - k)) for k in range(3, K + 1)}
        for k, c in self.components.items():
            if (c.arity, c.internal) != (k, 2 - k) and not c.is_zero():
                raise ValueError(f"component {k} has bidegree {(c.arity, c.internal)}")

    def __getitem__(self, k: int) -> Cochain:
        if k in self.components:
            return self.components[k]
        return Cochain(self.H, k, 2 - k)

    def truncate(self, K: int) -> "CInfinity":
        return CInfinity(self.H, {k: c for k, c in self.components.items() if k <= K}, K)

    def __add__(self, other: "CInfinity") -> "CInfinity":
        K = min(self.K, other.K)
        return CInfinity(self.H, {k: self[k] + other[k] for k in range(3, K + 1)}, K)

    def __sub__(self, other: "CInfinity") -> "CInfinity":
        K = min(self.K, other.K)
        return CInfinity(self.H, {k: self[k] - other[k] for k in range(3, K + 1)}, K)

    def __eq__(self, other):
        if not isinstance(other, CInfinity):
            return NotImplemented
        K = min(self.K, other.K)
        return all(self[k] == other[k] for k in range(3, K + 1))

    def __repr__(self):
        return f"CInfinity(K={self.K}, nnz={ {k: len(c.values) for k, c in self.components.items()} })"


def mc_defect(m: CInfinity, arity: int) -> Cochain:
    """Arity component of δm + ½[m,m] = δm + m∘m."""
    H = m.H
    m2 = m2_of(H)
    out = Cochain(H, arity, 3 - arity)
    if 3 <= arity - 1 <= m.K:
        out = out + delta(m[arity - 1], m2)
    for a in range(3, m.K + 1):
        b = arity + 1 - a
        if 3 <= b <= m.K:
            out = out + circle(m[a], m[b])
    return out


def mc_check(m: CInfinity, max_arity: int | None = None) -> list[str]:
    """δm = −½[m,m] checked in each arity from 4 to K+1."""
    top = (m.K + 1) if max_arity is None else max_arity
    report = []
    for n in range(4, top + 1):
        r = mc_defect(m, n)
        if not r.is_zero():
            t = min(r.values)
            report.append(f"arity {n}: defect at inputs {t}")
    return report


# -------------------------------------------------------- shuffle, units

def _shuffles(p: int, q: int):
    for pos in itertools.combinations(range(p + q), p):
        yield pos


def shuffle_terms(degs: Sequence[int], p: int):
    """Signed (p,q)-shuffle permutations of inputs with the given degrees.

    Returns a list of (perm, sign) where perm[j] is the index of the input
    placed in slot j and sign combines sgn(σ) with the Koszul sign.
    """
    n = len(degs)
    q = n - p
    out = []
    for pos in _shuffles(p, q):
        perm = [None] * n
        it_a = iter(range(p))
        it_b = iter(range(p, n))
        posset = set(pos)
        for j in range(n):
            perm[j] = next(it_a) if j in posset else next(it_b)
        # count inversions: sign of permutation and Koszul sign
        e = 0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    e += 1 + degs[perm[i]] * degs[perm[j]]
        out.append((tuple(perm), -1 if e & 1 else 1))
    return out


def shuffle_vanishing(f: Cochain, tuples: Iterable[tuple] | None = None, limit: int | None = None) -> list[str]:
    """Σ_σ ±f(x_σ) = 0 over (p,q)-shuffles, for every split p+q = arity.

    Checked on all basis tuples touching the support of f (up to
    permutation), or on the given tuples.
    """
    H = f.H
    k = f.arity
    if k < 2 or f.is_zero():
        return []
    if tuples is None:
        cand = set()
        for t in f.values:
            for perm in set(itertools.permutations(t)):
                cand.add(perm)
        tuples = sorted(cand)
    report = []
    checked = 0
    for t in tuples:
        degs = [H.deg[i] for i in t]
        for p in range(1, k):
            s: dict = {}
            for perm, sg in shuffle_terms(degs, p):
                v = f.values.get(tuple(t[i] for i in perm))
                if v:
                    vadd(s, v, sg)
            if s:
                report.append(f"({p},{k - p})-shuffle sum nonzero at {t}")
                return report
        checked += 1
        if limit and checked >= limit:
            break
    return report


def normalized_check(f: Cochain, unit: int = 0) -> list[str]:
    for t in f.values:
        if unit in t:
            return [f"nonzero with unit input at {t}"]
    return []


# ------------------------------------------------------------- cyclicity

def cyclic_transform(f: Cochain) -> dict[tuple, mpq]:
    """Tf(x₁,…,x_{k+1}) = ⟨f(x₁,…,x_k), x_{k+1}⟩."""
    H = f.H
    if not H.has_pairing:
        raise ValueError("cyclic transform needs a pairing")
    out = {}
    n = H.top_degree
    for t, v in f.values.items():
        for w, c in v.items():
            for j in H.degree_indices(n - H.deg[w]):
                p = H.pair_basis(w, j)
                if p:
                    key = t + (j,)
                    out[key] = out.get(key, ZERO) + c * p
    return {k: v for k, v in out.items() if v}


def cyclic_sign(degs: Sequence[int]) -> int:
    """(−1)^k (−1)^{|x₁|(|x₂|+…+|x_{k+1}|)} for a (k+1)-tuple of degrees."""
    k = len(degs) - 1
    e = k + degs[0] * sum(degs[1:])
    return -1 if e & 1 else 1


def cyclicity_report(f: Cochain) -> list[str]:
    """⟨f(x₁..x_k), x_{k+1}⟩ = (−1)^k(−1)^ε ⟨f(x₂..x_{k+1}), x₁⟩ on all tuples."""
    T = cyclic_transform(f)
    H = f.H
    keys = set(T)
    keys |= {t[-1:] + t[:-1] for t in T}
    for t in sorted(keys):
        lhs = T.get(t, ZERO)
        rot = t[1:] + t[:1]
        rhs = cyclic_sign([H.deg[i] for i in t]) * T.get(rot, ZERO)
        if lhs != rhs:
            return [f"cyclicity fails at {t}: {lhs} vs {rhs}"]
    return []


# ----------------------------------------------------- cochain spaces

def basis_tuples(H: Dgca, k: int, internal: int, unit: bool = True):
    """All (inputs, output) index pairs compatible with the degrees."""
    idx = range(H.dim) if unit else range(1, H.dim)
    by_deg = {}
    for i in range(H.dim):
        by_deg.setdefault(H.deg[i], []).append(i)
    for t in itertools.product(idx, repeat=k):
        od = sum(H.deg[i] for i in t) + internal
        for w in by_deg.get(od, ()):
            yield t, w


class CochainSpace:
    """Coordinates on cochains of a fixed bidegree, with optional constraints.

    Coordinates are indexed by (input tuple, output index).  ``normalized``
    drops tuples containing the unit.  Shuffle and cyclic conditions are
    imposed later as linear equations.
    """

    def __init__(self, H: Dgca, arity: int, internal: int, normalized: bool = False,
                 tuples: Iterable | None = None):
        self.H = H
        self.arity = arity
        self.internal = internal
        if tuples is None:
            coords = list(basis_tuples(H, arity, internal, unit=not normalized))
        else:
            coords = list(tuples)
        self.coords = coords
        self.pos = {c: i for i, c in enumerate(coords)}

    def __len__(self):
        return len(self.coords)

    def to_vector(self, f: Cochain) -> dict:
        v = {}
        for t, val in f.values.items():
            for w, c in val.items():
                p = self.pos.get((t, w))
                if p is None:
                    raise ValueError(f"cochain value outside the space at {t}")
                v[p] = c
        return v

    def from_vector(self, v: Mapping) -> Cochain:
        vals: dict = {}
        for p, c in v.items():
            t, w = self.coords[p]
            vals.setdefault(t, {})[w] = c
        return Cochain(self.H, self.arity, self.internal, vals)

    def basis_cochain(self, p: int) -> Cochain:
        t, w = self.coords[p]
        return Cochain(self.H, self.arity, self.internal, {t: {w: ONE}})

    def shuffle_equations(self) -> list[dict]:
        """Linear equations (on coordinates) expressing shuffle vanishing."""
        H = self.H
        k = self.arity
        eqs = []
        seen = set()
        for (t, w) in self.coords:
            key = (tuple(sorted(t)), w)
            if key in seen:
                continue
            seen.add(key)
            for perm_t in set(itertools.permutations(t)):
                degs = [H.deg[i] for i in perm_t]
                for p in range(1, k):
                    e = {}
                    for perm, sg in shuffle_terms(degs, p):
                        q = self.pos.get((tuple(perm_t[i] for i in perm), w))
                        if q is not None:
                            e[q] = e.get(q, ZERO) + sg
                    e = {a: b for a, b in e.items() if b}
                    if e:
                        eqs.append(e)
        return eqs

    def cyclic_equations(self) -> list[dict]:
        """Equations Tf(x₁..x_{k+1}) = (−1)^k(−1)^ε Tf(x₂..x_{k+1},x₁)."""
        H = self.H
        n = H.top_degree
        # Tf(t + (j,)) = Σ_w f(t)_w ⟨w, j⟩ as a linear form in coordinates
        forms: dict = {}
        for p, (t, w) in enumerate(self.coords):
            for j in H.degree_indices(n - H.deg[w]):
                c = H.pair_basis(w, j)
                if c:
                    d = forms.setdefault(t + (j,), {})
                    d[p] = d.get(p, ZERO) + c
        eqs = []
        keys = set(forms) | {t[-1:] + t[:-1] for t in forms}
        for t in keys:
            rot = t[1:] + t[:1]
            s = cyclic_sign([H.deg[i] for i in t])
            e = dict(forms.get(t, {}))
            vadd(e, forms.get(rot, {}), -s)
            if e:
                eqs.append(e)
        return eqs

    def constraint_equations(self, shuffle: bool = False, cyclic: bool = False) -> list[dict]:
        eqs = []
        if shuffle:
            eqs += self.shuffle_equations()
        if cyclic:
            eqs += self.cyclic_equations()
        return eqs


def constrained_basis(space: CochainSpace, shuffle: bool = False, cyclic: bool = False) -> list[dict]:
    eqs = space.constraint_equations(shuffle, cyclic)
    if not eqs:
        return [{p: ONE} for p in range(len(space))]
    _, ker = solve_exact(eqs, {}, len(space))
    return ker


class ClassResult:
    """Outcome of a cohomology class computation."""

    def __init__(self, is_zero: bool, preimage: Cochain | None, rank_coboundaries: int,
                 constraints: dict):
        self.is_zero = is_zero
        self.preimage = preimage
        self.rank_coboundaries = rank_coboundaries
        self.constraints = constraints

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"ClassResult(zero={self.is_zero}, coboundary_rank={self.rank_coboundaries})"


def solve_coboundary(target: Cochain, shuffle: bool = False, normalized: bool = False,
                     cyclic: bool = False, extra: Sequence[Cochain] = ()) -> tuple:
    """Find φ (constrained) and coefficients c with δφ + Σ c_i extra_i = target.

    Returns (φ, c) or None.  The unknowns are the constrained coordinates of
    an arity-(k−1) cochain of internal degree equal to that of the target,
    followed by one scalar per extra cochain.
    """
    H = target.H
    k = target.arity
    m = target.internal
    space = CochainSpace(H, k - 1, m, normalized=normalized)
    basis = constrained_basis(space, shuffle=shuffle, cyclic=cyclic)
    m2 = m2_of(H)
    # columns: δ of each basis cochain, then the extras
    cols = []
    for b in basis:
        cols.append(delta(space.from_vector(b), m2))
    cols += list(extra)
    # rows indexed by (tuple, output)
    rowpos: dict = {}
    rows: list[dict] = []

    def row(key):
        r = rowpos.get(key)
        if r is None:
            r = rowpos[key] = len(rows)
            rows.append({})
        return r

    for j, c in enumerate(cols):
        for t, v in c.values.items():
            for w, a in v.items():
                rows[row((t, w))][j] = a
    rhs = {}
    for t, v in target.values.items():
        for w, a in v.items():
            rhs[row((t, w))] = a
    x, _ = solve_exact(rows, rhs, len(cols))
    if x is None:
        return None
    phi_vec: dict = {}
    for j, b in enumerate(basis):
        if x.get(j):
            vadd(phi_vec, b, x[j])
    phi = space.from_vector(phi_vec)
    coeffs = [x.get(len(basis) + i, ZERO) for i in range(len(extra))]
    return phi, coeffs


def cohomology_class(f: Cochain, shuffle: bool = False, normalized: bool = False,
                     cyclic: bool = False, check_closed: bool = True) -> ClassResult:
    """Decide whether the class of a closed cochain vanishes in the constrained complex."""
    if check_closed and not delta(f).is_zero():
        raise ValueError("cochain is not closed")
    cons = {"shuffle": shuffle, "normalized": normalized, "cyclic": cyclic}
    if f.is_zero():
        return ClassResult(True, Cochain(f.H, f.arity - 1, f.internal), 0, cons)
    r = solve_coboundary(f, shuffle=shuffle, normalized=normalized, cyclic=cyclic)
    if r is None:
        return ClassResult(False, None, -1, cons)
    return ClassResult(True, r[0], -1, cons)


# ------------------------------------------------------------ degree bound

def max_cyclic_arity(r: int, n: int) -> int:
    """Largest arity k at which a normalized cyclic cochain of bidegree (k, 2−k)
    can be nonzero on an (r−1)-connected Poincaré algebra of dimension n.

    l is the least integer ≥ 4 with n ≤ l(r−1)+2; the bound is l−2.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    l = max(4, -(-(n - 2) // (r - 1)))
    return l - 2


def cyclic_support_arity(H: Dgca, kmax: int = 8, shuffle: bool = True) -> int:
    """Brute force: largest k ≤ kmax for which the space of normalized cyclic
    (Harrison) cochains of bidegree (k, 2−k) on H is nonzero (2 if none)."""
    best = 2
    for k in range(3, kmax + 1):
        space = CochainSpace(H, k, 2 - k, normalized=True)
        if not len(space):
            continue
        if constrained_basis(space, shuffle=shuffle, cyclic=True):
            best = k
    return best
