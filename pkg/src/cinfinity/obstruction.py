"""Truncated gauge calculus on the arity-filtered Harrison DGLA.

A minimal C∞-structure is an MC element m = m₃ + m₄ + … of the DGLA
(C(H,H), δ = [m₂,−], [−,−]); a gauge parameter p = φ₂ + φ₃ + … has Lie
degree 0.  The gauge action is

    e^{ad_p} ∗ m = e^{ad_p}(m) − ((e^{ad_p} − 1)/ad_p)(δp),

and ad_p raises arity by at least one, so modulo F^{K+1} (arity > K) every
series is a finite sum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .algebra import Dgca
from .harrison import (CInfinity, ClassResult, Cochain, CochainSpace, bracket, cohomology_class,
                       constrained_basis, delta, m2_of, mc_check, solve_coboundary)
from .linalg import ONE, ZERO, Q, solve_exact, vadd


class ObstructionError(ValueError):
    """A precondition of an obstruction computation does not hold."""


# ------------------------------------------------------------- families

Family = dict  # arity -> Cochain


def _fam_add(out: Family, f: Family, c=ONE) -> Family:
    for k, x in f.items():
        if x.is_zero():
            continue
        y = x if c == 1 else x * c
        out[k] = out[k] + y if k in out else y
    return out


def _fam_clean(f: Family) -> Family:
    return {k: x for k, x in sorted(f.items()) if not x.is_zero()}


def _fam_bracket(a: Family, b: Family, K: int) -> Family:
    out: Family = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j - 1
            if k <= K and not x.is_zero() and not y.is_zero():
                _fam_add(out, {k: bracket(x, y)})
    return _fam_clean(out)


class GaugeParameter:
    """p = φ₂ + φ₃ + … with φ_k of bidegree (k, 1−k)."""

    def __init__(self, H: Dgca, components: Mapping[int, Cochain] | None = None):
        self.H = H
        comps = {}
        for k, c in (components or {}).items():
            if k < 2:
                raise ObstructionError(f"gauge parameters start at arity 2, got a component of arity {k}")
            if not c.is_zero() and (c.arity, c.internal) != (k, 1 - k):
                raise ObstructionError(f"gauge component {k} has bidegree {(c.arity, c.internal)}")
            if not c.is_zero():
                comps[k] = c
        self.components = dict(sorted(comps.items()))

    def __getitem__(self, k: int) -> Cochain:
        return self.components.get(k, Cochain(self.H, k, 1 - k))

    def family(self) -> Family:
        return dict(self.components)

    def truncate(self, K: int) -> "GaugeParameter":
        return GaugeParameter(self.H, {k: c for k, c in self.components.items() if k <= K})

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "GaugeParameter") -> "GaugeParameter":
        return GaugeParameter(self.H, _fam_add(dict(self.components), other.components))

    def __neg__(self):
        return GaugeParameter(self.H, {k: -c for k, c in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return GaugeParameter(self.H, {k: x * c for k, x in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GaugeParameter):
            return NotImplemented
        ks = set(self.components) | set(other.components)
        return all(self[k] == other[k] for k in ks)

    def __repr__(self):
        return f"GaugeParameter({ {k: len(c.values) for k, c in self.components.items()} })"


def gauge(H: Dgca, *comps: Cochain) -> GaugeParameter:
    """Gauge parameter from cochains given in any order."""
    out: Family = {}
    for c in comps:
        _fam_add(out, {c.arity: c})
    return GaugeParameter(H, out)


def _as_family(m) -> Family:
    if isinstance(m, CInfinity):
        return {k: c for k, c in m.components.items() if not c.is_zero()}
    if isinstance(m, GaugeParameter):
        return m.family()
    return dict(m)


def _to_cinf(H: Dgca, f: Family, K: int) -> CInfinity:
    return CInfinity(H, {k: c for k, c in f.items() if 3 <= k <= K}, K)


def _exp_ad_series(p: Family, x: Family, K: int, coeff) -> Family:
    """Σ_n coeff(n) ad_p^n(x) modulo arity K+1."""
    out: Family = {}
    term = {k: c for k, c in x.items() if k <= K}
    n = 0
    while term:
        c = coeff(n)
        if c:
            _fam_add(out, term, c)
        term = _fam_bracket(p, term, K)
        n += 1
    return _fam_clean(out)


def gauge_act(p: GaugeParameter, m: CInfinity, K: int | None = None) -> CInfinity:
    """e^{ad_p} ∗ m = e^{ad_p}(m) − ((e^{ad_p}−1)/ad_p)(δp), exact mod F^{K+1}."""
    H = m.H
    if K is None:
        K = m.K
    if not isinstance(p, GaugeParameter):
        p = GaugeParameter(H, p)
    P = p.truncate(K).family()
    m2 = m2_of(H)
    first = _exp_ad_series(P, _as_family(m), K, lambda n: Q(1) / factorial(n))
    dp = {k + 1: delta(c, m2) for k, c in P.items() if k + 1 <= K}
    second = _exp_ad_series(P, _fam_clean(dp), K, lambda n: Q(1) / factorial(n + 1))
    out = _fam_add(first, second, -ONE)
    return _to_cinf(H, _fam_clean(out), K)


def gauge_act_adjoint(p: GaugeParameter, m: CInfinity, K: int | None = None) -> CInfinity:
    """Same action computed as e^{ad_p}(m₂ + m) − m₂ (independent route)."""
    H = m.H
    if K is None:
        K = m.K
    P = p.truncate(K).family()
    M = _as_family(m)
    M[2] = m2_of(H)
    out = _exp_ad_series(P, M, K, lambda n: Q(1) / factorial(n))
    out.pop(2, None)
    return _to_cinf(H, out, K)


def exp_ad_apply(p: GaugeParameter, tau: CInfinity, K: int | None = None) -> CInfinity:
    """e^{ad_p}(τ) for a family τ of bidegrees (k, 2−k)."""
    if K is None:
        K = tau.K
    out = _exp_ad_series(p.truncate(K).family(), _as_family(tau), K, lambda n: Q(1) / factorial(n))
    return _to_cinf(tau.H, out, K)


# ------------------------------------------------------------------ BCH

def _log_exp_words(N: int) -> dict[tuple, Fraction]:
    """log(e^X e^Y) in the free associative algebra on X=0, Y=1, up to length N."""
    def mul(a, b):
        out: dict = {}
        for u, x in a.items():
            for v, y in b.items():
                w = u + v
                if len(w) <= N:
                    out[w] = out.get(w, 0) + x * y
        return {w: c for w, c in out.items() if c}

    def exp_letter(letter):
        return {(letter,) * i: Fraction(1, factorial(i)) for i in range(N + 1)}

    Z = mul(exp_letter(0), exp_letter(1))
    Z.pop((), None)  # Z = e^X e^Y − 1
    out: dict = {}
    power = dict(Z)
    for j in range(1, N + 1):
        c = Fraction((-1) ** (j + 1), j)
        for w, x in power.items():
            out[w] = out.get(w, 0) + c * x
        power = mul(power, Z)
    return {w: c for w, c in out.items() if c}


_BCH_CACHE: dict = {}


def bch_words(N: int) -> dict[tuple, Fraction]:
    """Lie-word coefficients of BCH(X,Y) up to length N via Dynkin's map.

    A homogeneous Lie element P of degree n equals (1/n)·θ(P), where θ sends
    a word x₁…x_n to the left-normed bracket [x₁,[x₂,…,x_n]].
    """
    if N not in _BCH_CACHE:
        words = _log_exp_words(N)
        _BCH_CACHE[N] = {w: c / len(w) for w, c in words.items()}
    return _BCH_CACHE[N]


def bch(q: GaugeParameter, p: GaugeParameter, K: int) -> GaugeParameter:
    """q ∗ p with e^{ad_{q∗p}} = e^{ad_q}·e^{ad_p}, exact mod F^{K+1}."""
    H = q.H
    Q_ = q.truncate(K).family()
    P_ = p.truncate(K).family()
    # words of length n have arity ≥ n+1, so length K−1 suffices
    N = max(1, K - 1)
    words = bch_words(N)
    letters = {0: Q_, 1: P_}
    memo: dict = {}

    def theta(w):
        if w in memo:
            return memo[w]
        if len(w) == 1:
            r = letters[w[0]]
        else:
            r = _fam_bracket(letters[w[0]], theta(w[1:]), K)
        memo[w] = r
        return r

    out: Family = {}
    for w, c in sorted(words.items()):
        t = theta(w)
        if t:
            _fam_add(out, t, Q(c))
    return GaugeParameter(H, {k: x for k, x in _fam_clean(out).items() if k <= K})


# ----------------------------------------------------------- reports

def distributivity_check(q: GaugeParameter, m: CInfinity, tau: CInfinity, K: int | None = None) -> dict:
    """e^{ad_q}∗(m+τ) = (e^{ad_q}∗m) + e^{ad_q}(τ) mod F^{K+1}."""
    if K is None:
        K = min(m.K, tau.K)
    lhs = gauge_act(q, (m + tau).truncate(K), K)
    rhs = gauge_act(q, m.truncate(K), K) + exp_ad_apply(q, tau.truncate(K), K)
    diff = [k for k in range(3, K + 1) if lhs[k] != rhs[k]]
    return {"holds": not diff, "differing_arities": diff, "K": K}


@dataclass(frozen=True)
class Sector:
    """Constraints defining the subcomplex in which classes are computed."""
    shuffle: bool = True
    normalized: bool = False
    cyclic: bool = False

    def kwargs(self) -> dict:
        return {"shuffle": self.shuffle, "normalized": self.normalized, "cyclic": self.cyclic}

    def label(self) -> str:
        parts = [n for n, v in (("shuffle", self.shuffle), ("normalized", self.normalized),
                                ("cyclic", self.cyclic)) if v]
        return "+".join(parts) or "hochschild"


def choose_sector(H: Dgca, cyclic: bool = True) -> Sector:
    """Normalized cyclic Harrison cochains on Poincaré algebras, shuffle cochains otherwise."""
    if cyclic and H.has_pairing:
        return Sector(shuffle=True, normalized=True, cyclic=True)
    return Sector(shuffle=True)


@dataclass
class ObstructionClass:
    level: int
    cocycle: Cochain
    cls: ClassResult
    gauge_used: GaugeParameter | None
    sector: Sector
    representative: Cochain | None = None

    @property
    def is_zero(self) -> bool:
        return self.cls.is_zero

    def summary(self) -> dict:
        return {"level": self.level, "sector": self.sector.label(),
                "class_zero": self.cls.is_zero, "cocycle_nnz": len(self.cocycle.values)}


@dataclass
class IsotopyVerdict:
    level: int
    isotopic: bool
    witness: GaugeParameter | None
    sector: Sector
    obstruction: ObstructionClass | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "yes" if self.isotopic else "no"


def first_difference(a: CInfinity, b: CInfinity, upto: int) -> int | None:
    for k in range(3, upto + 1):
        if a[k] != b[k]:
            return k
    return None


def _closed_or_raise(c: Cochain, what: str):
    if not delta(c).is_zero():
        raise ObstructionError(f"{what} is not δ-closed")


# ------------------------------------------------------------- level 3

def isotopy_mod3(m: CInfinity, mp: CInfinity, sector: Sector | None = None) -> IsotopyVerdict:
    """Decide [m₃] = [m₃′] by solving δφ₂ = m₃ − m₃′ exactly."""
    if sector is None:
        sector = choose_sector(m.H)
    diff = m[3] - mp[3]
    H = m.H
    if diff.is_zero():
        return IsotopyVerdict(3, True, GaugeParameter(H), sector)
    _closed_or_raise(diff, "m₃ − m₃′")
    sol = solve_coboundary(diff, **sector.kwargs())
    cls = ClassResult(sol is not None, sol[0] if sol else None, -1, sector.kwargs())
    obs = ObstructionClass(3, diff, cls, None, sector)
    if sol is None:
        return IsotopyVerdict(3, False, None, sector, obs)
    phi2 = sol[0]
    return IsotopyVerdict(3, True, GaugeParameter(H, {2: phi2}), sector, obs)


# ------------------------------------------------------------- level 4

def kappa4_cochain(m: CInfinity, mp: CInfinity, phi2: Cochain) -> Cochain:
    """κ̃₄ = m₄ − m₄′ + [φ₂,m₃] − ½[φ₂,δφ₂]."""
    dphi = delta(phi2)
    k = m[4] - mp[4]
    if not phi2.is_zero():
        k = k + bracket(phi2, m[3]) - bracket(phi2, dphi) * Q("1/2")
    return k


def kappa4(m: CInfinity, mp: CInfinity, phi2: Cochain, sector: Sector | None = None) -> ObstructionClass:
    if sector is None:
        sector = choose_sector(m.H)
    if delta(phi2) != m[3] - mp[3]:
        raise ObstructionError("precondition δφ₂ = m₃ − m₃′ fails")
    kap = kappa4_cochain(m, mp, phi2)
    _closed_or_raise(kap, "κ̃₄")
    rep = m[4] - mp[4]
    if not phi2.is_zero():
        rep = rep + bracket(phi2, m[3])
    cls = cohomology_class(kap, check_closed=False, **sector.kwargs())
    return ObstructionClass(4, kap, cls, GaugeParameter(m.H, {2: phi2}), sector, representative=rep)


def delta_kernel_basis(H: Dgca, arity: int, internal: int, sector: Sector) -> list[Cochain]:
    """Basis of δ-closed cochains of the given bidegree inside the sector."""
    space = CochainSpace(H, arity, internal, normalized=sector.normalized)
    basis = constrained_basis(space, shuffle=sector.shuffle, cyclic=sector.cyclic)
    if not basis:
        return []
    m2 = m2_of(H)
    images = [delta(space.from_vector(b), m2) for b in basis]
    rowpos: dict = {}
    rows: list[dict] = []
    for j, im in enumerate(images):
        for t, v in im.values.items():
            for w, a in v.items():
                key = (t, w)
                if key not in rowpos:
                    rowpos[key] = len(rows)
                    rows.append({})
                rows[rowpos[key]][j] = a
    if rows:
        _, ker = solve_exact(rows, {}, len(basis))
    else:
        ker = [{j: ONE} for j in range(len(basis))]
    out = []
    for kv in ker:
        vec: dict = {}
        for j, c in kv.items():
            vadd(vec, basis[j], c)
        out.append(space.from_vector(vec))
    return out


def isotopy_mod4(m: CInfinity, mp: CInfinity, sector: Sector | None = None) -> IsotopyVerdict:
    """Decide m ∼₄ m′: one affine system in (c_i, φ₃) with

        κ̃₄(φ₂⁰ + Σ c_i f_i) = κ̃₄(φ₂⁰) + Σ c_i ½[f_i, m₃ + m₃′] = δφ₃.
    """
    if sector is None:
        sector = choose_sector(m.H)
    H = m.H
    v3 = isotopy_mod3(m, mp, sector)
    if not v3.isotopic:
        raise ObstructionError("precondition fails: the structures are not isotopic modulo 3")
    phi0 = v3.witness[2]
    base = kappa4(m, mp, phi0, sector)
    fs = delta_kernel_basis(H, 2, -1, sector)
    s = m[3] + mp[3]
    shifts = [bracket(f, s) * Q("1/2") for f in fs]
    notes = [f"closed (2,−1) cochains in sector: {len(fs)}"]
    target = base.cocycle
    if target.is_zero():
        sol = (Cochain(H, 3, -2), [ZERO] * len(fs))
    else:
        sol = solve_coboundary(target, extra=[-x for x in shifts], **sector.kwargs())
    # cross-check: membership of [κ̃₄(φ₂⁰)] in ad_{[m₃]}(closed (2,−1))
    if target.is_zero():
        alt = True
    else:
        alt = solve_coboundary(target, extra=[bracket(f, m[3]) for f in fs], **sector.kwargs()) is not None
    notes.append(f"ad_[m3]-image test agrees: {alt == (sol is not None)}")
    if sol is None:
        return IsotopyVerdict(4, False, None, sector, base, notes)
    phi3, coeffs = sol
    phi2 = phi0
    for c, f in zip(coeffs, fs):
        if c:
            phi2 = phi2 + f * c
    p = GaugeParameter(H, {2: phi2, 3: phi3})
    check = gauge_act(p, m.truncate(4), 4)
    if first_difference(check, mp.truncate(4), 4) is not None:
        raise ObstructionError("internal inconsistency: recovered gauge does not map m to m′ mod F⁵")
    ob = kappa4(m, mp, phi2, sector)
    return IsotopyVerdict(4, True, p, sector, ob, notes)


# ------------------------------------------------------------ level k

def kappa_k(p: GaugeParameter, m: CInfinity, mp: CInfinity, k: int,
            sector: Sector | None = None, classify: bool = True) -> ObstructionClass:
    """κ̃_k = Proj_k(e^{ad_p}∗m − m′), valid when the two agree below arity k."""
    if sector is None:
        sector = choose_sector(m.H)
    if k < 3 or m.K < k or mp.K < k:
        raise ObstructionError(f"level {k} needs both structures through arity {k}")
    M = gauge_act(p, m.truncate(k), k)
    j = first_difference(M, mp, k - 1)
    if j is not None:
        raise ObstructionError(f"e^ad_p ∗ m and m′ differ at arity {j} < {k}")
    kap = M[k] - mp[k]
    if m.K > k and mp.K > k:
        _closed_or_raise(kap, f"κ̃_{k}")
    if classify:
        cls = cohomology_class(kap, check_closed=False, **sector.kwargs())
    else:
        cls = ClassResult(kap.is_zero(), None, -1, sector.kwargs())
    return ObstructionClass(k, kap, cls, p, sector)


def stabilizer_classes(mp: CInfinity, k: int, sector: Sector | None = None,
                       max_candidates: int | None = None) -> dict:
    """Spanning classes of 𝒦_k(m′,m′) reached by single closed components.

    Candidates are q = f with f a δ-closed cochain of arity j ∈ [2, k−2] in
    the sector; those with e^{ad_q}∗m′ = m′ below arity k contribute
    [κ̃_k(q,m′,m′)].  This is a linear-order search, so the result spans a
    subgroup of 𝒦_k(m′,m′) that may be proper.
    """
    if sector is None:
        sector = choose_sector(mp.H)
    H = mp.H
    found: list[ObstructionClass] = []
    reps: list[Cochain] = []
    tried = 0
    for j in range(2, k - 1):
        for f in delta_kernel_basis(H, j, 1 - j, sector):
            if max_candidates is not None and tried >= max_candidates:
                break
            tried += 1
            q = GaugeParameter(H, {j: f})
            try:
                ob = kappa_k(q, mp, mp, k, sector, classify=False)
            except ObstructionError:
                continue
            if ob.cocycle.is_zero():
                continue
            # keep only classes independent of the ones found so far
            if solve_coboundary(ob.cocycle, extra=reps, **sector.kwargs()) is not None:
                continue
            reps.append(ob.cocycle)
            ob.cls = ClassResult(False, None, -1, sector.kwargs())
            found.append(ob)
    return {"level": k, "classes": found, "candidates": tried, "complete": False,
            "note": "linear-order enumeration; the subgroup found may be proper"}


# ------------------------------------------------------- certificates

def restriction_certificate(m3: Cochain, sub: Sequence[int], sector: Sector | None = None) -> dict:
    """Nonvanishing of [m₃] via a retract onto the span of basis elements ``sub``.

    If span(sub) is a subalgebra and the coordinate projection P onto it is
    multiplicative, then f ↦ P∘f∘ι^{⊗k} is a cochain map preserving the
    shuffle and normalized conditions.  A non-exact restriction therefore
    proves [m₃] ≠ 0 in the shuffle (hence also the cyclic) subcomplex.
    """
    H = m3.H
    if sector is None:
        sector = Sector(shuffle=True, normalized=True)
    S = sorted(set(sub) | {0})
    inS = set(S)
    for i in range(H.dim):
        for j in range(H.dim):
            prod = H.mul_basis(i, j)
            if i in inS and j in inS:
                if any(w not in inS for w in prod):
                    return {"valid": False, "reason": f"span not closed under product at {(i, j)}"}
            elif any(w in inS for w in prod):
                return {"valid": False, "reason": f"projection not multiplicative at {(i, j)}"}
    order = [i for i in S if i != 0]
    names = {i: f"s{i}" for i in order}
    table = {}
    for i in order:
        for j in order:
            prod = H.mul_basis(i, j)
            if prod:
                table[(names[i], names[j])] = {(names[w],) if w else (): c for w, c in prod.items()}
    top = max((H.deg[i] for i in order), default=0)
    sub_alg = Dgca([(names[i], H.deg[i]) for i in order], table=table, top_degree=top,
                   name=f"{H.name}|sub", validate=False)
    to_sub = {0: 0}
    for i in order:
        to_sub[i] = sub_alg.index[sub_alg._word([names[i]])]
    vals = {}
    for t, v in m3.values.items():
        if all(a in inS for a in t):
            out = {to_sub[w]: c for w, c in v.items() if w in inS}
            if out:
                vals[tuple(to_sub[a] for a in t)] = out
    f = Cochain(sub_alg, m3.arity, m3.internal, vals)
    if not delta(f).is_zero():
        return {"valid": False, "reason": "restricted cochain is not closed"}
    sol = solve_coboundary(f, shuffle=sector.shuffle, normalized=sector.normalized) if vals else ()
    return {"valid": True, "subalgebra_dim": sub_alg.dim, "restricted_nnz": len(vals),
            "nonzero": sol is None, "sector": Sector(sector.shuffle, sector.normalized).label()}


def random_sector_cochain(H: Dgca, arity: int, internal: int, sector: Sector, rng,
                          terms: int = 3, lo: int = -3, hi: int = 3) -> Cochain:
    """Random integer combination of a few constrained basis vectors."""
    space = CochainSpace(H, arity, internal, normalized=sector.normalized)
    basis = constrained_basis(space, shuffle=sector.shuffle, cyclic=sector.cyclic)
    vec: dict = {}
    if basis:
        for b in rng.sample(basis, min(terms, len(basis))):
            c = rng.randint(lo, hi)
            if c:
                vadd(vec, b, Q(c))
    return space.from_vector(vec)


def random_gauge(H: Dgca, K: int, sector: Sector, rng, terms: int = 2) -> GaugeParameter:
    comps = {k: random_sector_cochain(H, k, 1 - k, sector, rng, terms) for k in range(2, K)}
    return GaugeParameter(H, comps)


def mc_ok(m: CInfinity) -> bool:
    return not mc_check(m)
