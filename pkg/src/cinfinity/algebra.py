"""Finite-dimensional differential graded commutative algebras over Q.

Two presentations are supported:

* free mode: the free graded-commutative algebra on the generators (truncated
  above ``top_degree`` when even generators are present) with a differential
  given on generators and extended by the Leibniz rule;
* table mode: a basis listed as "generators" together with a structure
  constant table (products missing from the table are zero).

Basis elements are indexed by integers, sorted by degree; index 0 is the
unit.  Vectors are sparse dicts ``index -> mpq``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .linalg import ONE, ZERO, Echelon, Q, vadd, vscale

DEFAULT_CAP = 2 ** 20


class AlgebraError(ValueError):
    """Raised when an algebra fails validation."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


def koszul_sort(factors: Sequence[int], degrees: Sequence[int]):
    """Sort generator indices, returning (sorted tuple, sign) or None.

    The sign counts transpositions of two odd factors; a repeated odd factor
    gives None (the product vanishes).
    """
    f = list(factors)
    sign = 1
    # insertion sort so that each swap is a transposition of neighbours
    for i in range(1, len(f)):
        j = i
        while j > 0 and f[j - 1] > f[j]:
            if degrees[f[j - 1]] & 1 and degrees[f[j]] & 1:
                sign = -sign
            f[j - 1], f[j] = f[j], f[j - 1]
            j -= 1
    for a, b in zip(f, f[1:]):
        if a == b and degrees[a] & 1:
            return None
    return tuple(f), sign


class LinearMap:
    """Sparse linear map on the basis of one algebra, homogeneous of a fixed shift."""

    def __init__(self, alg: "Dgca", shift: int, cols: Mapping[int, Mapping] | None = None):
        self.alg = alg
        self.shift = shift
        self.cols = {i: dict(v) for i, v in (cols or {}).items() if v}

    def col(self, i: int) -> dict:
        return self.cols.get(i, {})

    def apply(self, v: Mapping) -> dict:
        out: dict = {}
        for i, c in v.items():
            col = self.cols.get(i)
            if col:
                vadd(out, col, c)
        return out

    def __call__(self, x):
        if isinstance(x, Element):
            return Element(self.alg, self.apply(x.vec))
        return self.apply(x)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other."""
        return LinearMap(self.alg, self.shift + other.shift,
                         {i: self.apply(v) for i, v in other.cols.items()})

    def __add__(self, other: "LinearMap") -> "LinearMap":
        cols = {i: dict(v) for i, v in self.cols.items()}
        for i, v in other.cols.items():
            vadd(cols.setdefault(i, {}), v)
        return LinearMap(self.alg, self.shift, cols)

    def __neg__(self):
        return LinearMap(self.alg, self.shift, {i: vscale(v, -ONE) for i, v in self.cols.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    def block(self, k: int) -> list[list[mpq]]:
        """Dense matrix of the degree-k block (rows: target basis of degree k+shift)."""
        src = self.alg.degree_indices(k)
        tgt = self.alg.degree_indices(k + self.shift)
        pos = {t: r for r, t in enumerate(tgt)}
        M = [[ZERO] * len(src) for _ in tgt]
        for c, i in enumerate(src):
            for t, a in self.col(i).items():
                M[pos[t]][c] = a
        return M

    @classmethod
    def identity(cls, alg: "Dgca") -> "LinearMap":
        return cls(alg, 0, {i: {i: ONE} for i in range(alg.dim)})


class Dgca:
    """A finite-dimensional DGCA over Q with optional fundamental functional."""

    def __init__(self, generators: Iterable, differential: Mapping | None = None, *,
                 table: Mapping | None = None, top_degree: int | None = None,
                 orientation: Sequence[str] | str | None = None, scale=1,
                 name: str = "A", cap: int = DEFAULT_CAP, validate: bool = True):
        gens = [g if isinstance(g, Generator) else Generator(str(g[0]), int(g[1])) for g in generators]
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise AlgebraError("generator names must be unique")
        for g in gens:
            if g.degree < 1:
                raise AlgebraError(f"generator {g.name} has degree {g.degree} < 1")
        self.name = name
        self.generators = gens
        self.gen_index = {g.name: i for i, g in enumerate(gens)}
        self.gen_deg = [g.degree for g in gens]
        self.cap = cap
        self.table_mode = table is not None
        if top_degree is None and orientation is not None:
            word = self._word(orientation)
            top_degree = sum(self.gen_deg[i] for i in word)
        if top_degree is None and not self.table_mode:
            if any(d % 2 == 0 for d in self.gen_deg):
                raise AlgebraError("even generators need a top_degree to stay finite-dimensional")
            top_degree = sum(self.gen_deg)
        if top_degree is None:
            top_degree = max(self.gen_deg, default=0)
        self.top_degree = top_degree
        self._build_basis()
        self._mul_cache: dict = {}
        if self.table_mode:
            self._table = self._read_table(table)
        self._d = self._build_d(differential or {})
        self.fundamental = None
        self.scale = Q(scale)
        self.orientation = None
        if orientation is not None:
            self._set_orientation(orientation)
        if validate:
            self.validate()

    # ------------------------------------------------------------ basis

    def _word(self, w) -> tuple[int, ...]:
        if isinstance(w, str):
            w = [t for t in w.replace("*", " ").split() if t and t != "1"]
        out = []
        for x in w:
            if isinstance(x, int):
                if not 0 <= x < len(self.generators):
                    raise AlgebraError(f"unknown generator index {x}")
                out.append(x)
            else:
                if x not in self.gen_index:
                    raise AlgebraError(f"unknown generator {x!r}")
                out.append(self.gen_index[x])
        return tuple(out)

    def _build_basis(self):
        degs = self.gen_deg
        if self.table_mode:
            mons = [()] + [(i,) for i in range(len(degs))]
        else:
            mons = []
            top = self.top_degree
            ng = len(degs)

            def rec(i, cur, deg):
                if i == ng:
                    mons.append(tuple(cur))
                    if len(mons) > self.cap:
                        raise AlgebraError(f"monomial basis exceeds the cap of {self.cap}")
                    return
                rec(i + 1, cur, deg)
                d = degs[i]
                mult = 1 if d % 2 else (top - deg) // d
                for e in range(1, mult + 1):
                    if deg + e * d > top:
                        break
                    rec(i + 1, cur + [i] * e, deg + e * d)

            rec(0, [], 0)
        if len(mons) > self.cap:
            raise AlgebraError(f"monomial basis exceeds the cap of {self.cap}")
        mdeg = lambda m: sum(degs[i] for i in m)
        mons.sort(key=lambda m: (mdeg(m), m))
        self.basis: list[tuple[int, ...]] = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self.deg = [mdeg(m) for m in mons]
        self.dim = len(mons)
        self._by_deg: dict[int, list[int]] = {}
        for i, d in enumerate(self.deg):
            self._by_deg.setdefault(d, []).append(i)

    def degree_indices(self, k: int) -> list[int]:
        return self._by_deg.get(k, [])

    def degrees(self) -> list[int]:
        return sorted(self._by_deg)

    def mono_name(self, i: int) -> str:
        m = self.basis[i]
        if not m:
            return "1"
        return "*".join(self.generators[g].name for g in m)

    # ----------------------------------------------------------- products

    def _read_table(self, table: Mapping) -> dict:
        out = {}
        for (a, b), val in table.items():
            ia = self.index[self._word([a]) if not isinstance(a, tuple) else self._word(a)]
            ib = self.index[self._word([b]) if not isinstance(b, tuple) else self._word(b)]
            out[(ia, ib)] = self._terms_to_vec(val)
        return out

    def _terms_to_vec(self, terms) -> dict:
        """Convert {word: coeff}, an Element or a vector dict into a vector."""
        if isinstance(terms, Element):
            return dict(terms.vec)
        v: dict = {}
        for w, c in terms.items():
            if isinstance(w, int):
                vadd(v, {w: Q(c)})
                continue
            word = self._word(w)
            if self.table_mode:
                if len(word) > 1:
                    raise AlgebraError("table-mode terms must be single basis elements")
                vadd(v, {self.index[word]: Q(c)})
            else:
                r = koszul_sort(word, self.gen_deg)
                if r is None or r[0] not in self.index:
                    continue
                vadd(v, {self.index[r[0]]: Q(c) * r[1]})
        return v

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        r = self._mul_cache.get(key)
        if r is not None:
            return r
        if i == 0:
            r = {j: ONE}
        elif j == 0:
            r = {i: ONE}
        elif self.deg[i] + self.deg[j] > self.top_degree:
            r = {}
        elif self.table_mode:
            r = self._table.get(key, {})
        else:
            s = koszul_sort(self.basis[i] + self.basis[j], self.gen_deg)
            if s is None or s[0] not in self.index:
                r = {}
            else:
                r = {self.index[s[0]]: mpq(s[1])}
        self._mul_cache[key] = r
        return r

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.mul_basis(i, j)
                if p:
                    vadd(out, p, a * b)
        return out

    # -------------------------------------------------------- differential

    def _build_d(self, differential: Mapping) -> LinearMap:
        dg: dict[int, dict] = {}
        for g, val in differential.items():
            gi = self._word([g])[0] if not isinstance(g, int) else g
            v = self._terms_to_vec(val)
            for t in v:
                if self.deg[t] != self.gen_deg[gi] + 1:
                    raise AlgebraError(f"d({self.generators[gi].name}) is not homogeneous of degree "
                                       f"{self.gen_deg[gi] + 1}")
            if v:
                dg[gi] = v
        cols: dict[int, dict] = {}
        if self.table_mode:
            for gi, v in dg.items():
                cols[self.index[(gi,)]] = v
            return LinearMap(self, 1, cols)
        for idx, m in enumerate(self.basis):
            out: dict = {}
            sign_deg = 0
            for p, g in enumerate(m):
                dgv = dg.get(g)
                if dgv:
                    # sub-words of canonical monomials are canonical
                    left = self.index[m[:p]]
                    right = self.index[m[p + 1:]]
                    term = self.mul_vec(self.mul_vec({left: ONE}, dgv), {right: ONE})
                    vadd(out, term, -ONE if sign_deg & 1 else ONE)
                sign_deg += self.gen_deg[g]
            if out:
                cols[idx] = out
        return LinearMap(self, 1, cols)

    @property
    def d(self) -> LinearMap:
        return self._d

    def d_vec(self, v: Mapping) -> dict:
        return self._d.apply(v)

    # ---------------------------------------------------------- pairing

    def _set_orientation(self, orientation):
        word = self._word(orientation)
        if self.table_mode:
            if len(word) != 1:
                raise AlgebraError("orientation must be a single basis element in table mode")
            self.orientation = self.index[word]
            self._orient_sign = 1
        else:
            r = koszul_sort(word, self.gen_deg)
            if r is None or r[0] not in self.index:
                raise AlgebraError("orientation monomial vanishes")
            self.orientation = self.index[r[0]]
            self._orient_sign = r[1]
        self.fundamental = True
        if self.deg[self.orientation] != self.top_degree:
            raise AlgebraError("orientation monomial is not of top degree")

    @property
    def has_pairing(self) -> bool:
        return self.fundamental is not None

    def integrate_vec(self, v: Mapping) -> mpq:
        if not self.has_pairing:
            raise AlgebraError("no fundamental functional")
        c = v.get(self.orientation, ZERO)
        return self.scale * c * self._orient_sign

    def pair_basis(self, i: int, j: int) -> mpq:
        if self.deg[i] + self.deg[j] != self.top_degree:
            return ZERO
        return self.integrate_vec(self.mul_basis(i, j))

    def pair_vec(self, u: Mapping, v: Mapping) -> mpq:
        if not self.has_pairing:
            raise AlgebraError("no fundamental functional")
        s = ZERO
        n = self.top_degree
        for i, a in u.items():
            for j, b in v.items():
                if self.deg[i] + self.deg[j] == n:
                    p = self.pair_basis(i, j)
                    if p:
                        s += a * b * p
        return s

    # ---------------------------------------------------------- elements

    def element(self, terms=None) -> "Element":
        if terms is None:
            return Element(self, {})
        if isinstance(terms, str):
            from .specfile import parse_expression
            terms = parse_expression(terms, self)
        return Element(self, self._terms_to_vec(terms))

    def one(self) -> "Element":
        return Element(self, {0: ONE})

    def gen(self, name: str) -> "Element":
        return self.element({(name,): 1})

    def basis_element(self, i: int) -> "Element":
        return Element(self, {i: ONE})

    def __getitem__(self, name) -> "Element":
        return self.element(name) if isinstance(name, str) and (" " in name or "*" in name) else self.gen(name)

    # --------------------------------------------------------- validation

    def validation_report(self) -> list[str]:
        errs = []
        dd = self._d
        for i in range(self.dim):
            v = dd.apply(dd.col(i))
            if v:
                errs.append(f"d∘d ≠ 0 on {self.mono_name(i)}")
                break
        if self.table_mode:
            errs += self._table_report()
        if self.has_pairing:
            for i in self.degree_indices(self.top_degree - 1):
                if self.integrate_vec(dd.col(i)):
                    errs.append(f"∫∘d ≠ 0 on {self.mono_name(i)}")
                    break
        deg0 = self.degree_indices(0)
        if deg0 != [0]:
            errs.append("degree-0 component is not spanned by the unit")
        return errs

    def _table_report(self) -> list[str]:
        errs = []
        n = self.dim
        for (i, j), v in self._table.items():
            for t in v:
                if self.deg[t] != self.deg[i] + self.deg[j]:
                    errs.append(f"product {self.mono_name(i)}·{self.mono_name(j)} not homogeneous")
                    return errs
        for i in range(n):
            for j in range(n):
                a = self.mul_basis(i, j)
                b = self.mul_basis(j, i)
                s = -ONE if (self.deg[i] * self.deg[j]) & 1 else ONE
                if vadd(dict(a), b, -s):
                    errs.append(f"graded commutativity fails on {self.mono_name(i)}, {self.mono_name(j)}")
                    return errs
        for i in range(1, n):
            for j in range(1, n):
                ij = self.mul_basis(i, j)
                for k in range(1, n):
                    if self.deg[i] + self.deg[j] + self.deg[k] > self.top_degree:
                        continue
                    lhs = self.mul_vec(ij, {k: ONE})
                    rhs = self.mul_vec({i: ONE}, self.mul_basis(j, k))
                    if vadd(lhs, rhs, -ONE):
                        errs.append(f"associativity fails on {self.mono_name(i)}, {self.mono_name(j)}, "
                                    f"{self.mono_name(k)}")
                        return errs
        if not self._d.is_zero():
            for i in range(n):
                for j in range(n):
                    lhs = self.d_vec(self.mul_basis(i, j))
                    rhs = self.mul_vec(self._d.col(i), {j: ONE})
                    s = -ONE if self.deg[i] & 1 else ONE
                    vadd(rhs, self.mul_vec({i: ONE}, self._d.col(j)), s)
                    if vadd(lhs, rhs, -ONE):
                        errs.append(f"Leibniz rule fails on {self.mono_name(i)}, {self.mono_name(j)}")
                        return errs
        return errs

    def validate(self):
        errs = self.validation_report()
        if errs:
            raise AlgebraError("; ".join(errs))

    def __repr__(self):
        return f"Dgca({self.name!r}, generators={[(g.name, g.degree) for g in self.generators]}, dim={self.dim})"


class Element:
    """Sparse rational combination of basis monomials of one algebra."""

    __slots__ = ("alg", "vec")

    def __init__(self, alg: Dgca, vec: Mapping):
        self.alg = alg
        self.vec = {i: mpq(c) for i, c in vec.items() if c}

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.alg is not self.alg:
                raise ValueError("elements of different algebras")
            return other
        return Element(self.alg, {0: Q(other)})

    def __add__(self, other):
        o = self._coerce(other)
        return Element(self.alg, vadd(dict(self.vec), o.vec))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, vscale(self.vec, -ONE))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return Element(self.alg, vscale(self.vec, Q(other)))

    def __rmul__(self, other):
        return Element(self.alg, vscale(self.vec, Q(other)))

    def __eq__(self, other):
        if isinstance(other, Element):
            return other.alg is self.alg and self.vec == other.vec
        if other == 0:
            return not self.vec
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def __bool__(self):
        return bool(self.vec)

    def is_zero(self) -> bool:
        return not self.vec

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero or inhomogeneous."""
        ds = {self.alg.deg[i] for i in self.vec}
        return ds.pop() if len(ds) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({self.alg.deg[i] for i in self.vec}) <= 1

    def d(self) -> "Element":
        return apply_d(self.alg, self)

    def terms(self) -> dict[str, mpq]:
        return {self.alg.mono_name(i): c for i, c in sorted(self.vec.items())}

    def __repr__(self):
        if not self.vec:
            return "0"
        out = []
        for i, c in sorted(self.vec.items()):
            name = self.alg.mono_name(i)
            if c == 1:
                s = name
            elif c == -1:
                s = "-" + name
            elif name == "1":
                s = str(c)
            else:
                s = f"{c}*{name}"
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")


# -------------------------------------------------------------- operations

def canonicalize(alg: Dgca, factors: Sequence):
    """Canonical monomial of a word of generators: (monomial tuple, sign) or None."""
    word = alg._word(factors)
    return koszul_sort(word, alg.gen_deg)


def multiply(x: Element, y: Element) -> Element:
    if x.alg is not y.alg:
        raise ValueError("elements of different algebras")
    return Element(x.alg, x.alg.mul_vec(x.vec, y.vec))


def apply_d(alg: Dgca, x: Element) -> Element:
    return Element(alg, alg.d_vec(x.vec))


def pair(alg: Dgca, x: Element, y: Element) -> mpq:
    return alg.pair_vec(x.vec, y.vec)


def integrate(alg: Dgca, x: Element) -> mpq:
    return alg.integrate_vec(x.vec)


@dataclass
class CohomologyBasis:
    """Representatives of H^k and a way to read coordinates of closed elements."""

    degree: int
    representatives: list[Element]
    _ech: Echelon
    _nreps: int

    def coordinates(self, x: Element) -> list[mpq]:
        """Coordinates of the class of a closed degree-k element."""
        alg = x.alg
        if alg.d_vec(x.vec):
            raise ValueError("element is not closed")
        # columns (0, i) hold ambient coordinates, (1, r) tag representative r
        v = self._ech.reduce({(0, i): c for i, c in x.vec.items()})
        coords = [ZERO] * self._nreps
        for key, c in v.items():
            if key[0] == 1:
                coords[key[1]] = -c
            else:
                raise ValueError("element not in ker d")
        return coords


def cohomology_basis(alg: Dgca, k: int) -> CohomologyBasis:
    """Representatives of ker d / im d in degree k.

    Representatives are chosen greedily among images of basis monomials of
    the kernel, in basis order, so monomial classes come out as monomials.
    """
    idx = alg.degree_indices(k)
    from .linalg import kernel as _kernel
    tgt = alg.degree_indices(k + 1)
    tpos = {t: p for p, t in enumerate(tgt)}
    mat = [dict() for _ in tgt]
    for p, i in enumerate(idx):
        for t, a in alg.d.col(i).items():
            mat[tpos[t]][p] = a
    ker = _kernel(mat, len(idx))
    ker_vecs = [{idx[p]: c for p, c in v.items()} for v in ker]
    exact = Echelon()
    for i in alg.degree_indices(k - 1):
        exact.add(alg.d.col(i))
    reps = []
    # prefer monomials: sort kernel vectors by support size
    for v in sorted(ker_vecs, key=lambda v: (len(v), sorted(v))):
        if exact.add(v):
            reps.append(Element(alg, v))
    # echelon used for coordinates: exact part first, tags mark representative combos
    ech = Echelon()
    for i in alg.degree_indices(k - 1):
        ech.add({(0, t): a for t, a in alg.d.col(i).items()})
    for r, rep in enumerate(reps):
        w = {(0, t): a for t, a in rep.vec.items()}
        w[(1, r)] = ONE
        ech.add(w)
    return CohomologyBasis(k, reps, ech, len(reps))


def betti(alg: Dgca) -> dict[int, int]:
    return {k: len(cohomology_basis(alg, k).representatives) for k in alg.degrees()}
