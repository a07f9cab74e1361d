"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``column -> mpq`` with no stored zeros; matrices are lists
of such rows.  Elimination is plain Gaussian elimination in exact arithmetic.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce ints, Fractions, strings like '3/4' and mpq to an mpq."""
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def qstr(x) -> str:
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- vectors

def vadd(u: dict, v: Mapping, c=ONE) -> dict:
    """u += c*v in place; returns u."""
    if not c:
        return u
    for k, x in v.items():
        y = u.get(k, ZERO) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)
    return u


def vscale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: Mapping) -> dict:
    return {k: mpq(x) for k, x in v.items() if x}


def vsub(u: Mapping, v: Mapping) -> dict:
    return vadd(dict(u), v, -ONE)


def dense_to_rows(mat: Iterable[Iterable]) -> list[dict]:
    return [{j: Q(x) for j, x in enumerate(row) if x} for row in mat]


def matvec(rows: list[Mapping], x: Mapping) -> dict:
    out = {}
    for i, row in enumerate(rows):
        s = ZERO
        for j, a in row.items():
            b = x.get(j)
            if b:
                s += a * b
        if s:
            out[i] = s
    return out


# ----------------------------------------------------------- elimination

class Echelon:
    """Incrementally maintained row-echelon form.

    Each stored row is normalised with leading coefficient 1 at a column no
    other stored row leads with.  Column order is the natural order of the
    keys, so pivots are always the leftmost independent columns and results do
    not depend on the order in which rows are inserted.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> row
        self._sorted = None

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Reduce v against the stored rows (leading terms only)."""
        v = dict(v)
        rows = self.rows
        while v:
            done = True
            for c in sorted(k for k in v if k in rows):
                a = v.get(c)
                if a:
                    vadd(v, rows[c], -a)
                    done = False
            if done:
                break
        return v

    def add(self, v: Mapping) -> bool:
        """Insert v; returns True when it was independent."""
        v = self.reduce(v)
        if not v:
            return False
        c = min(v)
        a = v[c]
        if a != ONE:
            inv = ONE / a
            v = {k: x * inv for k, x in v.items()}
        self.rows[c] = v
        self._sorted = None
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def pivots(self) -> list:
        if self._sorted is None:
            self._sorted = sorted(self.rows)
        return self._sorted

    def back_substitute(self, rhs: Mapping, free: Mapping | None = None) -> dict:
        """Solve for the pivot variables given a right hand side per pivot.

        ``rhs`` maps pivot column -> value; ``free`` holds values of free
        variables (default zero).
        """
        x = dict(free or {})
        for c in reversed(self.pivots()):
            row = self.rows[c]
            s = rhs.get(c, ZERO)
            for j, a in row.items():
                if j != c:
                    b = x.get(j)
                    if b:
                        s -= a * b
            if s:
                x[c] = s
            else:
                x.pop(c, None)
        return x


def solve_exact(A, b, ncols: int | None = None):
    """Solve A x = b exactly.

    ``A`` is a list of sparse rows (dicts) or a dense list of lists; ``b`` a
    sparse dict or dense list indexed by row.  Returns ``(x, kernel)`` where
    ``x`` is the particular solution with zeros on free variables (``None``
    when inconsistent) and ``kernel`` a basis of the null space, each as a
    sparse dict.
    """
    if A and not isinstance(A[0], Mapping):
        dense = [list(r) for r in A]
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        if any(len(r) != ncols for r in dense):
            raise ValueError("ragged matrix")
        A = dense_to_rows(dense)
    if not isinstance(b, Mapping):
        b = list(b)
        if len(b) != len(A):
            raise ValueError(f"shape mismatch: {len(A)} rows but rhs of length {len(b)}")
        b = {i: Q(x) for i, x in enumerate(b) if x}
    else:
        if any(i >= len(A) or i < 0 for i in b):
            raise ValueError("rhs index out of range")
    if ncols is None:
        ncols = 1 + max((max(r) for r in A if r), default=-1)
    aug = ncols  # augmented column index
    ech = Echelon()
    for i, row in enumerate(A):
        if any(j >= ncols or j < 0 for j in row):
            raise ValueError("column index out of range")
        r = dict(row)
        bi = b.get(i)
        if bi:
            r[aug] = Q(bi)
        ech.add(r)
    if aug in ech.rows:
        x = None
    else:
        # row reads x_c + sum a_j x_j = row[aug]
        rhs = {c: row[aug] for c, row in ech.rows.items() if aug in row}
        x = ech.back_substitute(rhs)
        x.pop(aug, None)
    pivots = set(ech.rows)
    kernel = []
    # strip the augmented column when solving the homogeneous system
    hom = Echelon()
    hom.rows = {c: {j: a for j, a in row.items() if j != aug} for c, row in ech.rows.items() if c != aug}
    for f in range(ncols):
        if f in pivots:
            continue
        kernel.append(hom.back_substitute({}, {f: ONE}))
    return x, kernel


def rank(rows: Iterable[Mapping]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return len(ech)


def kernel(rows: list[Mapping], ncols: int) -> list[dict]:
    return solve_exact(rows, {}, ncols)[1]


def span_basis(vectors: Iterable[Mapping]) -> Echelon:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech


def transpose(rows: list[Mapping], ncols: int) -> list[dict]:
    cols = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, a in r.items():
            cols[j][i] = a
    return cols


def reduced_basis(vectors: Iterable[Mapping]) -> list[dict]:
    """Fully reduced row-echelon basis of the span, ordered by pivot.

    Each returned vector has coefficient 1 at its pivot (its smallest key) and
    every other returned vector vanishes there.
    """
    ech = span_basis(vectors)
    piv = ech.pivots()
    rows = ech.rows
    for c in reversed(piv):
        row = rows[c]
        for c2 in piv:
            if c2 >= c:
                break
            a = rows[c2].get(c)
            if a:
                vadd(rows[c2], row, -a)
    return [rows[c] for c in piv]


def inverse(M: list[list]) -> list[list[mpq]]:
    """Inverse of a dense square matrix (ValueError when singular)."""
    n = len(M)
    A = [[Q(x) for x in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        p = next((r for r in range(col, n) if A[r][col]), None)
        if p is None:
            raise ValueError("singular matrix")
        A[col], A[p] = A[p], A[col]
        inv = ONE / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]
