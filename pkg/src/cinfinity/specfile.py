"""Algebra-spec text format.

Example::

    name: heisenberg
    generators: a:1, b:1, c:1
    r: 1
    [differential]
    c: a*b
    [pairing]
    top_degree: 3
    orientation: a*b*c
    scale: 1
    [homotopy]
    a*b: c

Expressions follow ``expr := term ('+' term)*``, ``term := [rational]
('*'? generator)+`` and ``rational := integer ('/' posint)?``; juxtaposition
is the graded product.  A bare rational denotes a multiple of the unit and a
lone ``-`` in front of a generator means ``-1``.  A ``[products]`` section
switches to table mode: the generators are then a basis and ``x*y: expr``
lines give the structure constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from gmpy2 import mpq

from .algebra import Dgca
from .linalg import qstr


class SpecError(ValueError):
    """Syntax or consistency error in a spec, with position."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[+\-*/]))")


def parse_terms(text: str, line: int = 1, col0: int = 1) -> list[tuple[mpq, tuple[str, ...]]]:
    """Parse an expression into a list of (coefficient, word) terms."""
    toks = []
    pos = 0
    s = text.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise SpecError(f"unexpected character {s[pos:].strip()[:1]!r}", line, col0 + pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    if not toks:
        raise SpecError("empty expression", line, col0)
    if toks == [("num", "0", toks[0][2])]:
        return []
    terms = []
    i = 0
    n = len(toks)

    def err(msg, j):
        c = toks[j][2] if j < n else col0 + len(s)
        raise SpecError(msg, line, c)

    while True:
        sign = 1
        while i < n and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        coeff = mpq(sign)
        seen_num = False
        if i < n and toks[i][0] == "num":
            num = int(toks[i][1])
            i += 1
            den = 1
            if i < n and toks[i] [0:2] == ("op", "/"):
                i += 1
                if i >= n or toks[i][0] != "num":
                    err("expected a positive integer denominator", i)
                den = int(toks[i][1])
                if den == 0:
                    err("zero denominator", i)
                i += 1
            coeff *= mpq(num, den)
            seen_num = True
        word = []
        while i < n:
            if toks[i][0:2] == ("op", "*"):
                i += 1
                if i >= n or toks[i][0] != "id":
                    err("expected a generator after '*'", i)
            if i < n and toks[i][0] == "id":
                word.append(toks[i][1])
                i += 1
                continue
            if i < n and toks[i][0] == "num" and toks[i][1] == "1" and not word:
                i += 1
                continue
            break
        if not word and not seen_num:
            err("expected a term", i)
        terms.append((coeff, tuple(word)))
        if i >= n:
            break
        if toks[i][0:2] in (("op", "+"), ("op", "-")):
            if toks[i][1] == "+":
                i += 1
            continue
        err(f"unexpected token {toks[i][1]!r}", i)
    return terms


def parse_expression(text: str, alg: Dgca | None = None) -> dict:
    """Expression to {word: coeff}; checks generator names against ``alg``."""
    out: dict = {}
    for c, w in parse_terms(text):
        if alg is not None:
            for g in w:
                if g not in alg.gen_index:
                    raise SpecError(f"unknown generator {g!r}")
        out[w] = out.get(w, mpq(0)) + c
    return {w: c for w, c in out.items() if c}


def format_terms(terms: Mapping) -> str:
    """Inverse of :func:`parse_expression` for {word: coeff} dicts."""
    parts = []
    for w, c in terms.items():
        c = mpq(c)
        if not c:
            continue
        if isinstance(w, str):
            w = tuple(x for x in w.replace("*", " ").split() if x != "1")
        mono = "*".join(w)
        num, den = c.numerator, c.denominator
        coef = f"{num}" if den == 1 else f"{num}/{den}"
        if not mono:
            parts.append(coef)
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{coef} {mono}")
    return " + ".join(parts) if parts else "0"


@dataclass
class AlgebraSpec:
    name: str
    generators: list[tuple[str, int]]
    differential: dict[str, str] = field(default_factory=dict)
    products: dict[tuple[str, str], str] | None = None
    pairing: dict | None = None
    homotopy: dict[str, str] | None = None
    r: int | None = None
    top_degree: int | None = None

    @property
    def table_mode(self) -> bool:
        return self.products is not None


_SECTIONS = ("differential", "products", "pairing", "homotopy")


def parse_spec(text: str) -> AlgebraSpec:
    name = None
    gens = None
    diff: dict = {}
    products = None
    pairing = None
    homotopy = None
    r = None
    top = None
    section = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SpecError("unterminated section header", ln, indent + 1)
            section = stripped[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise SpecError(f"unknown section {section!r}", ln, indent + 2)
            if section == "products" and products is None:
                products = {}
            if section == "pairing" and pairing is None:
                pairing = {}
            if section == "homotopy" and homotopy is None:
                homotopy = {}
            continue
        if ":" not in stripped:
            raise SpecError("expected 'key: value'", ln, indent + 1)
        key, val = stripped.split(":", 1)
        key = key.strip()
        vcol = indent + len(stripped) - len(val.lstrip()) + 1
        val = val.strip()
        if section is None:
            if key == "name":
                name = val
            elif key == "generators":
                gens = []
                for item in filter(None, (x.strip() for x in val.split(","))):
                    m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9']*)\s*:\s*(-?\d+)", item)
                    if not m:
                        raise SpecError(f"bad generator declaration {item!r}", ln, vcol)
                    gens.append((m.group(1), int(m.group(2))))
            elif key == "r":
                r = _int(val, ln, vcol)
            elif key == "top_degree":
                top = _int(val, ln, vcol)
            else:
                raise SpecError(f"unknown key {key!r}", ln, indent + 1)
            continue
        if section == "differential":
            parse_terms(val, ln, vcol)
            diff[key] = val
        elif section == "products":
            parts = [p for p in re.split(r"[\s*]+", key) if p]
            if len(parts) != 2:
                raise SpecError("product keys must be 'x*y'", ln, indent + 1)
            parse_terms(val, ln, vcol)
            products[(parts[0], parts[1])] = val
        elif section == "pairing":
            if key == "top_degree":
                pairing[key] = _int(val, ln, vcol)
            elif key == "orientation":
                parse_terms(val, ln, vcol)
                pairing[key] = val
            elif key == "scale":
                try:
                    pairing[key] = qstr(mpq(val))
                except ValueError:
                    raise SpecError(f"bad rational {val!r}", ln, vcol) from None
            else:
                raise SpecError(f"unknown pairing key {key!r}", ln, indent + 1)
        elif section == "homotopy":
            parse_terms(key, ln, indent + 1)
            parse_terms(val, ln, vcol)
            homotopy[key] = val
    if gens is None:
        raise SpecError("missing 'generators'")
    spec = AlgebraSpec(name or "A", gens, diff, products, pairing, homotopy, r, top)
    _check_names(spec)
    return spec


def _int(val, ln, col):
    try:
        return int(val)
    except ValueError:
        raise SpecError(f"expected an integer, got {val!r}", ln, col) from None


def _check_names(spec: AlgebraSpec):
    known = {g for g, _ in spec.generators}
    deg = dict(spec.generators)

    def words(expr):
        return [w for _, w in parse_terms(expr)]

    for g, expr in spec.differential.items():
        if g not in known:
            raise SpecError(f"differential of unknown generator {g!r}")
        for w in words(expr):
            for x in w:
                if x not in known:
                    raise SpecError(f"unknown generator {x!r} in d({g})")
            if sum(deg[x] for x in w) != deg[g] + 1:
                raise SpecError(f"degree inconsistency in d({g}): term {'*'.join(w) or '1'}")
    for (a, b), expr in (spec.products or {}).items():
        for x in (a, b):
            if x not in known:
                raise SpecError(f"unknown generator {x!r} in products")
        for w in words(expr):
            if len(w) != 1 or w[0] not in known:
                raise SpecError(f"product {a}*{b} must be a combination of basis elements")
            if deg[w[0]] != deg[a] + deg[b]:
                raise SpecError(f"degree inconsistency in {a}*{b}")
    for key, expr in (spec.homotopy or {}).items():
        (_, kw), = parse_terms(key)
        for w in [kw] + words(expr):
            for x in w:
                if x not in known:
                    raise SpecError(f"unknown generator {x!r} in homotopy")
        for w in words(expr):
            if sum(deg[x] for x in w) != sum(deg[x] for x in kw) - 1:
                raise SpecError(f"degree inconsistency in homotopy of {key}")
    if spec.pairing:
        o = spec.pairing.get("orientation")
        if o:
            for w in words(o):
                for x in w:
                    if x not in known:
                        raise SpecError(f"unknown generator {x!r} in orientation")


def emit_spec(spec: AlgebraSpec) -> str:
    lines = [f"name: {spec.name}",
             "generators: " + ", ".join(f"{g}:{d}" for g, d in spec.generators)]
    if spec.r is not None:
        lines.append(f"r: {spec.r}")
    if spec.top_degree is not None:
        lines.append(f"top_degree: {spec.top_degree}")
    if spec.differential:
        lines.append("[differential]")
        lines += [f"{g}: {e}" for g, e in spec.differential.items()]
    if spec.products is not None:
        lines.append("[products]")
        lines += [f"{a}*{b}: {e}" for (a, b), e in spec.products.items()]
    if spec.pairing is not None:
        lines.append("[pairing]")
        for k in ("top_degree", "orientation", "scale"):
            if k in spec.pairing:
                lines.append(f"{k}: {spec.pairing[k]}")
    if spec.homotopy is not None:
        lines.append("[homotopy]")
        lines += [f"{k}: {e}" for k, e in spec.homotopy.items()]
    return "\n".join(lines) + "\n"


def build_algebra(spec: AlgebraSpec, cap: int | None = None) -> Dgca:
    """Construct (and validate) the Dgca described by a spec."""
    kw = {}
    if cap is not None:
        kw["cap"] = cap
    diff = {g: parse_expression(e) for g, e in spec.differential.items()}
    table = None
    if spec.products is not None:
        table = {ab: parse_expression(e) for ab, e in spec.products.items()}
    orientation = None
    scale = 1
    top = spec.top_degree
    if spec.pairing is not None:
        if "orientation" in spec.pairing:
            terms = parse_terms(spec.pairing["orientation"])
            if len(terms) != 1:
                raise SpecError("orientation must be a single monomial")
            c, w = terms[0]
            orientation = w
            scale = mpq(spec.pairing.get("scale", 1)) * c
        else:
            orientation = tuple(g for g, _ in spec.generators)
            scale = mpq(spec.pairing.get("scale", 1))
        if "top_degree" in spec.pairing:
            top = spec.pairing["top_degree"]
    A = Dgca(spec.generators, diff, table=table, top_degree=top, orientation=orientation,
             scale=scale, name=spec.name, **kw)
    return A


def build_contraction(spec: AlgebraSpec, alg: Dgca, mode: str = "auto"):
    from .hodge import hodge_from_inner_product, hodge_from_table
    if mode == "given":
        if spec.homotopy is None:
            raise SpecError("spec has no [homotopy] section")
        table = {}
        for key, expr in spec.homotopy.items():
            (c, w), = parse_terms(key)
            vals = parse_expression(expr)
            table[w] = {k: v / c for k, v in vals.items()}
        return hodge_from_table(alg, table)
    return hodge_from_inner_product(alg)


def spec_from_algebra(alg: Dgca, r: int | None = None, contraction=None) -> AlgebraSpec:
    """Spec describing an existing free-mode or table-mode algebra."""
    gens = [(g.name, g.degree) for g in alg.generators]

    def vec_terms(v):
        return {tuple(alg.generators[g].name for g in alg.basis[i]): c for i, c in sorted(v.items())}

    diff = {}
    for gi, g in enumerate(alg.generators):
        col = alg.d.col(alg.index[(gi,)])
        if col:
            diff[g.name] = format_terms(vec_terms(col))
    products = None
    if alg.table_mode:
        products = {}
        for (i, j), v in sorted(alg._table.items()):
            if v:
                products[(alg.mono_name(i), alg.mono_name(j))] = format_terms(vec_terms(v))
    pairing = None
    if alg.has_pairing:
        pairing = {"top_degree": alg.top_degree,
                   "orientation": alg.mono_name(alg.orientation),
                   "scale": qstr(alg.scale * alg._orient_sign)}
    homotopy = None
    if contraction is not None:
        homotopy = {}
        for i, v in sorted(contraction.d_minus.cols.items()):
            homotopy[alg.mono_name(i)] = format_terms(vec_terms(v))
    top = alg.top_degree if alg.table_mode or any(d % 2 == 0 for d in alg.gen_deg) else None
    if pairing is not None:
        top = None
    return AlgebraSpec(alg.name, gens, diff, products, pairing, homotopy, r, top)
