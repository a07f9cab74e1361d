"""Command-line front end.

    cinfinity validate SPEC
    cinfinity transfer SPEC [--max-arity K] [--homotopy auto|given]
    cinfinity obstruction SPEC SPEC2 [--level 3|4]
    cinfinity formality SPEC [--r R] [--n N]
    cinfinity example fm8|heisenberg

Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 hypothesis
violation, 5 internal inconsistency alarm.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .algebra import AlgebraError, Dgca
from .harrison import CInfinity, Cochain, max_cyclic_arity, mc_check
from .hodge import orthogonality_report, validate_hodge
from .linalg import qstr
from .obstruction import (ObstructionError, choose_sector, isotopy_mod3, isotopy_mod4,
                          restriction_certificate)
from .specfile import AlgebraSpec, SpecError, build_algebra, build_contraction, parse_spec
from .transfer import (TransferResult, check_cyclicity, shuffle_report, transfer,
                       unitality_report)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_HYPOTHESIS, EXIT_ALARM = 0, 2, 3, 4, 5


class CliFailure(Exception):
    def __init__(self, code: int, msg: str, report: dict | None = None):
        super().__init__(msg)
        self.code = code
        self.report = report or {}


# ------------------------------------------------------------- helpers

def load_spec(path: str) -> AlgebraSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliFailure(EXIT_PARSE, f"cannot read {path}: {e}")
    try:
        return parse_spec(text)
    except SpecError as e:
        raise CliFailure(EXIT_PARSE, f"{path}: {e}")


def make_algebra(spec: AlgebraSpec, cap: int | None = None) -> Dgca:
    try:
        return build_algebra(spec, cap)
    except SpecError as e:
        raise CliFailure(EXIT_PARSE, str(e))
    except AlgebraError as e:
        raise CliFailure(EXIT_VALIDATION, f"invalid algebra: {e}")


def make_contraction(spec: AlgebraSpec, A: Dgca, mode: str):
    try:
        C = build_contraction(spec, A, mode)
    except SpecError as e:
        raise CliFailure(EXIT_PARSE, str(e))
    except (AlgebraError, ValueError) as e:
        raise CliFailure(EXIT_VALIDATION, f"homotopy: {e}")
    rep = validate_hodge(C)
    if rep:
        raise CliFailure(EXIT_VALIDATION, "Hodge axioms fail: " + "; ".join(rep[:5]),
                         {"hodge": rep})
    return C


def default_homotopy(spec: AlgebraSpec, mode: str | None) -> str:
    if mode:
        return mode
    return "given" if spec.homotopy is not None else "auto"


def cochain_table(c: Cochain, names: Sequence[str]) -> dict:
    return c.describe(list(names))


def structure_report(T: TransferResult) -> dict:
    names = T.H.labels
    return {f"m{k}": cochain_table(T.m[k], names) for k in range(3, T.arity_max + 1)}


def transfer_checks(C, T: TransferResult) -> dict:
    out = {"mc": mc_check(T.m), "unitality": unitality_report(T), "shuffle": shuffle_report(T)}
    A = C.algebra
    if A.has_pairing:
        orth = orthogonality_report(C)
        out["orthogonality"] = orth
        out["cyclicity"] = check_cyclicity(C, T) if not orth else "not claimed (orthogonality fails)"
    return out


def _checks_pass(checks: dict) -> bool:
    return all(not v for v in checks.values() if isinstance(v, list))


def cohomology_signature(H: Dgca) -> tuple:
    prods = tuple(tuple(sorted(H.mul_basis(i, j).items())) for i in range(H.dim) for j in range(H.dim))
    pair = None
    if H.has_pairing:
        pair = tuple(H.pair_basis(i, j) for i in range(H.dim) for j in range(H.dim))
    return (tuple(H.deg), prods, pair)


def transport(m: CInfinity, H: Dgca) -> CInfinity:
    """Re-home a structure on an identical copy of its cohomology algebra."""
    return CInfinity(H, {k: Cochain(H, k, 2 - k, c.values) for k, c in m.components.items()}, m.K)


# ------------------------------------------------------------- commands

def cmd_validate(spec: AlgebraSpec, args) -> dict:
    A = make_algebra(spec, args.cap)
    rep = {"command": "validate", "name": spec.name, "dimension": A.dim,
           "top_degree": A.top_degree, "poincare": A.has_pairing,
           "algebra": A.validation_report()}
    C = make_contraction(spec, A, default_homotopy(spec, args.homotopy))
    rep["hodge"] = validate_hodge(C)
    if A.has_pairing:
        rep["orthogonality"] = orthogonality_report(C)
    rep["betti"] = {str(d): C.harmonic_deg.count(d) for d in sorted(set(C.harmonic_deg))}
    rep["ok"] = not rep["algebra"] and not rep["hodge"]
    return rep


def run_transfer(spec: AlgebraSpec, args, K: int):
    A = make_algebra(spec, args.cap)
    C = make_contraction(spec, A, default_homotopy(spec, args.homotopy))
    T = transfer(C, K)
    return A, C, T


def cmd_transfer(spec: AlgebraSpec, args) -> dict:
    K = args.max_arity or 4
    A, C, T = run_transfer(spec, args, K)
    checks = transfer_checks(C, T)
    rep = {"command": "transfer", "name": spec.name, "max_arity": K,
           "homotopy": default_homotopy(spec, args.homotopy),
           "cohomology_basis": T.H.labels, "degrees": list(T.H.deg),
           "structure": structure_report(T), "checks": checks,
           "flags": dict(T.flags)}
    rep["ok"] = _checks_pass(checks)
    if checks["mc"]:
        raise CliFailure(EXIT_ALARM, "transferred structure violates the MC equation", rep)
    return rep


def cmd_obstruction(spec: AlgebraSpec, spec2: AlgebraSpec, args) -> dict:
    level = args.level or 3
    K = max(level, args.max_arity or level)
    _, C1, T1 = run_transfer(spec, args, K)
    _, C2, T2 = run_transfer(spec2, args, K)
    H = T1.H
    if cohomology_signature(H) != cohomology_signature(T2.H):
        raise CliFailure(EXIT_HYPOTHESIS,
                         "the two specs do not have identical cohomology algebras in their harmonic bases")
    m, mp = T1.m, transport(T2.m, H)
    sector = choose_sector(H, args.cyclic_sector == "on")
    rep = {"command": "obstruction", "level": level, "sector": sector.label(),
           "names": [spec.name, spec2.name], "cohomology_basis": H.labels}
    v3 = isotopy_mod3(m, mp, sector)
    rep["isotopic_mod_3"] = v3.verdict
    if v3.isotopic:
        rep["phi2"] = cochain_table(v3.witness[2], H.labels)
    if level >= 4:
        if not v3.isotopic:
            rep["isotopic_mod_4"] = "no"
            rep["note"] = "already obstructed at level 3"
        else:
            v4 = isotopy_mod4(m, mp, sector)
            rep["isotopic_mod_4"] = v4.verdict
            rep["kappa4"] = cochain_table(v4.obstruction.cocycle, H.labels)
            rep["notes"] = v4.notes
            if v4.isotopic:
                rep["gauge"] = {f"phi{k}": cochain_table(c, H.labels)
                                for k, c in v4.witness.components.items()}
    rep["ok"] = True
    return rep


def _connectivity(H: Dgca, r: int) -> bool:
    return all(H.deg[i] == 0 or H.deg[i] >= r for i in range(H.dim))


def _geometry_section(T: TransferResult, r: int, n: int) -> dict | None:
    """Lefschetz-based certificates in degrees 4r−1 and 4r, when applicable."""
    from .geometry import (GeometryError, build_lefschetz, formality_4r_minus_1,
                           solve_formality_4r)
    H = T.H
    if r < 2 or n not in (4 * r - 1, 4 * r) or not H.has_pairing:
        return None
    cands = H.degree_indices(n - 2 * r)
    for phi in [{i: 1} for i in cands] + ([{i: 1 for i in cands}] if len(cands) > 1 else []):
        try:
            L = build_lefschetz(H, r, n, phi)
        except GeometryError:
            continue
        try:
            if n == 4 * r - 1:
                out = formality_4r_minus_1(L, T.m[3])
            else:
                res = solve_formality_4r(L, T.m[3])
                out = res.summary()
        except GeometryError as e:
            return {"lefschetz": [H.labels[i] for i in phi], "status": f"hypothesis fails: {e}"}
        out["lefschetz"] = [H.labels[i] for i in phi]
        return out
    return {"status": "no Lefschetz element among basis candidates"}


def cmd_formality(spec: AlgebraSpec, args) -> dict:
    A = make_algebra(spec, args.cap)
    r = args.r if args.r is not None else spec.r
    n = args.n if args.n is not None else A.top_degree
    if r is None:
        r = 1
    bound = max_cyclic_arity(r, n) if r >= 2 else None
    K = args.max_arity or max(4, bound or 4)
    C = make_contraction(spec, A, default_homotopy(spec, args.homotopy))
    T = transfer(C, K)
    H = T.H
    if not _connectivity(H, r):
        raise CliFailure(EXIT_HYPOTHESIS, f"cohomology is not {r - 1}-connected")
    if A.has_pairing and H.top_degree != n:
        raise CliFailure(EXIT_HYPOTHESIS, f"top degree {H.top_degree} differs from n = {n}")
    checks = transfer_checks(C, T)
    if checks["mc"]:
        raise CliFailure(EXIT_ALARM, "transferred structure violates the MC equation")
    cyclic_ok = checks.get("cyclicity") == []
    sector = choose_sector(H, args.cyclic_sector == "on" and cyclic_ok)
    rep = {"command": "formality", "name": spec.name, "r": r, "n": n, "max_arity": K,
           "cyclic_arity_bound": bound, "sector": sector.label(), "checks": checks,
           "structure": structure_report(T)}
    cyclic_bound = bound if (sector.cyclic and bound is not None) else None
    if C.d_minus.is_zero():
        rep.update(verdict="formal", certificate="d⁻ = 0, so m_k = 0 for every k ≥ 3")
    elif all(T.m[k].is_zero() for k in range(3, K + 1)):
        if cyclic_bound is not None and cyclic_bound <= K:
            rep.update(verdict="formal", certificate=f"m_k = 0 for k ≤ {K} and cyclic cochains vanish above arity {bound}")
        else:
            rep.update(verdict="undecided", certificate=f"m_k = 0 for k ≤ {K}; higher arities not controlled")
    else:
        zero = CInfinity(H, {}, K)
        v3 = isotopy_mod3(T.m, zero, sector)
        rep["primary_obstruction"] = "zero" if v3.isotopic else "nonzero"
        if not v3.isotopic:
            rep.update(verdict="not formal", certificate="primary obstruction [m3] ≠ 0")
        elif cyclic_bound == 3:
            rep.update(verdict="formal", certificate="[m3] = 0 and cyclic cochains vanish above arity 3")
        else:
            v4 = isotopy_mod4(T.m.truncate(4), zero.truncate(4), sector)
            rep["secondary_obstruction"] = "attainable zero" if v4.isotopic else "nonzero"
            if not v4.isotopic:
                rep.update(verdict="not formal", certificate="secondary obstruction κ̃4 not attainable as 0")
            elif cyclic_bound == 4:
                rep.update(verdict="formal", certificate="[m3] = 0, κ̃4 attains 0, cyclic cochains vanish above arity 4")
            else:
                rep.update(verdict="undecided", certificate="isotopic to the formal structure modulo 4; higher levels not decided")
    geo = _geometry_section(T, r, n) if r >= 2 else None
    if geo is not None:
        rep["geometry"] = geo
    rep["ok"] = _checks_pass(checks)
    return rep


def _element_label(H: Dgca, vec: dict) -> dict:
    return {H.labels[i]: qstr(c) for i, c in sorted(vec.items())}


def example_heisenberg(args) -> dict:
    from .fixtures import heisenberg_spec
    spec = heisenberg_spec()
    A = make_algebra(spec)
    C = make_contraction(spec, A, "auto")
    T = transfer(C, 4)
    H = T.H
    idx = {l: i for i, l in enumerate(H.labels)}
    a, b = idx["a"], idx["b"]
    val = T.m[3](a, a, b)
    zero = CInfinity(H, {}, 4)
    sector = choose_sector(H, args.cyclic_sector != "off")
    v3 = isotopy_mod3(T.m, zero, sector)
    checks = transfer_checks(C, T)
    return {"command": "example", "example": "heisenberg", "cohomology_basis": H.labels,
            "m3(a,a,b)": _element_label(H, val), "primary_obstruction": "zero" if v3.isotopic else "nonzero",
            "sector": sector.label(), "isotopic_to_formal_mod_3": v3.verdict,
            "verdict": "formal" if v3.isotopic else "not formal",
            "structure": structure_report(T), "checks": checks, "ok": _checks_pass(checks)}


def fm8_m3_report(mode: str) -> dict:
    """m₃(α,β₂,β₃) for α = [μμ̄], β₂ = [νη̄], β₃ = [ν̄η] and the target θμ̄ν̄ηη̄."""
    from .fixtures import fm8_spec
    spec = fm8_spec()
    A = make_algebra(spec)
    C = make_contraction(spec, A, mode)
    T = transfer(C, 3)
    H = T.H
    idx = {l: i for i, l in enumerate(H.labels)}
    al, b2, b3 = idx["mu*mubar"], idx["nu*etabar"], idx["nubar*eta"]
    val = T.m[3](al, b2, b3)
    hat = T.hat_m(al, b2, b3)
    target = A.element({("theta", "mubar", "nubar", "eta", "etabar"): 1})
    closed = target.d().is_zero()
    # equality up to one global sign with the class of the target
    if closed:
        tc = C.coords(target.vec)
        matches = bool(val) and (val == tc or val == {k: -v for k, v in tc.items()})
    else:
        matches = False
    sub = [i for i, l in enumerate(H.labels) if all(g in ("1", "mu", "nu", "theta") for g in l.split("*"))]
    cert = restriction_certificate(T.m[3], sub)
    mu, nu = idx["mu"], idx["nu"]
    return {"homotopy": mode, "m3(alpha,beta2,beta3)": _element_label(H, val),
            "m3_nonzero": bool(val), "ambient_hat_m3": repr(hat),
            "target": repr(target), "target_closed": closed, "target_d": repr(target.d()),
            "matches_target_class": matches, "m3(mu,mu,nu)": _element_label(H, T.m[3](mu, mu, nu)),
            "restriction_certificate": cert, "mc": mc_check(T.m), "T": T}


def example_fm8(args) -> dict:
    modes = [args.homotopy] if args.homotopy else ["given", "auto"]
    runs = []
    for mode in modes:
        r = fm8_m3_report(mode)
        r.pop("T")
        runs.append(r)
    nonformal = all(r["restriction_certificate"].get("nonzero") for r in runs)
    return {"command": "example", "example": "fm8", "runs": runs,
            "criterion_m3_equals_target": all(r["matches_target_class"] for r in runs),
            "verdict": "not formal" if nonformal else "undecided",
            "certificate": "restriction of [m3] to the (mu, nu, theta) retract is not exact" if nonformal else None,
            "ok": all(not r["mc"] for r in runs),
            "regression_reproduced": all(r["matches_target_class"] for r in runs)}


def cmd_example(which: str, args) -> dict:
    if which == "heisenberg":
        return example_heisenberg(args)
    if which == "fm8":
        return example_fm8(args)
    raise CliFailure(EXIT_PARSE, f"unknown example {which!r}")


# ------------------------------------------------------------- output

def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2, default=str) + "\n"


def human(report: dict) -> str:
    lines = []
    for key in ("command", "example", "name", "names", "verdict", "certificate",
                "isotopic_mod_3", "isotopic_mod_4", "primary_obstruction",
                "secondary_obstruction", "m3(a,a,b)", "ok", "regression_reproduced"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    if "runs" in report:
        for r in report["runs"]:
            lines.append(f"[{r['homotopy']}] m3(alpha,beta2,beta3) = {r['m3(alpha,beta2,beta3)'] or 0}; "
                         f"hat m3 = {r['ambient_hat_m3']}; target closed: {r['target_closed']}; "
                         f"retract certificate nonzero: {r['restriction_certificate'].get('nonzero')}")
    if "checks" in report:
        bad = {k: v for k, v in report["checks"].items() if v}
        lines.append("checks: " + ("all passed" if not bad else json.dumps(bad, ensure_ascii=False, default=str)))
    if "geometry" in report:
        lines.append(f"geometry: {json.dumps(report['geometry'], ensure_ascii=False, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cinfinity", description="Exact C∞ transfer and formality obstructions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-arity", type=int, default=None)
    common.add_argument("--homotopy", choices=["auto", "given"], default=None)
    common.add_argument("--out", default=None, help="write the machine-readable report here")
    common.add_argument("--cyclic-sector", choices=["on", "off"], default="on")
    common.add_argument("--cap", type=int, default=None, help="monomial basis cap")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common])
    s.add_argument("spec")
    s = sub.add_parser("transfer", parents=[common])
    s.add_argument("spec")
    s = sub.add_parser("obstruction", parents=[common])
    s.add_argument("spec")
    s.add_argument("spec2")
    s.add_argument("--level", type=int, choices=[3, 4], default=3)
    s = sub.add_parser("formality", parents=[common])
    s.add_argument("spec")
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s = sub.add_parser("example", parents=[common])
    s.add_argument("which", choices=["fm8", "heisenberg"])
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            rep = cmd_validate(load_spec(args.spec), args)
            code = EXIT_OK if rep["ok"] else EXIT_VALIDATION
        elif args.command == "transfer":
            rep = cmd_transfer(load_spec(args.spec), args)
            code = EXIT_OK if rep["ok"] else EXIT_VALIDATION
        elif args.command == "obstruction":
            rep = cmd_obstruction(load_spec(args.spec), load_spec(args.spec2), args)
            code = EXIT_OK
        elif args.command == "formality":
            rep = cmd_formality(load_spec(args.spec), args)
            code = EXIT_OK if rep["ok"] else EXIT_VALIDATION
        else:
            rep = cmd_example(args.which, args)
            code = EXIT_OK if rep["ok"] else EXIT_ALARM
            if code == EXIT_OK and rep.get("regression_reproduced") is False:
                code = EXIT_VALIDATION
    except CliFailure as e:
        rep = dict(e.report)
        rep.update(error=str(e), exit_code=e.code)
        code = e.code
    except ObstructionError as e:
        rep = {"error": str(e), "exit_code": EXIT_ALARM}
        code = EXIT_ALARM
    if getattr(args, "out", None):
        Path(args.out).write_text(dumps(rep), encoding="utf-8")
    return code, rep


def main(argv: Sequence[str] | None = None) -> int:
    code, rep = run(argv)
    out = human(rep)
    if "error" in rep:
        sys.stderr.write(f"error: {rep['error']}\n")
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
