"""Exact minimal C∞-structures on cohomology and their formality obstructions."""
from .algebra import AlgebraError, Dgca, Element
from .harrison import (CInfinity, Cochain, CochainSpace, bracket, circle, cohomology_class, delta,
                       max_cyclic_arity, mc_check, solve_coboundary)
from .hodge import ContractionData, hodge_from_inner_product, validate_hodge
from .linalg import Q, qstr, solve_exact
from .obstruction import (GaugeParameter, ObstructionClass, Sector, bch, gauge_act, isotopy_mod3,
                          isotopy_mod4, kappa4, kappa_k)
from .specfile import AlgebraSpec, SpecError, build_algebra, build_contraction, emit_spec, parse_spec
from .transfer import TransferResult, transfer

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "Dgca",
    "Element",
    "CInfinity",
    "Cochain",
    "CochainSpace",
    "bracket",
    "circle",
    "cohomology_class",
    "delta",
    "max_cyclic_arity",
    "mc_check",
    "solve_coboundary",
    "ContractionData",
    "hodge_from_inner_product",
    "validate_hodge",
    "Q",
    "qstr",
    "solve_exact",
    "GaugeParameter",
    "ObstructionClass",
    "Sector",
    "bch",
    "gauge_act",
    "isotopy_mod3",
    "isotopy_mod4",
    "kappa4",
    "kappa_k",
    "AlgebraSpec",
    "SpecError",
    "build_algebra",
    "build_contraction",
    "emit_spec",
    "parse_spec",
    "TransferResult",
    "transfer",
]
