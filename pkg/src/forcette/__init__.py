"""Finite forcing posets seen through their Boolean completions and sheaves."""

from __future__ import annotations

from .corpus import c2, corpus_posets, default_names, p3, sweep_formulas
from .errors import (
    BasisAxiomError,
    CapExceededError,
    ForcingError,
    HypothesisError,
    NotFunctionalError,
    NotGenericError,
    ParseError,
    PresheafError,
    UniverseError,
    UnknownElementError,
    UnknownIdentifierError,
)
from .extension import (
    extension,
    extension_equality_check,
    filter_correspondence_report,
    hf_models,
    induced_filter,
    truth_lemma_report,
)
from .formula import enumerate_formulas, format_formula, parse_formula, substitute
from .names import (
    EMPTY,
    HFSet,
    Name,
    NameUniverse,
    enumerate_names,
    evaluate,
    is_functional,
    retract,
    section,
    transport,
    vb_stage_check,
)
from .poset import Poset, PosetMap, cohen_poset, is_dense_morphism, one_point_poset
from .report import Report
from .ro import BooleanAlgebra, RegularOpenAlgebra, ba_laws_report, canonical_morphism, ro_algebra
from .semantics import (
    SemanticsContext,
    boolean_value,
    bridge_check,
    forces_ba,
    forces_star,
    max_principle_check,
    sup_forcing,
)
from .sheaves import (
    GrothendieckTopology,
    Presheaf,
    Sieve,
    basis_to_topology,
    check_topology_axioms,
    dense_topology,
    enumerate_sheaves,
    equivalence_report,
    generated_sieve,
    induced_topology,
    is_sheaf,
    pullback_presheaf,
    pullback_sieve,
    sup_topology,
)

__version__ = "0.1.0"
