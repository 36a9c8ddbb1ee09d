"""dlsequent: a modular sequent-calculus proof engine for description logics.

Assemble a calculus from a language profile and descriptive definitions,
search for proofs backwards, extract counter-models from saturated
branches, and run the height-preserving proof transformations as
executable, checkable operations.
"""

from .calculus import (
    BUILTIN_DDRS,
    Calculus,
    DescriptiveDefinition,
    EqAtom,
    RoleAtom,
    UndefinedDdr,
    assemble_calculus,
    close_under_contraction,
    compile_ddr,
    enumerate_applications,
)
from .countermodel import (
    Interpretation,
    SatisfactionReport,
    extract_model,
    find_countermodel,
    find_countermodel_reversed,
    satisfies,
    satisfies_sequent,
)
from .meta import derive_identity, invert, transform
from .parser import (
    KB,
    ParseError,
    ProfileViolation,
    check_profile,
    parse,
    parse_ddr_file,
    parse_formula,
    parse_kb,
    parse_profile,
    parse_sequent,
)
from .prover import (
    BUDGET,
    PROVED,
    SATURATED,
    BranchState,
    Budget,
    CheckReport,
    ProofTree,
    SearchOutcome,
    check_proof,
    prove,
    tree_from_json,
    tree_to_json,
    tree_to_text,
)
from .syntax import (
    ALC,
    LanguageProfile,
    Sequent,
    free_individuals,
    profile,
    show,
    substitute,
    weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
