"""Exact injectivity decisions for families of generalized polynomial maps.

The package decides whether x -> A diag(kappa) x^B is injective with respect
to a subset S for every positive kappa, with machine-checkable certificates
or explicit counterexamples, and applies the same sign-vector machinery to
multivariate Descartes-rule hypotheses and reaction-network
multistationarity preclusion.
"""
from .engine import (
    Counterexample,
    FullSpace,
    OrthantUnion,
    Subspace,
    SymbolicDetPoly,
    Verdict,
    check_injectivity,
    check_minors,
    construct_counterexample,
    det_condition,
    evaluate_map,
    gamma_det_poly,
)
from .errors import (
    LengthMismatch,
    NoComplement,
    NonPositiveInput,
    NotGaleDual,
    ParseError,
    RankDeficient,
    ShapeMismatch,
    SignjectError,
    SizeMismatch,
    TooLarge,
    UnknownSpecies,
    VerificationFailed,
)
from .feasibility import (
    FeasibilityResult,
    StrictSystem,
    cone_interior_membership,
    feasible_sign_pair,
    open_halfspace_contains_rows,
    solve_strict,
)
from .matroid import (
    Chirotope,
    chirotope,
    cocircuits,
    covectors,
    image_sign_vectors,
    matroid_vectors,
    same_oriented_matroid,
)
from .ratmat import (
    IndexSet,
    RationalMatrix,
    det,
    gale_dual,
    kernel_basis,
    minor,
    parse_rational,
    rank,
    rref,
    verify_gale_relation,
)
from .signs import SignVector, compose, orthogonal, sigma

__version__ = "1.0.0"
__all__ = [
    "Chirotope",
    "Counterexample",
    "FeasibilityResult",
    "FullSpace",
    "IndexSet",
    "LengthMismatch",
    "NoComplement",
    "NonPositiveInput",
    "NotGaleDual",
    "OrthantUnion",
    "ParseError",
    "RankDeficient",
    "RationalMatrix",
    "ShapeMismatch",
    "SignVector",
    "SignjectError",
    "SizeMismatch",
    "StrictSystem",
    "Subspace",
    "SymbolicDetPoly",
    "TooLarge",
    "UnknownSpecies",
    "Verdict",
    "VerificationFailed",
    "check_injectivity",
    "check_minors",
    "chirotope",
    "cocircuits",
    "compose",
    "cone_interior_membership",
    "construct_counterexample",
    "covectors",
    "det",
    "det_condition",
    "evaluate_map",
    "feasible_sign_pair",
    "gale_dual",
    "gamma_det_poly",
    "image_sign_vectors",
    "kernel_basis",
    "matroid_vectors",
    "minor",
    "open_halfspace_contains_rows",
    "orthogonal",
    "parse_rational",
    "rank",
    "rref",
    "same_oriented_matroid",
    "sigma",
    "solve_strict",
    "verify_gale_relation",
]
