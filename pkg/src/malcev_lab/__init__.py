"""Polynomial richness of finite Mal'cev algebras: congruences, commutators, types,
type-preserving partial functions and the module classification."""

__version__ = "0.1.0"

from .algebra import FiniteAlgebra, OperationTable, evaluate, quotient_algebra
from .closure import find_in_closure, restricted_clone, unary_polynomials
from .commutator import (
    centralizer,
    check_ABp,
    commutator,
    labelled_lattice,
    local_module,
    rho_independence_check,
    rho_relation,
    tct_type,
)
from .congruence import (
    Congruence,
    CongruenceLattice,
    congruence_lattice,
    find_malcev_polynomial,
    lattice_queries,
    principal_congruence,
)
from .errors import MalcevLabError, ParseError, ResourceError, UnsupportedAlgebraError, UsageError
from .fields import GaloisField, galois_field
from .io import corpus_algebra, load_algebra, load_function, parse_algebra, parse_function
from .lemmas import verify_lemma_corpus
from .modules import (
    MatrixModuleSpec,
    build_module_algebra,
    counterexample_function,
    decide_module_richness,
    module_algebra,
)
from .partial import (
    PartialFunction,
    Relation,
    brute_force_strictly_k_rich,
    check_nu_preservation,
    interpolate,
    is_congruence_preserving,
    is_type_preserving,
    near_unanimity,
    preserves,
)
from .structure import (
    check_sc1,
    classify_ct,
    decide_hereditary_richness,
    homogeneous_series,
    is_homogeneous,
    phi_and_star,
    projective_prime_classes,
    sc1_failure_witness,
)
