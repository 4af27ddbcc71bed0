"""Boundary CFT classification engine.

Takes the data of a rational braided fusion category (fusion rules, modular
S/T matrices, F/R symbols) plus a Q-system for a chiral extension, and
computes the associated boundary theory: the coupling matrix from the
charged-intertwiner kernel problem, the dual canonical object and index
ledger, modular-invariant and nimrep enumeration, Cardy matrices and annulus
partition functions with numerical modular checks.
"""

from .catalog import CategoryData, catalog, fibonacci, ising, su2
from .category import (
    AxiomReport,
    CategoryPresentation,
    Morphism,
    braiding,
    compose,
    conjugation_pair,
    dagger,
    hom_basis,
    identity,
    tensor,
    validate_axioms,
)
from .characters import (
    AnnulusReport,
    CharacterSeries,
    annulus_partition,
    cardy_transform_check,
    evaluate_character,
    minimal_model_characters,
)
from .classify import (
    CardySolution,
    Nimrep,
    brute_force_invariants,
    cardy_solve,
    compatibility,
    enumerate_modular_invariants,
    enumerate_nimreps,
    regular_nimrep,
)
from .errors import (
    BcftError,
    DataInconsistencyError,
    NumericDegeneracyError,
    StructuralError,
)
from .induction import (
    BoundaryFieldBasis,
    IndexLedger,
    charged_field_basis,
    coupling_from_qsystem,
    dhr_orbit_thetas,
    exchange_operator,
    index_ledger,
    theta_plus,
)
from .modular import ModularData, quantum_dimensions, validate_modular, verlinde_fusion
from .qsystems import (
    ChargedIntertwinerAlgebra,
    QSystemSpec,
    SearchResult,
    assemble_x,
    car_qsystem,
    charged_algebra,
    fingerprint,
    frobenius_check,
    gauge_transform,
    is_local,
    regular_qsystem,
    search_qsystems,
    trivial_qsystem,
    validate_qsystem,
)
from .rings import (
    FusionRing,
    fp_dimensions,
    fusion_matrix,
    global_dimension,
    validate_ring,
)
from .words import Word, simple_word, sum_word

__version__ = "0.1.0"
