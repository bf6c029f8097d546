"""Structure of ideal-irreducible semigroups of nonnegative matrices.

The package works on R^n with the coordinatewise order.  Its layers are
lattice primitives (:mod:`.lattice_core`), single-matrix spectral theory
(:mod:`.spectral`), irreducibility tests (:mod:`.irreducibility`), finite
ray-ball approximations of the semigroup (:mod:`.semigroup`) and the
permutation structure of minimal projections (:mod:`.structure`).
"""

from .errors import (
    AnalysisError,
    BallExplosion,
    ConvergenceError,
    InconclusiveError,
    InputError,
    QuasinilpotentError,
    ReducibleError,
    ReturnHorizonExceeded,
    SpectralSeparationError,
    StructureError,
)
from .irreducibility import (
    crosscheck_characterizations,
    exhaustive_is_irreducible,
    is_ideal_irreducible,
    orbit_ideal,
)
from .lattice_core import CoordinateIdeal, disjoint, ideal_closure
from .semigroup import (
    flanking_projections,
    generate_ball,
    left_ideal_analysis,
    minrank,
    rank_r_projections,
    right_ideal_analysis,
)
from .spectral import (
    classify_dichotomy,
    combinatorial_projection,
    cyclic_classes,
    peripheral_spectrum,
    peripheral_split,
    period,
    perron_vectors,
    spectral_radius,
)
from .structure import (
    Diagnosis,
    analyze_commuting_pair,
    analyze_single,
    block_decomposition,
    common_eigenspace_dimension,
    common_eigenvector,
    permutation_structure,
    range_lattice,
    same_range_diagnosis,
    verify_structure_theorems,
)

__version__ = "0.1.0"
