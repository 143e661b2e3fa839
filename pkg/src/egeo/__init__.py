"""Entanglement geometry of finite-dimensional pure states.

Rank-based separability tests, partition-lattice product patterns,
determinantal-variety invariants, Weyl holonomy and Cech obstruction
computations, splitting-type factorization, and Satake-side product
criteria, each backed by an independent brute-force oracle.
"""

from .errors import (
    BadNerve,
    BadWord,
    EgeoError,
    NotCentral,
    NotCocycle,
    NotPGLCocycle,
    NotRootOfUnity,
    NotSquare,
    OutOfRange,
    ShapeMismatch,
    TooLarge,
    WrongLength,
    WrongShape,
    WrongSize,
    ZeroState,
)
from .tensor_core import (
    Bipartition,
    FlatteningMatrix,
    IncidenceLift,
    PureState,
    SchmidtDecomposition,
    SectorDecomposition,
    cofactor_matrix,
    concurrence,
    flatten,
    incidence_lift,
    make_state,
    minor_rank,
    numerical_rank,
    schmidt_decompose,
    sector_decompose,
)
from .separability import (
    Partition,
    SeparabilityReport,
    bipartitions,
    finest_product_partition,
    is_gme,
    is_pi_product,
    meet,
    refines,
    separability_report,
)
from .rank_geometry import (
    IntegerPartition,
    VarietyInvariants,
    determinantal_degree,
    determinantal_dim,
    flattening_lower_bound,
    hilbert_function,
    hilbert_poly_fit,
    rank_2x2x2,
    schur_dim,
    secant_expected_dim,
    segre_degree,
    variety_invariants,
    w_family,
    w_state,
)
from .gluing_sim import (
    HolonomyConfig,
    ProjectiveOperator,
    SpinChainParams,
    WeylSystem,
    apply_holonomy,
    commutator_scalar,
    glue_ground_state,
    ground_state,
    is_local_operator,
    loop_holonomy,
    proj_equal,
    qudit_encode,
    spin_hamiltonian,
    to_qudit_pair,
    weyl_ops,
)
from .cech_brauer import (
    CechCover,
    Cocycle2,
    ReductionReport,
    check_reduction,
    class_order,
    is_2cocycle,
    make_cover,
    pgl_cocycle_defect,
    symbol_cover,
    torsion_bound,
    validate_nerve,
)
from .splitting_p1 import SplittingType, SumsetFactorization, factor_sumset, parallelogram
from .spectral_satake import (
    LocalSpectra,
    SpectralClass,
    d_product_oracle,
    elem_sym,
    is_22_product,
    is_222_product,
    quartic_f,
    sphericity_check,
    tensor_spectrum,
)

__version__ = "0.1.0"
