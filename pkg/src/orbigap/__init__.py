"""Constructions of pairwise non-commensurable arithmetic Kleinian
commensurability classes with shared geodesic data and bounded volume
windows, driven by bounded gaps between primes in Chebotarev sets."""

from .errors import (
    CompositumDegenerate,
    DenominatorNotCoprime,
    DiscriminantMismatch,
    DiscriminantUnknown,
    EmbeddingObstruction,
    ExcludedPrime,
    HypothesisFailure,
    IndeterminateSign,
    InvalidInput,
    KleinianInadmissible,
    LoxodromyFailure,
    NoneBelowHeight,
    NotCoprime,
    NotLoxodromic,
    NotSquarefree,
    NoTuplesFound,
    OddRamification,
    OrbigapError,
    PossiblySquareRadicand,
    PrecisionExhausted,
    RamFEmpty,
    RealPlaceUnramified,
    Reducible,
    SamePrime,
    AlreadyRamified,
    UncheckablePlace,
    UndecidedIrreducibility,
    UnknownNorm,
)
from .isolation import isolate_complex_roots
from .numberfield import (
    ComplexPlace,
    FieldElement,
    NumberField,
    PrimeIdeal,
    RealPlace,
    evaluate_at_place,
    factor_prime,
    make_field,
    parse_element,
    prime_from_label,
    reduce_mod_prime,
    residue_norm_mod,
)
from .polynomials import (
    FiniteFieldElement,
    IntPolynomial,
    ModPolynomial,
    count_real_roots,
    factor_mod_p,
    is_irreducible_mod_p,
    parse_polynomial,
)
from .pipeline import (
    construct_twins,
    report_to_json,
    run_request,
    validate_base,
    verify_report,
)
from .quaternion import (
    EmbeddingCertificate,
    OpaquePlace,
    QuaternionAlgebra,
    RamificationSet,
    admits_embedding,
    algebra,
    commensurability_class,
    extend_ramification,
    is_division,
    is_kleinian_admissible,
    make_ramification_set,
    same_commensurability_class,
    torsion_free_check,
)
from .search import (
    GapStatistics,
    PrimeTuple,
    SearchSpec,
    enumerate_target_primes,
    find_bounded_gap_tuples,
    gap_statistics,
)
from .splitting import (
    CompositumCheck,
    FrobeniusVector,
    QuadraticExtension,
    RamifiedCoordinates,
    SplitSymbol,
    compositum_degree_check,
    cyclotomic_quadratic_degrees,
    extension_from_trace,
    frobenius_vector,
    make_quadratic_extension,
    split_symbol,
    split_symbol_real,
)
from .volume import (
    BorelVolume,
    GeodesicDatum,
    VolumeReport,
    ZetaValue,
    borel_volume,
    dedekind_zeta_2,
    trace_to_geodesic,
    volume_ratio,
)

__version__ = "0.1.0"
