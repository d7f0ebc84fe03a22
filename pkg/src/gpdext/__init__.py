"""Finite groupoids, circle-valued 2-cocycles, twisted convolution algebras,
and certified mode decompositions of their circle extensions."""

__version__ = "0.1.0"

from .exact import CircleScalar, Cyclo
from .groupoid import (
    FiniteGroupoid,
    GroupoidError,
    OrbitDecomposition,
    ValidationReport,
    abelian_group_groupoid,
    cover_groupoid,
    cyclic_group_groupoid,
    disjoint_union,
    empty_groupoid,
    group_groupoid,
    is_principal,
    is_proper,
    is_transitive,
    orbit_decomposition,
    pair_groupoid,
    quotient_by_isotropy,
    symmetric_group_groupoid,
    validate,
)
from .cocycle import (
    CocycleError,
    IsotropyObstruction,
    OneCochain,
    TwoCocycle,
    bicharacter_cocycle,
    cech_cocycle,
    check_identity,
    coboundary,
    normalize,
    pauli_cocycle,
    power,
    solve_coboundary,
    trivialize_principal,
)
from .algebra import (
    AlgebraElement,
    AlgebraError,
    FullNormCertificate,
    NormReport,
    RegularRep,
    TwistedAlgebra,
    convolve,
    full_norm_certificate,
    identity_element,
    involute,
    reduced_norm,
    regular_rep,
)
from .cyclic_oracle import CyclicExtension, OracleError
from .extension import (
    DecompositionReport,
    ExtensionAlgebra,
    LaurentElement,
    ModeUnitary,
    WindowError,
    check_reduced_decomposition,
    cyclic_decompose,
    cyclic_extension,
    decompose,
    embed_mode,
    intertwine_check,
    laurent_product,
    mode_component,
    mode_projection,
    oracle_norm_deviation,
)
from .morita import (
    BimoduleElement,
    FixedPointAlgebra,
    FullnessCertificate,
    MoritaError,
    fixed_point_algebra,
    fullness_check,
    left_inner,
    positivity_check,
    saturation_report,
)
from .documents import (
    DocumentError,
    SpecDocument,
    parse_cocycle,
    parse_groupoid,
    parse_spec,
    serialize_cocycle,
    serialize_groupoid,
)
