"""Exact verifier for squared-ideal intersection containments.

Given power series f_1..f_m over Q, the library computes the generators
of the contracted prime P, the generators of the intersection of the two
conjugate squared ideals, applies the averaging projection onto the even
subring, and certifies — with explicit, independently checkable
combinations — that every traced generator lies in m*P.
"""

from .dvr import PrecisionExhausted
from .ideals import (
    Certificate,
    CertificateNotFound,
    Certifier,
    DegenerateInstance,
    IntersectionGenerator,
    PGenerator,
    ProblemInstance,
    check_certificate,
    complete_intersection_generators,
    generators_of_P,
    generators_of_intersection,
    reduce_to_odd,
    traced_generators,
)
from .relations import (
    ElementSet,
    KernelBasis,
    RelationMatrix,
    RelationVector,
    build_element_set,
    build_matrix,
    closed_form_relation_families,
    element_index_pairs,
    expected_family_count,
    kernel_basis,
    modules_equal,
    reference_discrepancies_m3,
    verify_relation,
)
from .ring import (
    CanonicalClass,
    PolyElement,
    SquaredIdeal,
    is_zero_mod,
    normal_form,
)
from .series import (
    DivisorZeroModPrecision,
    Rational,
    TruncSeries,
    ValuationError,
)

__version__ = "0.1.0"
