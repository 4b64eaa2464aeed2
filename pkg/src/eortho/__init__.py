"""Exact elementary orthogonal group computations over commutative rings.

The library constructs the Dickson-Siegel-Eichler-Roy (DSER) elementary
orthogonal generators of O(q perp h^m) for rings in which 2 is invertible,
rewrites generator words (DSER <-> classical elementary orthogonal letters,
conjugation normalization, local splitting of O(h)), and verifies every
identity exactly, either symbolically over Laurent-polynomial rings or over
finite modular rings.
"""

from .errors import (
    DescriptorMismatch,
    EorthoError,
    IsotropicVector,
    NonIntegralConjugator,
    NotAUnit,
    NotComaximal,
    NotDiagonal,
    NotHyperbolicForm,
    NotInRing,
    NotLocalRing,
    NotOrthogonal,
    PreconditionViolated,
    SamePlane,
    UnsupportedConjugator,
)
from .rings import (
    IntegerRing,
    LaurentRing,
    LocalizedRing,
    ModRing,
    PolyRing,
    Q,
    RationalRing,
    RingElement,
    Z,
    clear_denominator_power,
    convert,
    format_element,
    format_ring,
    localize,
    parse_element,
    parse_ring,
    poly_substitute,
    random_element,
    ring_add,
    ring_inv,
    ring_mul,
    ring_neg,
    ring_sub,
)
from .matrices import Matrix, SquareMatrix
from .quadform import (
    AmbientForm,
    Ordering,
    QuadraticSpace,
    ambient_gram,
    d_vector,
    grouped_to_interleaved,
    hyperbolic_gram,
    interleaved_to_grouped,
    is_orthogonal,
    quadratic_value,
    reflection,
    shuffle_matrix,
)
from .generators import (
    BlockOq,
    EAlpha,
    EAlphaSingle,
    EBetaStar,
    EBetaStarSingle,
    Inverse,
    OE,
    SigmaU,
    Tau,
    Word,
    WordContext,
    commutator_word,
    dser_letter_matrix,
    letter_from_json,
    letter_inverse,
    letter_matrix,
    letter_to_json,
    map_letter,
    map_word,
    oe_matrix,
    sigma_pair,
    single_to_full,
    verify_rao_factorization,
    word_from_json,
    word_matrix,
    word_to_json,
)
from .rewrite import (
    SplitAntiDiag,
    SplitDiag,
    conjugate_letter,
    conjugate_word,
    dser_to_oe,
    normalize_to_singles,
    oe_to_dser,
    oe_to_dser_word,
    split_orthogonal_h,
)
from .localglobal import (
    DilationResult,
    LocalizedWord,
    dilate,
    dilation_is_sound,
    eval_at_zero_is_identity,
    kernel_shape_check,
    localize_poly_matrix,
    locword_from_json,
    locword_to_json,
    verification_context,
    verify_local_membership,
)

__version__ = "0.1.0"
