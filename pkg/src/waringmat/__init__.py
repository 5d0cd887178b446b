"""waringmat: sums of two k-th powers of matrices over finite fields.

Constructive decompositions A = B**k + C**k (optionally with invertible,
semisimple, split semisimple, cyclic, or idempotent summands) together
with an exhaustive census engine that verifies the small-case
classifications by brute force.
"""

from .config import get_budget, get_seed, set_seed
from .errors import (
    BudgetExceeded,
    CharDividesK,
    DegreeZero,
    DiagonalNotPower,
    HypothesisFailed,
    NoPartition,
    NotCyclic,
    NotDecomposable,
    NotInvertible,
    NotIrreducible,
    NotPrime,
    OrderNotCoprime,
    ScalarInput,
    TraceMismatch,
    TwoZeroDiagonal,
    UnknownTheorem,
    Unsupported,
    WaringmatError,
)
from .gf import (
    Field,
    FieldElem,
    ExtensionField,
    ScalarWaringProfile,
    build_field,
    embed_scalar,
    joly_count,
    parse_field,
    scalar_profile,
    two_power_solve,
)

__version__ = "0.1.0"
