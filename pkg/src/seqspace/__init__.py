"""Norms, rearrangements and Banach-limit estimates on symmetric sequence spaces.

Sequence entries are exact rationals; anything irrational comes back as a
certified :class:`Interval`.
"""

__version__ = "0.1.0"

from .algebra import absolute, add, neg_part, pointwise_algebra, pos_part, scale, subtract
from .errors import (
    ConfigurationError,
    ConstructionError,
    NonMemberError,
    PsiTableTooShort,
    SchemaError,
    SeqSpaceError,
    UnsupportedCombination,
)
from .limits import (
    EstimatorSpec,
    LimitEstimate,
    axiom_residuals,
    dilation_averaged_estimate,
    estimate_limit,
    ratio_sequence,
    sandwich_check,
    symmetric_functional,
)
from .rearrange import (
    FiniteInjection,
    FinitePermutation,
    IndexSet,
    Named,
    apply_map,
    closing_up,
    decreasing_rearrangement,
    partial_sums,
    restrict,
)
from .scalar import Interval, precision
from .sequences import Blocks, Catalog, Finite, Periodic, catalog, constant, eval_prefix, harmonic, unit_vector
from .spaces import (
    Garling,
    Linf,
    LogBase,
    Lp,
    Marcinkiewicz,
    NormResult,
    Table,
    WeightedL1,
    membership,
    norm,
    psi_axiom_report,
)
from .witnesses import (
    garling_witness,
    oscillating_construct,
    oscillating_verify,
    renorm_contradiction,
    weighted_l1_witness,
)
