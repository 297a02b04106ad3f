"""Truncated signatures of piecewise-linear paths, their holonomy realization,
and the free tensor / free Lie algebra toolkit around them."""

from .exceptions import (
    CompositionError,
    DepthError,
    DomainError,
    LoopsigError,
    ResourceCapError,
    ShapeError,
)
from .free_lie import (
    LogSignature,
    LyndonBasis,
    is_group_like,
    is_lyndon,
    log_signature_coords,
    lyndon_bracket,
    lyndon_words,
)
from .holonomy import (
    FrXiReport,
    HolonomyResult,
    MatrixConnection,
    fr_xi_report,
    holonomy_matrix,
    holonomy_truncated,
    picard_partial_sum,
    picard_terms,
)
from .paths import (
    EdgePath,
    PiecewiseLinearPath,
    geometric_retrace_reduce,
    is_tree_like_edge_path,
    minimal_form,
    path_concat,
    path_inverse,
    retrace_reduce,
)
from .signature import (
    ElementaryCombination,
    MonomialOneForm,
    first_difference,
    iterated_integral,
    path_signature,
    product_expand,
    reduce_polynomial_integral,
    segment_signature,
    signature_distance,
)
from .tensor_algebra import (
    TensorSeries,
    index_to_word,
    level_masses,
    shuffle_words,
    ts_exp,
    ts_linear,
    ts_log,
    ts_pair,
    ts_product,
    ts_shuffle,
    word_index,
    xi_norm,
)

__version__ = "0.1.0"
