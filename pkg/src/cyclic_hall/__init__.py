"""Hall algebras of cyclic quivers, canonical bases and induced-module multiplicities."""

__version__ = "0.1.0"

from .errors import CyclicHallError, InvariantError, SizeLimitError, SpanningError, WindowError
from .laurent import LaurentInt
from .multiseg import (
    DimensionVector,
    Multisegment,
    PeriodicMultisegment,
    PeriodicPair,
    Segment,
    canonical_pair,
    degeneration_leq,
    dimension_vector,
    fold,
    format_multisegment,
    parse_label,
    path_rank,
    shift,
    unfold_fiber,
)

__all__ = [
    "CyclicHallError", "InvariantError", "SizeLimitError", "SpanningError", "WindowError",
    "LaurentInt", "DimensionVector", "Multisegment", "PeriodicMultisegment", "PeriodicPair",
    "Segment", "canonical_pair", "degeneration_leq", "dimension_vector", "fold",
    "format_multisegment", "parse_label", "path_rank", "shift", "unfold_fiber",
]
