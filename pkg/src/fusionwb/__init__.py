"""Fusion-system workbench: finite p-group fusion, group models, stable elements."""

from .errors import WorkbenchError
from .groups import Group, InjHom, Subgroup
from .fusion import (
    FusionSystem,
    fusion_equal,
    fusion_from_group,
    generate_fusion,
    is_saturated,
    is_subfusion,
)
from .models import (
    AlperinDatum,
    AlperinEntry,
    ModelWord,
    Presentation,
    ball_enumerate,
    hnn_presentation,
    is_identity,
    recover_fusion,
    reduce_word,
    robinson_presentation,
    validate_alperin_datum,
)
from .stable import (
    StableFamily,
    is_nilpotent,
    poincare_series,
    quillen_limit_finite_group,
    stable_basis,
)

__all__ = [
    "WorkbenchError",
    "Group", "InjHom", "Subgroup",
    "FusionSystem", "fusion_from_group", "generate_fusion", "is_saturated",
    "fusion_equal", "is_subfusion",
    "AlperinDatum", "AlperinEntry", "ModelWord", "Presentation",
    "validate_alperin_datum", "robinson_presentation", "hnn_presentation",
    "reduce_word", "is_identity", "ball_enumerate", "recover_fusion",
    "StableFamily", "stable_basis", "poincare_series", "is_nilpotent",
    "quillen_limit_finite_group",
]
__version__ = "0.1.0"
