"""Power series, the network grammar and the singular constants."""

from cubicplanar.series._constants import (
    ClassValues,
    SingularData,
    cidentity_from_q3,
    class_values,
    connected_value,
    solve_singular_constants,
)
from cubicplanar.series._grammar import (
    NETWORK_CLASSES,
    GrammarTable,
    solve_grammar,
    verify_grammar,
)
from cubicplanar.series._power_series import PowerSeries, series_sqrt
from cubicplanar.series._triangulations import (
    TAU,
    TRIANGULATION_CONSTANT,
    critical_core_weights,
    triangulation_count,
    triangulation_series,
    tutte_count,
    tutte_series,
)
from cubicplanar.series._ylaw import (
    YLaw,
    conditioned_first_components,
    conditioned_first_joint,
    evaluate_Y_law,
    pmf_power,
    product_first_joint,
)

__all__ = [
    "NETWORK_CLASSES",
    "TAU",
    "TRIANGULATION_CONSTANT",
    "ClassValues",
    "GrammarTable",
    "PowerSeries",
    "SingularData",
    "YLaw",
    "cidentity_from_q3",
    "class_values",
    "conditioned_first_components",
    "conditioned_first_joint",
    "connected_value",
    "critical_core_weights",
    "evaluate_Y_law",
    "pmf_power",
    "product_first_joint",
    "series_sqrt",
    "solve_grammar",
    "solve_singular_constants",
    "triangulation_count",
    "triangulation_series",
    "tutte_count",
    "tutte_series",
    "verify_grammar",
]
