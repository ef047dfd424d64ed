"""Nested canalyzing functions: decomposition, counting and sensitivity."""

from .canalyze import (
    NCF,
    CanalyzingTriple,
    ExtendedMonomial,
    LayerStructure,
    NotNCF,
    canalyzing_triples,
    factor_layer,
    layer_number,
    most_dominant_variables,
    ncf_decompose,
    reconstruct,
)
from .core import (
    AnfPoly,
    Point,
    TruthTable,
    anf_from_truth_table,
    degree,
    evaluate,
    hamming_weight,
    is_essential,
    parse_anf,
    restrict,
    truth_table_from_anf,
)
from .dyadic import Dyadic
from .formulas import (
    Composition,
    activity_of_layer,
    average_sensitivity,
    conjecture_scan,
    count_ncf,
    count_ncf_total,
    count_recursive,
    lemma42_value,
    sensitivity_bounds,
    weight_from_composition,
)

__version__ = "0.1.0"
