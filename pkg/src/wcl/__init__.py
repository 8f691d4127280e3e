"""Weighted configuration logic over commutative semirings.

Interaction formulas describe which ports fire together; configuration
formulas describe sets of interactions (architectures) and compose with
union and coalescing; the weighted layer assigns semiring values, with a
unique full normal form per formula and equivalence decided either
pointwise or on normal forms.  A first-order layer quantifies over typed
component models.
"""

from .errors import CapExceeded, ParseError, UsageError, WclError
from .semiring import (
    ALL_SEMIRINGS,
    BOOLEAN,
    FUZZY,
    IDEMPOTENT_SEMIRINGS,
    MAX_PLUS,
    MIN_PLUS,
    NATURAL,
    VITERBI,
    Semiring,
    SemiringValue,
    format_value,
    get_semiring,
)
from .interactions import (
    Configuration,
    Interaction,
    Port,
    characteristic_monomial,
    configuration,
    enumerate_configurations,
    enumerate_interactions,
    interaction,
    monomial,
    pil_satisfies,
    port,
    port_universe,
    wpil_eval,
)
from .pcl import (
    EvalCaps,
    decompositions2,
    pcl_equiv,
    pcl_satisfies,
    wpcl_equiv,
    wpcl_equiv_witness,
    wpcl_eval,
    wpcl_eval_sparse,
    wpcl_polynomial,
    wpcl_value,
)
from .normal_form import (
    FullMonomial,
    FullNormalForm,
    config_to_monomials,
    fnf_equiv,
    fnf_eval,
    fnf_of_pcl,
    fnf_of_wpcl,
    fnf_to_formula,
    monomials_to_config,
)
from .focl import (
    Component,
    ComponentType,
    Model,
    focl_satisfies,
    ground_focl,
    ground_wfocl,
    matching_components,
    substitute,
    wfocl_eval,
)
from .parser import parse_configuration, parse_formula, parse_model, parse_ports
from .printer import formula_to_text

__all__ = [name for name in dir() if not name.startswith("_")]
