"""Exact-arithmetic laboratory for generalized continued fractions."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CFSpec,
    ConvergentState,
    EvalReport,
    ExplicitRule,
    HybridRule,
    InterleavedRule,
    Poly,
    PolyRule,
    convergent,
    convergent_sequences,
    determinant,
    evaluate,
    init_state,
    step,
    term_at,
)
from .numerics import ApproxReal, DecimalString, matched_digits, rat_make, rat_to_decimal  # noqa: E402
from .transforms import clear_denominators, equivalence_scale, negate, sign_flip  # noqa: E402
from .generate import partial_sum, rewrite_ratio_form, sequences_to_cf, series_to_cf  # noqa: E402
from .catalog import catalog_get, oracle_convergent, subfactorial, verify_entry  # noqa: E402
from .constants import reference_constant  # noqa: E402
