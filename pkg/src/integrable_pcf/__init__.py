"""Pair correlation of eigenphases of quantized integrable maps with polynomial phase."""

from .chains import ChainResult, general_bound_chain, quadratic_bound_chain
from .diophantine import (
    LEVY_CONSTANT,
    ContinuedFraction,
    RationalApprox,
    cf_expand,
    cf_from_quotients,
    continuant,
    cross_determinant_check,
    dirichlet_approx,
    f_n_alpha,
    find_convergents_in_range,
    find_good_convergent,
    gcd_product_bound_check,
    gcd_profile,
    khinchin_levy_stat,
    quotient_growth_check,
    reduce_against,
)
from .errors import (
    CostGuardError,
    DegeneratePolynomialError,
    InvalidApproximationError,
    PCFError,
    PrecisionError,
    UnsupportedKindError,
    WindowError,
)
from .harness import SweepConfig, SweepRecord, exponent_study, gap_study, run_sweep, subsequence
from .pcf import (
    TestFunction,
    TestKind,
    decompose,
    oscillation_decomposition,
    pair_count_oracle,
    poisson_reference,
    rho2_at,
    rho2_cumulative,
    rho2_local,
)
from .polynomial import PolynomialPhase, validate_hypotheses
from .reals import Real, as_real, golden_ratio, sqrt_real
from .reports import BoundReport
from .spectrum import (
    IndexRange,
    SpectrumParams,
    TraceWindow,
    eigenphases,
    eigenphases_exact,
    trace_power,
    trace_window,
)
from .weyl import (
    forward_difference,
    korobov_bound_check,
    minsum,
    representation_count,
    weyl_inequality_check,
    weyl_sum,
)

__version__ = "0.1.0"
