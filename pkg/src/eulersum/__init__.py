"""Euler summation of divergent spectral series, regulated completeness
kernels for the square well and harmonic oscillator, and reconstruction of
their Hamiltonian kernels as verified t -> 1 limits."""

from .errors import (
    BoundaryAmbiguous,
    DomainError,
    EulerSumError,
    InvalidConfig,
    NoEulerSum,
    NOverflow,
    QuadratureNotConverged,
    TailNotBounded,
    TestFunctionBoundary,
    TNotInUnitInterval,
    TruncationInsufficient,
)
from .harness import ResultRow, RunConfig, SweepRow, main, read_rows, run, sweep, write_rows
from .oscillator import (
    MehlerPoint,
    OscillatorEigenstate,
    hermite,
    mehler_kernel,
    mehler_series,
    osc_action,
    osc_h_kernel,
    phi_osc,
    symmetrized_exponent,
)
from .quadrature import QuadratureResult, QuadratureSpec, integrate
from .resummation import (
    AbelEvaluation,
    CoefficientSequence,
    EulerLimitConfig,
    EulerLimitResult,
    abel_eval,
    euler_limit,
)
from .square_well import (
    IntervalIntegralQuery,
    WellEigenstate,
    WellKernelPoint,
    arg_f,
    d_kernel,
    h_kernel,
    h_series,
    k_interval_integral,
    k_kernel,
    k_series,
    phi_well,
    well_action,
)
from .zeta import (
    ZetaQuery,
    alternating_sequence,
    evaluate_query,
    plain_sequence,
    zeta_direct,
    zeta_euler,
)

__version__ = "0.1.0"

__all__ = [
    "AbelEvaluation",
    "BoundaryAmbiguous",
    "CoefficientSequence",
    "DomainError",
    "EulerLimitConfig",
    "EulerLimitResult",
    "EulerSumError",
    "IntervalIntegralQuery",
    "InvalidConfig",
    "MehlerPoint",
    "NOverflow",
    "NoEulerSum",
    "OscillatorEigenstate",
    "QuadratureNotConverged",
    "QuadratureResult",
    "QuadratureSpec",
    "ResultRow",
    "RunConfig",
    "SweepRow",
    "TNotInUnitInterval",
    "TailNotBounded",
    "TestFunctionBoundary",
    "TruncationInsufficient",
    "WellEigenstate",
    "WellKernelPoint",
    "ZetaQuery",
    "abel_eval",
    "alternating_sequence",
    "arg_f",
    "d_kernel",
    "euler_limit",
    "evaluate_query",
    "h_kernel",
    "h_series",
    "hermite",
    "integrate",
    "k_interval_integral",
    "k_kernel",
    "k_series",
    "main",
    "mehler_kernel",
    "mehler_series",
    "osc_action",
    "osc_h_kernel",
    "phi_osc",
    "phi_well",
    "plain_sequence",
    "read_rows",
    "run",
    "sweep",
    "symmetrized_exponent",
    "well_action",
    "write_rows",
    "zeta_direct",
    "zeta_euler",
]
