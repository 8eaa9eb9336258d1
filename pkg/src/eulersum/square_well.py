"""Regulated kernels for the infinite square well on [0, pi].

The completeness sum (2/pi) sum(t^n sin(nx) sin(ny)) has the closed form
K(x, y, t) = D(x-y, t) - D(x+y, t) with

    D(z, t) = (1 - t cos z) / (pi (1 - 2 t cos z + t^2)),

and the regulated Hamiltonian kernel is H = -1/2 d^2K/dy^2, obtained here
from the analytic second derivative of D:

    D''(z, t) = -t (1 - t^2) (cos z (1 - 2 t cos z + t^2) - 4 t sin^2 z)
                / (pi (1 - 2 t cos z + t^2)^3).

The interval integral of K over [a, b] in y reduces exactly to four
principal arguments of f(u) = 1 - t e^{iu}; as t -> 1 it tends to 1 when
x is inside (a, b) and to 0 when x is outside, which is the delta-family
property the kernels are built to exhibit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    BoundaryAmbiguous,
    DomainError,
    InvalidConfig,
    TestFunctionBoundary,
    TNotInUnitInterval,
)
from .quadrature import QuadratureSpec, integrate

PI = math.pi

ArrayLike = Union[float, np.ndarray]


def _check_t(t: float) -> None:
    if not 0.0 <= t < 1.0:
        raise TNotInUnitInterval(f"t={t!r} outside [0, 1)")


@dataclass(frozen=True)
class WellKernelPoint:
    """An (x, y, t) evaluation point on [0, pi]^2 x [0, 1)."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        if not 0.0 <= self.x <= PI or not 0.0 <= self.y <= PI:
            raise DomainError(f"(x, y)=({self.x!r}, {self.y!r}) outside [0, pi]^2")
        _check_t(self.t)


@dataclass(frozen=True)
class WellEigenstate:
    """Eigenstate label n >= 1 with energy n^2 / 2."""

    n: int
    energy: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("eigenstate index must be >= 1")
        object.__setattr__(self, "energy", 0.5 * self.n ** 2)


@dataclass(frozen=True)
class IntervalIntegralQuery:
    """Integral of K(x, ., t) over [a, b] within [0, pi], fixed x."""

    x: float
    a: float
    b: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.x < PI:
            raise DomainError(f"x={self.x!r} must lie in (0, pi)")
        if not (0.0 <= self.a < self.b <= PI):
            raise DomainError(f"need 0 <= a < b <= pi, got a={self.a!r}, b={self.b!r}")
        _check_t(self.t)


def phi_well(n: int, x: float) -> float:
    """Normalised eigenfunction sqrt(2/pi) sin(n x) on [0, pi]."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 <= x <= PI:
        raise DomainError(f"x={x!r} outside [0, pi]")
    return math.sqrt(2.0 / PI) * math.sin(n * x)


def _phi_well_arr(n: int, y: np.ndarray) -> np.ndarray:
    return math.sqrt(2.0 / PI) * np.sin(n * y)


def _d(z: ArrayLike, t: float) -> ArrayLike:
    # 1 - 2 t cos z + t^2 and 1 - t cos z rewritten to avoid cancellation
    # near z = 0, t -> 1.
    s2 = np.sin(0.5 * np.asarray(z, dtype=np.float64)) ** 2
    m = (1.0 - t) ** 2 + 4.0 * t * s2
    num = (1.0 - t) + 2.0 * t * s2
    return num / (PI * m)


def _d2(z: ArrayLike, t: float) -> ArrayLike:
    z = np.asarray(z, dtype=np.float64)
    s2 = np.sin(0.5 * z) ** 2
    m = (1.0 - t) ** 2 + 4.0 * t * s2
    sin_z = np.sin(z)
    cos_z = np.cos(z)
    return -t * (1.0 - t * t) * (cos_z * m - 4.0 * t * sin_z ** 2) / (PI * m ** 3)


def d_kernel(z: float, t: float) -> float:
    """Closed form of 1/pi + (1/pi) sum(t^n cos(nz)); 2pi-periodic in z."""
    _check_t(t)
    return float(_d(z, t))


def _k(x: float, y: ArrayLike, t: float) -> ArrayLike:
    return _d(x - np.asarray(y), t) - _d(x + np.asarray(y), t)


def _h(x: float, y: ArrayLike, t: float) -> ArrayLike:
    return -0.5 * (_d2(x - np.asarray(y), t) - _d2(x + np.asarray(y), t))


def k_kernel(p: WellKernelPoint) -> float:
    """Regulated completeness kernel D(x-y, t) - D(x+y, t)."""
    return float(_k(p.x, p.y, p.t))


def k_series(p: WellKernelPoint, n_max: int) -> float:
    """Truncated sum (2/pi) sum_{n<=n_max} t^n sin(nx) sin(ny).

    Serves as the independent oracle for k_kernel; the omitted tail is
    bounded by (2/pi) t^(n_max+1) / (1 - t).
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    terms = (2.0 / PI) * p.t ** ns * np.sin(ns * p.x) * np.sin(ns * p.y)
    return math.fsum(terms)


def h_kernel(p: WellKernelPoint) -> float:
    """Regulated Hamiltonian kernel -1/2 d^2K/dy^2 in closed form."""
    return float(_h(p.x, p.y, p.t))


def h_series(p: WellKernelPoint, n_max: int) -> float:
    """Truncated sum (1/pi) sum_{n<=n_max} n^2 t^n sin(nx) sin(ny)."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    terms = (1.0 / PI) * ns ** 2 * p.t ** ns * np.sin(ns * p.x) * np.sin(ns * p.y)
    return math.fsum(terms)


def _arg_f_folded(u: float, t: float) -> float:
    # 2pi-periodic continuation; u = +-pi is regular (f(+-pi) = 1 + t > 0).
    v = math.remainder(u, 2.0 * PI)
    return math.atan2(-t * math.sin(v), 1.0 - t * math.cos(v))


def arg_f(u: float, t: float) -> float:
    """Principal argument of f(u) = 1 - t e^{iu} for u in (-pi, pi).

    Computed as atan2(-t sin u, 1 - t cos u), which lands on the correct
    branch without manual tracking.  As t -> 1 this tends to (u - pi)/2
    for u > 0, to (u + pi)/2 for u < 0 and to 0 at u = 0.
    """
    _check_t(t)
    if not -PI < u < PI:
        raise DomainError(f"u={u!r} outside (-pi, pi)")
    return math.atan2(-t * math.sin(u), 1.0 - t * math.cos(u))


def k_interval_integral(q: IntervalIntegralQuery) -> float:
    """Exact value of the interval integral of K(x, ., t) over [a, b].

    Integrating the sine series term by term and resumming the resulting
    log series gives

        I(t) = (1/pi) [arg f(x+b) + arg f(x-b) + arg f(a-x) + arg f(-x-a)]

    with every argument folded into (-pi, pi].  Raises BoundaryAmbiguous
    when x coincides with a or b, where the t -> 1 limit is classified
    neither as inside nor outside.
    """
    if q.x == q.a or q.x == q.b:
        raise BoundaryAmbiguous(f"x={q.x!r} coincides with an interval endpoint")
    total = (
        _arg_f_folded(q.x + q.b, q.t)
        + _arg_f_folded(q.x - q.b, q.t)
        + _arg_f_folded(q.a - q.x, q.t)
        + _arg_f_folded(-q.x - q.a, q.t)
    )
    return total / PI


def _eval_test_function(g: Callable, y: np.ndarray) -> np.ndarray:
    out = np.asarray(g(y), dtype=np.float64)
    if out.shape != y.shape:
        out = np.array([float(g(v)) for v in y], dtype=np.float64)
    return out


def well_action(
    x: float,
    t: float,
    g: Callable,
    quad: Optional[QuadratureSpec] = None,
    operator: str = "identity",
) -> float:
    """Integrate K(x, ., t) g (identity) or H(x, ., t) g (hamiltonian)
    over [0, pi].

    As t -> 1 the identity action tends to g(x) and the hamiltonian
    action to -g''(x)/2.  The test function must vanish at 0 and pi
    (sine-basis compatibility); otherwise TestFunctionBoundary is raised.
    The kernel peaks at y = x with width ~ (1 - t), so the panel holding x
    is pre-split to width (1 - t)/4.
    """
    if operator not in ("identity", "hamiltonian"):
        raise InvalidConfig(f"unknown operator {operator!r}")
    if not 0.0 < x < PI:
        raise DomainError(f"x={x!r} must lie in (0, pi)")
    _check_t(t)
    if abs(float(g(0.0))) + abs(float(g(PI))) > 1e-12:
        raise TestFunctionBoundary("test function must vanish at 0 and pi")

    kern = _k if operator == "identity" else _h

    def integrand(y: np.ndarray) -> np.ndarray:
        return kern(x, y, t) * _eval_test_function(g, y)

    res = integrate(
        integrand, 0.0, PI, quad, peak=x, peak_min_width=(1.0 - t) / 4.0
    )
    return res.value
