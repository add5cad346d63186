"""Adaptive 1-D quadrature and the radial 3-D Fourier transform oracle.

The transform uses the 2pi-in-the-exponent convention,

    F(k) = (2/k) * int_0^inf r f(r) sin(2 pi k r) dr,

the three-dimensional radial (Bochner) reduction.  The oscillatory integral
is partitioned at the zeros of the sine and the alternating half-period
contributions are summed with iterated averaging, which also Abel-sums the
polynomially growing integrands that arise from tempered radial profiles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad as _scipy_quad

from .specfun import DEFAULT_TOL, Tolerance

_GLX, _GLW = leggauss(32)


class QuadratureError(RuntimeError):
    """Quadrature failed to meet the requested tolerance.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class RadialFunction:
    """A radial profile r -> f(r) with its declared behavior near zero.

    ``singularity_order_at_zero`` is the s in f(r) ~ r^-s; it must stay
    below 3 so that r^2 f(r) is integrable in three dimensions.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    singularity_order_at_zero: float = 0.0

    def __post_init__(self) -> None:
        if self.singularity_order_at_zero >= 3.0:
            raise ValueError("singularity order must be < 3 for 3-D integrability")

    def __call__(self, r):
        return self.eval(r)


def _as_radial(f) -> RadialFunction:
    return f if isinstance(f, RadialFunction) else RadialFunction(eval=f)


def integrate_adaptive(f, a: float, b: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Adaptive integral of a radial function over (a, b), b possibly inf."""
    rf = _as_radial(f)
    val, err = _scipy_quad(
        lambda r: float(rf.eval(r)),
        a, b,
        epsabs=tol.abs_tol, epsrel=tol.rel_tol, limit=tol.max_subdivisions,
    )
    if err > max(tol.abs_tol, tol.rel_tol * abs(val)) * 50.0:
        raise QuadratureError(
            f"integral over ({a}, {b}) did not converge: estimate {val}, bound {err}",
            estimate=val, error_bound=err,
        )
    return val


def _half_period_terms(rf: RadialFunction, k: float, n_terms: int) -> np.ndarray:
    """Integrals of r f(r) sin(2 pi k r) over consecutive half periods."""
    h = 1.0 / (2.0 * k)
    terms = np.empty(n_terms)
    # First interval adaptively: f may carry an integrable singularity at 0.
    val, _ = _scipy_quad(
        lambda r: float(rf.eval(r)) * r * np.sin(2.0 * np.pi * k * r),
        0.0, h, epsabs=1e-14, epsrel=1e-12, limit=200,
    )
    terms[0] = val
    for j in range(1, n_terms):
        a = j * h
        r = a + 0.5 * h * (_GLX + 1.0)
        integrand = r * np.asarray(rf.eval(r), dtype=float) * np.sin(2.0 * np.pi * k * r)
        terms[j] = 0.5 * h * (_GLW * integrand).sum()
    return terms


def _euler_abel_sum(terms: np.ndarray) -> tuple[float, float]:
    """Iterated averaging of the partial sums of an alternating sequence.

    Returns the deepest average together with a stabilization estimate
    (the change over the last averaging levels).  Converges to the Abel
    sum for alternating terms of at most polynomial growth.
    """
    s = np.cumsum(terms)
    prev = s[-1]
    last_levels = []
    while len(s) > 1:
        s = 0.5 * (s[:-1] + s[1:])
        last_levels.append(s[-1])
        prev = s[-1]
    tail = np.array(last_levels[-6:])
    spread = float(np.ptp(tail)) if len(tail) > 1 else np.inf
    return float(prev), spread


def radial_fourier3(
    f,
    k: float,
    tol: Tolerance = DEFAULT_TOL,
    max_half_periods: int = 160,
) -> float:
    """3-D Fourier transform of a radial function at wavenumber k > 0."""
    if k <= 0.0:
        raise ValueError("radial_fourier3 requires k > 0")
    rf = _as_radial(f)
    n = min(max_half_periods, max(48, 32))
    best, spread = None, np.inf
    while n <= max_half_periods:
        terms = _half_period_terms(rf, k, n)
        best, spread = _euler_abel_sum(terms)
        scale = max(abs(best), tol.abs_tol)
        if spread <= 10.0 * max(tol.abs_tol, tol.rel_tol * scale):
            return (2.0 / k) * best
        n *= 2
    raise QuadratureError(
        f"oscillatory sum did not stabilize at k={k} (spread {spread})",
        estimate=(2.0 / k) * best, error_bound=(2.0 / k) * spread,
    )
