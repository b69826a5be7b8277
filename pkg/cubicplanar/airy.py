"""The map-Airy density of the largest 3-connected component.

``(V_n - kappa n) / n**(2/3)`` converges to the law with density
``c_v h(c_v t)``, where::

    h(t) = 1/(pi t) sum_{n >= 1} (-t 3**(2/3))**n Gamma(2n/3 + 1) / n! sin(-2 n pi / 3)

It is the strictly 3/2-stable law without positive jumps. Besides the
series this module offers two independent evaluations: the closed form
``2 exp(-2t**3/3) (t Ai(t**2) - Ai'(t**2))`` and inversion of the
characteristic function ``exp(-|k|**(3/2) exp(-i pi/4 sign k))``.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import mpmath
import numpy as np
from scipy import integrate, optimize, special

from cubicplanar.exceptions import AiryConvergenceError, AiryRangeError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

logger = logging.getLogger(__name__)

_SCALE = 3 ** (2 / 3)
_LEFT_TAIL_CONSTANT = 1 / (4 * math.sqrt(math.pi))
"""``h(t) ~ _LEFT_TAIL_CONSTANT |t|**(-5/2)`` as ``t -> -inf``."""
_FAR_LEFT = 200.0


def airy_density_closed_form(t: ArrayLike) -> np.ndarray:
    """``h(t) = 2 exp(-2t**3/3) (t Ai(t**2) - Ai'(t**2))``, vectorised.

    Uses the exponentially scaled Airy functions so that neither factor
    overflows: for ``t < 0`` the exponentials cancel exactly.
    """
    t = np.asarray(t, dtype=float)
    eai, eaip, _, _ = special.airye(t * t)
    exponent = np.where(t > 0, -4 * t**3 / 3, 0.0)
    return 2 * np.exp(exponent) * (t * eai - eaip)


def airy_density_cf(t: float) -> float:
    """``h(t)`` by numerical inversion of the characteristic function.

    ``h(t) = 3**(2/3) p(3**(2/3) t)`` where ``p`` has characteristic function
    ``exp(-|k|**(3/2) exp(-i pi/4 sign k))``, so that
    ``p(x) = 1/pi int_0^inf exp(-k**1.5 / sqrt 2) cos(k**1.5 / sqrt 2 - k x) dk``.
    """
    x = _SCALE * t
    c = 1 / math.sqrt(2)

    def integrand(k: float) -> float:
        k32 = k**1.5
        return math.exp(-c * k32) * math.cos(c * k32 - k * x)

    # exp(-k**1.5 / sqrt 2) < 1e-40 beyond k = 25
    total = sum(
        integrate.quad(integrand, a, a + 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)[0]
        for a in range(25)
    )
    return _SCALE * total / math.pi


@dataclass(frozen=True)
class AiryEval:
    """Evaluation settings of the map-Airy density and its CDF.

    Parameters
    ----------
    terms
        Largest series index used. At ``t = 6`` about 3300 terms are needed.
    t_switch
        The series is refused for ``|t| > t_switch``; the CDF table covers
        ``[-t_switch, t_switch]``.
    quadrature_step
        Step of the trapezoid rule of the CDF table. The table integrates
        `airy_density_closed_form`, which agrees with the series `airy_density` to
        about ``1e-10`` and takes one vectorised call instead of one series
        per grid point.
    tolerance
        The series stops once a term is below ``tolerance`` relative to the
        partial sum (after the terms started to decrease).

    """

    terms: int = 4000
    t_switch: float = 6.0
    quadrature_step: float = 1e-3
    tolerance: float = 1e-14

    def __post_init__(self) -> None:
        if self.terms < 2:  # noqa: PLR2004
            msg = f"Need at least 2 series terms, got {self.terms}."
            raise ValueError(msg)
        if self.t_switch <= 0 or self.quadrature_step <= 0:
            msg = "`t_switch` and `quadrature_step` must be positive."
            raise ValueError(msg)

    def density(self, t: float) -> float:
        """``h(t)`` from the series, see `airy_density`."""
        if abs(t) > self.t_switch:
            msg = (
                f"|t| = {abs(t)} exceeds t_switch = {self.t_switch}; the series loses"
                " all precision there, use `airy_density_closed_form`."
            )
            raise AiryRangeError(msg)
        return _series_density(t, self.terms, self.tolerance)

    def scaled_density(self, t: float, scale: float) -> float:
        """Density ``scale h(scale t)`` of the rescaled law."""
        return scale * self.density(scale * t)

    @functools.cached_property
    def _table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n_steps = round(2 * self.t_switch / self.quadrature_step)
        grid = np.linspace(-self.t_switch, self.t_switch, n_steps + 1)
        values = airy_density_closed_form(grid)
        step = grid[1] - grid[0]
        cumulative = np.concatenate([[0.0], np.cumsum((values[1:] + values[:-1]) * step / 2)])
        return grid, values, cumulative

    @functools.cached_property
    def tail_mass(self) -> float:
        """``int_{-inf}^{-t_switch} h``, the mass left of the table."""
        return _left_tail_mass(-self.t_switch)

    @property
    def quadrature_mass(self) -> float:
        """``int_{-t_switch}^{t_switch} h`` by the trapezoid rule."""
        return float(self._table[2][-1])

    @property
    def total_mass(self) -> float:
        """Tail mass plus quadrature mass; 1 up to the quadrature error."""
        return self.tail_mass + self.quadrature_mass

    def cdf(self, t: float) -> float:
        """``P(X <= t)`` for ``|t| <= t_switch``, see `airy_cdf`."""
        if abs(t) > self.t_switch:
            msg = f"t = {t} is outside the CDF table [-{self.t_switch}, {self.t_switch}]."
            raise AiryRangeError(msg)
        return float(self._cdf_inside(np.array([t]))[0])

    def _cdf_inside(self, t: np.ndarray) -> np.ndarray:
        grid, values, cumulative = self._table
        index = np.clip(np.searchsorted(grid, t, side="right") - 1, 0, len(grid) - 2)
        partial = (t - grid[index]) * (values[index] + airy_density_closed_form(t)) / 2
        return np.clip(self.tail_mass + cumulative[index] + partial, 0.0, 1.0)

    def cdf_array(self, t: ArrayLike, scale: float = 1.0) -> np.ndarray:
        """CDF of the law with density ``scale h(scale t)`` on all of the real line.

        Points left of the table use the integrated left tail, points right
        of it get 1 (the right tail decays like ``exp(-4 t**3 / 3)``).
        """
        x = scale * np.atleast_1d(np.asarray(t, dtype=float))
        out = np.ones_like(x)
        inside = np.abs(x) <= self.t_switch
        out[inside] = self._cdf_inside(x[inside])
        left = x < -self.t_switch
        out[left] = [_left_tail_mass(v) for v in x[left]]
        return out

    def quantile(self, p: float, scale: float = 1.0) -> float:
        """Inverse of `cdf_array` by Brent's method."""
        if not 0 < p < 1:
            msg = f"Quantile level must lie in (0, 1), got {p}."
            raise ValueError(msg)
        lo = -self.t_switch
        while float(self.cdf_array(lo)[0]) > p:
            lo *= 2
        root = optimize.brentq(lambda x: float(self.cdf_array(x)[0]) - p, lo, self.t_switch)
        return root / scale


def _series_density(t: float, terms: int, tolerance: float) -> float:
    """Sum the series in extended precision.

    Grouping ``n = 3k + 1`` and ``n = 3k + 2`` (the ``n = 3k`` terms vanish)::

        h(t) = sqrt(3) / (2 pi) sum_k (-1)**k (a_{3k+1} + a_{3k+2}),
        a_n = 3**(2n/3) t**(n-1) Gamma(2n/3 + 1) / n!

    with ``a_{n+3} / a_n = 9 t**3 (2n/3 + 2)(2n/3 + 1) / ((n+1)(n+2)(n+3))``.
    The largest term is about ``exp(4|t|**3 / 3)`` and for ``t > 0`` the
    result is about ``exp(-4 t**3 / 3)``, so the working precision grows
    with ``|t|**3``.
    """
    digits = 25 + math.ceil(8 * abs(t) ** 3 / (3 * math.log(10)))
    with mpmath.workdps(digits):
        x = mpmath.mpf(t)
        three = mpmath.mpf(3)
        a1 = three ** (mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(5) / 3)
        a2 = three ** (mpmath.mpf(4) / 3) * x * mpmath.gamma(mpmath.mpf(7) / 3) / 2
        ratio_base = 9 * x**3
        total = mpmath.mpf(0)
        previous = mpmath.inf
        n = 1
        sign = 1
        while n + 1 <= terms:
            term = a1 + a2
            total += sign * term
            size = abs(term)
            if size < previous or size == 0:
                if size <= tolerance * abs(total) or (size == 0 and n > 1):
                    return float(mpmath.sqrt(3) / (2 * mpmath.pi) * total)
            previous = size
            a1 *= ratio_base * (2 * mpmath.mpf(n) / 3 + 2) * (2 * mpmath.mpf(n) / 3 + 1)
            a1 /= (n + 1) * (n + 2) * (n + 3)
            m = n + 1
            a2 *= ratio_base * (2 * mpmath.mpf(m) / 3 + 2) * (2 * mpmath.mpf(m) / 3 + 1)
            a2 /= (m + 1) * (m + 2) * (m + 3)
            n += 3
            sign = -sign
    msg = f"The map-Airy series at t={t} did not converge within {terms} terms."
    raise AiryConvergenceError(msg)


def _left_tail_mass(x: float) -> float:
    """``int_{-inf}^{x} h`` for ``x <= 0``, quadrature down to -200 plus the power-law tail."""
    far = min(x, -_FAR_LEFT)
    beyond = _LEFT_TAIL_CONSTANT * (2 / 3) * abs(far) ** -1.5
    if x <= -_FAR_LEFT:
        return _LEFT_TAIL_CONSTANT * (2 / 3) * abs(x) ** -1.5
    points = [p for p in (-100.0, -50.0, -20.0, -10.0) if -_FAR_LEFT < p < x]
    middle, _ = integrate.quad(
        lambda s: float(airy_density_closed_form(s)),
        -_FAR_LEFT,
        x,
        points=points or None,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=400,
    )
    return beyond + middle


@functools.lru_cache(maxsize=1)
def default_evaluator() -> AiryEval:
    """Shared `AiryEval` with default settings (its CDF table is built once)."""
    return AiryEval()


def airy_density(t: float, *, evaluator: AiryEval | None = None) -> float:
    """The map-Airy density ``h(t)`` from its series.

    The formal ``1/t`` prefactor cancels against the ``t`` in every term,
    so ``t = 0`` is a removable singularity with
    ``h(0) = 3**(2/3) Gamma(5/3) sqrt(3) / (2 pi)``.

    Raises
    ------
    AiryRangeError
        If ``|t|`` exceeds the evaluator's ``t_switch``.

    """
    return (evaluator or default_evaluator()).density(t)


def airy_cdf(t: float, *, evaluator: AiryEval | None = None) -> float:
    """``P(X <= t)`` for the map-Airy law, clamped to ``[0, 1]``.

    Raises
    ------
    AiryRangeError
        If ``|t|`` exceeds the evaluator's ``t_switch``.

    """
    return (evaluator or default_evaluator()).cdf(t)
