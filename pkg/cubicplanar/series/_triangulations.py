"""Tutte's equation for rooted simple triangulations.

``U(z) (1 - U(z))**3 = z`` and ``Q(z) = U(z) (1 - 2 U(z))``, where ``[z^n] Q``
counts rooted simple triangulations with ``n + 2`` vertices.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.special import gammaln

from cubicplanar.series._power_series import PowerSeries, _dot

if TYPE_CHECKING:
    from cubicplanar.series._power_series import Mode, Scalar

TAU = Fraction(27, 256)
"""Radius of convergence of ``Q``."""

Q_AT_TAU = Fraction(1, 8)
Q_PRIME_AT_TAU = Fraction(16, 9)
Q_SUM_BEYOND_ONE = Q_AT_TAU - TAU
"""``sum_{n >= 2} q_n tau^n``, the total weight of 3-connected cores at criticality."""

TRIANGULATION_CONSTANT = math.sqrt(6) / (32 * math.sqrt(math.pi))
"""Constant of ``q_n ~ c n^(-5/2) tau^(-n)``."""


class TutteComposer:
    """Coefficientwise evaluation of ``U(w)`` and ``Q(w)`` for a growing series ``w``.

    Coefficients of ``w`` (with ``w_0 = 0``) are supplied one degree at a
    time through `push`; after pushing ``w_m`` the coefficients of degree
    ``m`` of ``U(w)`` and ``Q(w)`` are available. With ``R = (1 - U)**-3``
    the recurrences are ``U = w R`` and
    ``m R_m = sum_{k=1}^{m} (2k + m) U_k R_{m-k}``.
    """

    def __init__(self, order: int, mode: Mode) -> None:
        dtype = object if mode == "exact" else float
        zero: Scalar = Fraction(0) if mode == "exact" else 0.0
        self.mode = mode
        self.w = np.full(order + 1, zero, dtype=dtype)
        self.u = np.full(order + 1, zero, dtype=dtype)
        self.r = np.full(order + 1, zero, dtype=dtype)
        self.q = np.full(order + 1, zero, dtype=dtype)
        self.r[0] = Fraction(1) if mode == "exact" else 1.0
        self.m = 0

    def push(self, w_m: Scalar) -> tuple[Any, Any]:
        """Append the next coefficient of ``w`` and return ``([z^m] U(w), [z^m] Q(w))``."""
        self.m += 1
        m = self.m
        self.w[m] = w_m
        self.u[m] = _dot(self.w, self.r, 1, m, m)
        weights = 2 * np.arange(1, m + 1) + m
        if self.mode == "exact":
            self.r[m] = np.dot(self.u[1 : m + 1] * weights, self.r[m - 1 :: -1]) / Fraction(m)
        else:
            self.r[m] = np.dot(self.u[1 : m + 1] * weights, self.r[m - 1 :: -1]) / m
        self.q[m] = self.u[m] - 2 * _dot(self.u, self.u, 1, m - 1, m)
        return self.u[m], self.q[m]


def _tutte(order: int, mode: Mode, scale: Scalar) -> TutteComposer:
    composer = TutteComposer(order, mode)
    scale = Fraction(scale) if mode == "exact" else float(scale)
    for m in range(1, order + 1):
        composer.push(scale if m == 1 else 0 * scale)
    return composer


def triangulation_series(order: int, mode: Mode = "exact", *, scale: Scalar = 1) -> PowerSeries:
    """The series ``Q(scale * z)`` truncated at ``order``.

    ``U`` is obtained as the coefficientwise fixed point of
    ``U = z (1 - U)**-3`` and substituted into ``Q = U (1 - 2 U)``.

    Parameters
    ----------
    order
        Truncation degree, ``order >= 0``. Order 0 gives the zero series.
    mode
        ``"exact"`` (rationals) or ``"float"``.
    scale
        Scales the variable; ``scale = 27/256`` keeps large float orders in range.

    Examples
    --------
    >>> triangulation_series(3).to_list()
    [Fraction(0, 1), Fraction(1, 1), Fraction(1, 1), Fraction(3, 1)]

    """
    return PowerSeries(_tutte(order, mode, scale).q, mode)


def tutte_series(order: int, mode: Mode = "exact", *, scale: Scalar = 1) -> PowerSeries:
    """The series ``U(scale * z)`` of ``U (1 - U)**3 = z``."""
    return PowerSeries(_tutte(order, mode, scale).u, mode)


def triangulation_count(n: int) -> int:
    """``q_n = 2 (4n - 3)! / (n! (3n - 1)!)`` rooted simple triangulations on ``n + 2`` vertices."""
    if n < 1:
        return 0
    return 2 * math.factorial(4 * n - 3) // (math.factorial(n) * math.factorial(3 * n - 1))


def tutte_count(n: int) -> int:
    """``[z^n] U = binomial(4n - 2, n - 1) / n``."""
    if n < 1:
        return 0
    return math.comb(4 * n - 2, n - 1) // n


def log_triangulation_counts(n_max: int) -> np.ndarray:
    """``log q_n`` for ``n = 0..n_max`` (``-inf`` at ``n = 0``), via log-Gamma."""
    n = np.arange(n_max + 1, dtype=float)
    out = np.full(n_max + 1, -np.inf)
    k = n[1:]
    out[1:] = np.log(2) + gammaln(4 * k - 2) - gammaln(k + 1) - gammaln(3 * k)
    return out


def critical_core_weights(j_max: int) -> np.ndarray:
    """``q_j tau**j`` for ``j = 0..j_max``; entries 0 and 1 are zero.

    These are the unnormalised probabilities of a 3-connected core with
    ``2j`` vertices at the critical point; they sum to ``1/8 - 27/256``.
    """
    logs = log_triangulation_counts(j_max) + np.arange(j_max + 1) * math.log(TAU)
    weights = np.exp(logs)
    weights[:2] = 0.0
    return weights
