"""The network grammar for cubic planar graphs.

All classes are even series in ``x``; internally they are stored in the
variable ``t = x**2`` (index ``m`` is ``2m`` vertices). With the
abbreviations ``E = 1 + D`` and ``w = t E**3`` the grammar reads::

    L  = t/2 (D + I - L)               loop networks
    I  = L**2 / t                      isthmus networks
    S  = D**2 / (1 + D)                series networks
    P  = t D + t/2 D**2                parallel networks
    H  = (Q(w) - w) / (2 (1 + D))      polyhedral networks
    D  = L + S + P + H
    Ns = H + t/2 D**2 + I + (S - L**2) simple networks, and Cdot = Ns / 3

Every right-hand side only involves coefficients of strictly smaller degree
of ``D``, so the coefficients can be computed online, one degree at a time.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from cubicplanar.exceptions import GrammarBudgetError, GrammarConvergenceError, SeriesError
from cubicplanar.series._power_series import PowerSeries, _dot, even_from_t
from cubicplanar.series._triangulations import TAU, TutteComposer, triangulation_series, tutte_series

if TYPE_CHECKING:
    from cubicplanar.series._power_series import Mode, Scalar

logger = logging.getLogger(__name__)

NETWORK_CLASSES = ("D", "L", "I", "S", "P", "H", "N", "Ns", "Cdot")
"""Even ``x``-series stored in a `GrammarTable`."""

TABLE_CLASSES = ("Q", "U", *NETWORK_CLASSES)

MAX_EXACT_ORDER = 600
"""Largest ``x``-order solved with rational arithmetic (about 10 s)."""


@dataclass(frozen=True, eq=False)
class GrammarTable:
    """Coefficients of all grammar classes up to ``x``-degree ``order``.

    Parameters
    ----------
    order
        Truncation degree in ``x``.
    mode
        ``"exact"`` or ``"float"``.
    scale
        The stored values are coefficients of ``F(sqrt(scale) x)``, that is
        ``t``-coefficient ``m`` is multiplied by ``scale**m``.
        ``scale = rho**2`` gives Boltzmann-normalised tables.
    t_coeffs
        For each network class, the coefficients in ``t = x**2`` (index
        ``0..order // 2``).
    z_scale
        Scale of the variable of the stored ``Q`` and ``U`` series.
    triangulations
        ``Q`` and ``U`` as series in ``z``, truncated at ``order // 2``.

    """

    order: int
    mode: Mode
    scale: Scalar
    t_coeffs: dict[str, np.ndarray] = field(repr=False)
    z_scale: Scalar = 1
    triangulations: dict[str, PowerSeries] = field(default_factory=dict, repr=False)

    @property
    def t_order(self) -> int:
        """Largest stored ``t``-degree."""
        return self.order // 2

    @functools.cached_property
    def series(self) -> dict[str, PowerSeries]:
        """Map from class name to its `PowerSeries` (network classes in ``x``, Q and U in ``z``)."""
        out = {name: even_from_t(self.t_coeffs[name], self.order, self.mode) for name in NETWORK_CLASSES}
        out.update(self.triangulations)
        return out

    def coefficient(self, name: str, n: int) -> Any:
        """``[x^n]`` of class ``name`` (zero for odd ``n``)."""
        if name not in self.t_coeffs:
            msg = f"Unknown class `{name}`, use one of {NETWORK_CLASSES}."
            raise SeriesError(msg)
        if n > self.order:
            msg = f"Coefficient {n} requested from a table of order {self.order}."
            raise SeriesError(msg)
        if n % 2:
            return Fraction(0) if self.mode == "exact" else 0.0
        return self.t_coeffs[name][n // 2]

    def labelled_count(self, name: str, n: int) -> int:
        """``n! [x^n] F`` for an exact unscaled table (number of labelled structures)."""
        if self.mode != "exact" or self.scale != 1:
            msg = "Labelled counts need an exact table with scale 1."
            raise SeriesError(msg)
        count = self.coefficient(name, n) * math.factorial(n)
        assert count.denominator == 1
        return int(count)


def _zero_arrays(names: tuple[str, ...], size: int, mode: Mode) -> dict[str, np.ndarray]:
    zero: Scalar = Fraction(0) if mode == "exact" else 0.0
    dtype = object if mode == "exact" else float
    return {name: np.full(size, zero, dtype=dtype) for name in names}


def _solve_online(t_order: int, mode: Mode, sigma: Scalar) -> dict[str, np.ndarray]:
    half: Scalar = Fraction(1, 2) if mode == "exact" else 0.5
    c = _zero_arrays(("L", "I", "S", "P", "H", "D", "DmS", "E2", "E3"), t_order + 1, mode)
    L, I, S, P, H, D, DmS, E2, E3 = (c[k] for k in ("L", "I", "S", "P", "H", "D", "DmS", "E2", "E3"))
    E2[0] = E3[0] = 1
    tutte = TutteComposer(t_order, mode)
    for m in range(1, t_order + 1):
        L[m] = half * sigma * (D[m - 1] + I[m - 1] - L[m - 1])
        I[m] = _dot(L, L, 1, m, m + 1) / sigma
        S[m] = _dot(DmS, D, 1, m - 1, m)
        P[m] = sigma * (D[m - 1] + half * _dot(D, D, 1, m - 2, m - 1))
        w_m = sigma * E3[m - 1]
        _, qw_m = tutte.push(w_m)
        H[m] = half * (qw_m - w_m) - _dot(D, H, 1, m - 1, m)
        D[m] = L[m] + S[m] + P[m] + H[m]
        DmS[m] = D[m] - S[m]
        E2[m] = 2 * D[m] + _dot(D, D, 1, m - 1, m)
        E3[m] = E2[m] + _dot(E2, D, 0, m - 1, m)
    return {"D": D, "L": L, "I": I, "S": S, "P": P, "H": H}


def _grammar_rhs(
    D: PowerSeries,
    Q: PowerSeries,
    sigma: Scalar,
    z_scale: Scalar,
) -> dict[str, PowerSeries]:
    """All grammar classes as functions of ``D`` (series in ``t``)."""
    mode = D.mode
    order = D.order
    t = PowerSeries.monomial(1, order, mode, sigma)
    one = PowerSeries.constant(1, order, mode)
    E = one + D
    half = Fraction(1, 2)
    # L solves L = t/2 (D + L**2/t - L)
    root = (t * t * Fraction(1, 4) + one - t * (D - 1)).sqrt()
    L = one + t * half - root
    L2 = L * L
    I = PowerSeries([*L2.coeffs[1:], 0], mode) * (1 / _as_scalar(sigma, mode))
    S = D * D * E.inverse()
    P = t * D + t * D * D * half
    w = t * E * E * E
    H = (Q.compose(w * (1 / _as_scalar(z_scale, mode))) - w) * half * E.inverse()
    return {"L": L, "I": I, "S": S, "P": P, "H": H, "D": L + S + P + H}


def _as_scalar(value: Scalar, mode: Mode) -> Scalar:
    return Fraction(value) if mode == "exact" else float(value)


def _solve_iterate(t_order: int, mode: Mode, sigma: Scalar, z_scale: Scalar) -> dict[str, np.ndarray]:
    Q = triangulation_series(t_order, mode, scale=z_scale)
    D = PowerSeries.zeros(t_order, mode)
    for _ in range(2 * t_order + 2):
        D = _grammar_rhs(D, Q, sigma, z_scale)["D"]
    classes = _grammar_rhs(D, Q, sigma, z_scale)
    again = classes["D"]
    stable = again.equals(D) if mode == "exact" else again.allclose(D, rtol=1e-12)
    if not stable:
        msg = "The fixed-point iteration for D did not stabilise; this is a bug."
        raise GrammarConvergenceError(msg)
    return {name: np.array(series.coeffs) for name, series in classes.items()}


def _derived(base: dict[str, np.ndarray], sigma: Scalar, mode: Mode) -> dict[str, np.ndarray]:
    half: Scalar = Fraction(1, 2) if mode == "exact" else 0.5
    third: Scalar = Fraction(1, 3) if mode == "exact" else 1 / 3
    D, L, I, S, H = (base[k] for k in ("D", "L", "I", "S", "H"))
    size = len(D)
    out = _zero_arrays(("N", "Ns", "Cdot"), size, mode)
    for m in range(1, size):
        out["N"][m] = D[m] + I[m]
        pair = sigma * half * _dot(D, D, 1, m - 2, m - 1)
        out["Ns"][m] = H[m] + pair + I[m] + S[m] - _dot(L, L, 1, m - 1, m)
        out["Cdot"][m] = out["Ns"][m] * third
    return out


def solve_grammar(
    order: int,
    mode: Mode = "exact",
    *,
    method: Literal["online", "iterate"] = "online",
    scale: Scalar = 1,
    max_exact_order: int = MAX_EXACT_ORDER,
) -> GrammarTable:
    """Solve the network grammar for all coefficients up to ``x``-degree ``order``.

    Parameters
    ----------
    order
        Truncation degree in ``x`` (non-negative).
    mode
        ``"exact"`` for rationals, ``"float"`` for double precision.
    method
        ``"online"`` computes the coefficientwise fixed point of ``D`` in a
        single pass, keeping all classes in step. ``"iterate"`` runs the
        literal fixed-point iteration from the zero series with series
        arithmetic; it is cubic in the order and meant for small orders.
    scale
        Store coefficients of ``F(sqrt(scale) x)``. Float tables of order
        beyond about 600 overflow unless ``scale`` is close to ``rho**2``.
    max_exact_order
        Budget for exact mode.

    Returns
    -------
        The `GrammarTable`.

    Raises
    ------
    GrammarBudgetError
        If ``mode="exact"`` and ``order > max_exact_order``.
    GrammarConvergenceError
        If the iteration of ``method="iterate"`` does not stabilise.

    """
    if order < 0:
        msg = f"The order must be non-negative, got {order}."
        raise SeriesError(msg)
    if mode == "exact" and order > max_exact_order:
        msg = (
            f"Exact grammar coefficients up to order {order} exceed the rational"
            f" budget of {max_exact_order}; use `mode='float'`."
        )
        raise GrammarBudgetError(msg)
    sigma = _as_scalar(scale, mode)
    z_scale: Scalar = 1 if scale == 1 else _as_scalar(TAU, mode)
    t_order = order // 2
    logger.debug("Solving grammar to order %d (mode=%s, method=%s)", order, mode, method)
    if method == "online":
        base = _solve_online(t_order, mode, sigma)
    elif method == "iterate":
        base = _solve_iterate(t_order, mode, sigma, z_scale)
    else:
        msg = f"Unknown method `{method}`, use 'online' or 'iterate'."
        raise SeriesError(msg)
    t_coeffs = base | _derived(base, sigma, mode)
    for array in t_coeffs.values():
        array.setflags(write=False)
    triangulations = {
        "Q": triangulation_series(t_order, mode, scale=z_scale),
        "U": tutte_series(t_order, mode, scale=z_scale),
    }
    return GrammarTable(
        order=order,
        mode=mode,
        scale=sigma,
        t_coeffs=t_coeffs,
        z_scale=z_scale,
        triangulations=triangulations,
    )


def verify_grammar(table: GrammarTable) -> dict[str, float]:
    """Plug a table back into every grammar equation.

    Returns
    -------
        For each equation (``loop``, ``isthmus``, ``series``, ``parallel``,
        ``polyhedral``, ``total``, ``simple`` and the closed equation
        ``ford`` for ``D`` alone), the largest relative coefficient residual.
        Exact tables give exactly ``0.0``.

    """
    mode = table.mode
    t_order = table.t_order
    series = {k: PowerSeries(v, mode) for k, v in table.t_coeffs.items()}
    D, L, I, S, P, H = (series[k] for k in ("D", "L", "I", "S", "P", "H"))
    sigma = table.scale
    t = PowerSeries.monomial(1, t_order, mode, sigma)
    one = PowerSeries.constant(1, t_order, mode)
    half = Fraction(1, 2)
    E = one + D
    w = t * E * E * E
    Q = table.triangulations["Q"]
    QW = Q.compose(w * (1 / _as_scalar(table.z_scale, mode)))
    closed = _grammar_rhs(D, Q, sigma, table.z_scale)["D"]
    checks = {
        "loop": (L, t * (D + I - L) * half),
        "isthmus": (I * t, L * L),
        "series": (S * E, D * D),
        "parallel": (P, t * D + t * D * D * half),
        "polyhedral": (H * E * 2, QW - w),
        "total": (D, L + S + P + H),
        "simple": (series["Ns"], H + t * D * D * half + I + S - L * L),
        "ford": (D, closed),
    }
    return {name: _residual(lhs, rhs) for name, (lhs, rhs) in checks.items()}


def _residual(lhs: PowerSeries, rhs: PowerSeries) -> float:
    worst = 0.0
    for a, b in zip(lhs.coeffs, rhs.coeffs):
        if a == b:
            continue
        scale = max(abs(float(a)), abs(float(b)))
        worst = max(worst, abs(float(a - b)) / scale)
    return worst
