"""Singular constants of the network series ``D`` at its dominant singularity ``rho``.

Composing ``Q`` into ``x**2 (1 + D)**3`` and eliminating ``L``, ``S``, ``P``
from the grammar gives the closed equation::

    Phi(x, D) = (1 + D) sqrt(x**4/4 + 1 - x**2 (D - 1)) - 1 - Q(x**2 (1 + D)**3) / 2 = 0

The singularity is reached when the argument of ``Q`` hits ``tau = 27/256``,
where ``Q(tau) = 1/8`` and ``Q'(tau) = 16/9``.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import mpmath
import numpy as np

from cubicplanar._utils import to_jsonable
from cubicplanar.exceptions import ConstantsError
from cubicplanar.series._triangulations import Q_AT_TAU, Q_PRIME_AT_TAU, Q_SUM_BEYOND_ONE, TAU

if TYPE_CHECKING:
    from cubicplanar.series._grammar import GrammarTable

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 30
_GUARD_DIGITS = 15
_MAX_NEWTON_STEPS = 200

_FIELDS = (
    "rho",
    "D0",
    "Dprime",
    "D2",
    "D3",
    "kappa",
    "c_v",
    "c_D",
    "C3dot",
    "meanY",
    "Cidentity",
    "z_slope",
)


@dataclass(frozen=True)
class SingularData:
    """All singular constants, as ``mpmath.mpf`` values with ``precision`` digits.

    Attributes
    ----------
    rho
        Dominant singularity of ``D(x)``.
    tau
        ``27/256``, exactly.
    D0, Dprime
        ``D(rho)`` and ``D'(rho)``.
    D2, D3
        Coefficients of ``(1 - x/rho)`` and ``(1 - x/rho)**(3/2)`` in the
        singular expansion of ``D``; ``D2 = -rho Dprime``.
    kappa
        Asymptotic fraction of vertices in the largest 3-connected component.
    c_v
        Scale of the map-Airy fluctuations of that component.
    c_D
        ``[x^n] D ~ c_D n^(-5/2) rho^(-n)`` for even ``n``.
    C3dot
        Coefficient of ``(1 - x/rho)**(3/2)`` of the vertex-rooted series.
    meanY
        Mean of the Boltzmann network size ``Y``.
    Cidentity
        The constant that evaluates algebraically to 2.
    z_slope
        ``1 - x**2 (1 + D)**3 / tau ~ z_slope (1 - x/rho)``; equals ``2/kappa``.
    residuals
        Residuals of the two defining equations at the solution.

    """

    rho: mpmath.mpf
    D0: mpmath.mpf
    Dprime: mpmath.mpf
    D2: mpmath.mpf
    D3: mpmath.mpf
    kappa: mpmath.mpf
    c_v: mpmath.mpf
    c_D: mpmath.mpf
    C3dot: mpmath.mpf
    meanY: mpmath.mpf
    Cidentity: mpmath.mpf
    z_slope: mpmath.mpf
    precision: int = DEFAULT_PRECISION
    residuals: tuple[mpmath.mpf, mpmath.mpf] = field(default=(mpmath.mpf(0), mpmath.mpf(0)))
    tau: Fraction = TAU

    @property
    def meanY_from_kappa(self) -> mpmath.mpf:
        """``(2/3) (1/kappa - 1)``, the second expression for ``E[Y]``."""
        return mpmath.mpf(2) / 3 * (1 / self.kappa - 1)

    def as_floats(self) -> dict[str, float]:
        """Double precision values of all constants."""
        return {name: float(getattr(self, name)) for name in _FIELDS} | {"tau": float(self.tau)}

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping with decimal strings (rationals as ``"p/q"``)."""
        with mpmath.workdps(self.precision):
            return to_jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SingularData:
        """Inverse of `to_dict`."""
        precision = int(data.get("precision", DEFAULT_PRECISION))
        with mpmath.workdps(precision + _GUARD_DIGITS):
            values = {name: mpmath.mpf(data[name]) for name in _FIELDS}
            residuals = tuple(mpmath.mpf(r) for r in data.get("residuals", (0, 0)))
        return cls(**values, precision=precision, residuals=residuals)  # type: ignore[arg-type]


def _defining_equations(rho: mpmath.mpf, d0: mpmath.mpf) -> tuple[mpmath.matrix, mpmath.matrix]:
    """Residuals and Jacobian of ``Phi(rho, D0) = 0`` (with ``Q = 1/8``) and ``rho^2 (1+D0)^3 = tau``."""
    s = mpmath.sqrt(rho**4 / 4 + 1 - rho**2 * (d0 - 1))
    ds_drho = (rho**3 - 2 * rho * (d0 - 1)) / (2 * s)
    ds_dd0 = -(rho**2) / (2 * s)
    q_half = mpmath.mpf(Q_AT_TAU.numerator) / Q_AT_TAU.denominator / 2
    tau = mpmath.mpf(TAU.numerator) / TAU.denominator
    residual = mpmath.matrix([(1 + d0) * s - 1 - q_half, rho**2 * (1 + d0) ** 3 - tau])
    jacobian = mpmath.matrix(
        [
            [(1 + d0) * ds_drho, s + (1 + d0) * ds_dd0],
            [2 * rho * (1 + d0) ** 3, 3 * rho**2 * (1 + d0) ** 2],
        ],
    )
    return residual, jacobian


def _damped_newton(
    start: tuple[float, float],
    tolerance: mpmath.mpf,
) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.matrix]:
    x = mpmath.matrix([mpmath.mpf(start[0]), mpmath.mpf(start[1])])
    residual, jacobian = _defining_equations(x[0], x[1])
    for step in range(_MAX_NEWTON_STEPS):
        norm = mpmath.norm(residual, mpmath.inf)
        if norm < tolerance:
            logger.debug("Newton converged after %d steps, residual %s", step, mpmath.nstr(norm, 3))
            return x[0], x[1], residual
        delta = mpmath.lu_solve(jacobian, -residual)
        damping = mpmath.mpf(1)
        while True:
            candidate = x + damping * delta
            if candidate[0] > 0 and candidate[1] > -1:
                trial_residual, trial_jacobian = _defining_equations(candidate[0], candidate[1])
                if mpmath.norm(trial_residual, mpmath.inf) < norm:
                    break
            damping /= 2
            if damping < mpmath.mpf(2) ** -60:
                msg = f"Newton step could not decrease the residuals {residual.tolist()}."
                raise ConstantsError(msg)
        x, residual, jacobian = candidate, trial_residual, trial_jacobian
    msg = (
        f"Newton iteration did not converge in {_MAX_NEWTON_STEPS} steps;"
        f" residuals {residual.tolist()}."
    )
    raise ConstantsError(msg)


def solve_singular_constants(precision: int = DEFAULT_PRECISION) -> SingularData:
    """Solve for ``rho``, ``D(rho)`` and derive every other singular constant.

    The pair ``(rho, D0)`` solves the closed equation at ``Q = 1/8``
    together with ``rho**2 (1 + D0)**3 = 27/256`` by damped Newton from
    ``(0.32, 0.01)``. ``D'(rho)`` follows by implicit differentiation of the
    closed equation and ``D3`` by requiring that the ``(1 - x/rho)**(3/2)``
    coefficient of its Puiseux expansion vanishes.

    Parameters
    ----------
    precision
        Number of correct decimal digits requested (at least 10).

    Returns
    -------
        The `SingularData`.

    Raises
    ------
    ConstantsError
        If ``precision < 10`` or the Newton iteration fails.

    Examples
    --------
    >>> c = solve_singular_constants(20)
    >>> mpmath.nstr(c.rho, 15)
    '0.319224606195453'

    """
    if precision < 10:  # noqa: PLR2004
        msg = f"Precision must be at least 10 digits, got {precision}."
        raise ConstantsError(msg)
    with mpmath.workdps(precision + _GUARD_DIGITS):
        tolerance = mpmath.mpf(10) ** -(precision + 5)
        rho, d0, residual = _damped_newton((0.32, 0.01), tolerance)
        values = _derived_constants(rho, d0)
        return SingularData(
            **values,
            precision=precision,
            residuals=(residual[0], residual[1]),
        )


def _derived_constants(rho: mpmath.mpf, d0: mpmath.mpf) -> dict[str, mpmath.mpf]:
    one = mpmath.mpf(1)
    tau = mpmath.mpf(TAU.numerator) / TAU.denominator
    q_prime = mpmath.mpf(Q_PRIME_AT_TAU.numerator) / Q_PRIME_AT_TAU.denominator
    e = one + d0
    s = mpmath.sqrt(rho**4 / 4 + 1 - rho**2 * (d0 - 1))
    phi_x = e * (rho**3 - 2 * rho * (d0 - 1)) / (2 * s) - q_prime * rho * e**3
    phi_d = s - e * rho**2 / (2 * s) - q_prime * 3 * rho**2 * e**2 / 2
    dprime = -phi_x / phi_d
    d2 = -rho * dprime
    # 1 - z(x)/tau ~ z_slope (1 - x/rho) with z = x^2 (1 + D)^3
    z_slope = rho * (2 * rho * e**3 + 3 * rho**2 * e**2 * dprime) / tau
    d3 = z_slope ** mpmath.mpf(1.5) / (8 * mpmath.sqrt(6) * phi_d)
    kappa = 2 * e / (2 * e + 3 * dprime * rho)
    c_v = d3 * ((2 * d0 - 3 * d2 + 2) / d3) ** (mpmath.mpf(5) / 3) / (6 * mpmath.cbrt(3) * e)
    radicand = mpmath.sqrt(-4 * d0 * rho**2 + rho**4 + 4 * rho**2 + 4)
    c3dot = d3 * (2 - 2 * rho**2 - rho**4) / (3 * radicand)
    cidentity = radicand / (
        8 * mpmath.sqrt(6) * (e / (2 * d0 - 3 * d2 + 2)) ** mpmath.mpf(2.5) * d3 * (2 - 2 * rho**2 - rho**4)
    )
    return {
        "rho": rho,
        "D0": d0,
        "Dprime": dprime,
        "D2": d2,
        "D3": d3,
        "kappa": kappa,
        "c_v": c_v,
        "c_D": 3 * d3 / (2 * mpmath.sqrt(mpmath.pi)),
        "C3dot": c3dot,
        "meanY": rho * dprime / e,
        "Cidentity": cidentity,
        "z_slope": z_slope,
    }


def cidentity_from_q3(constants: SingularData) -> mpmath.mpf:
    """The identity constant through the ``Z**3`` coefficient ``1/(4 sqrt 6)`` of ``Q``."""
    with mpmath.workdps(constants.precision + _GUARD_DIGITS):
        q3 = 1 / (4 * mpmath.sqrt(6))
        return q3 / constants.C3dot * constants.kappa ** mpmath.mpf(-2.5) * mpmath.mpf(2) ** mpmath.mpf(2.5) / 6


@dataclass(frozen=True)
class ClassValues:
    """Values of the grammar classes at ``x = rho`` (Boltzmann normalisers)."""

    L: float
    I: float
    S: float
    P: float
    H: float
    D: float
    Ns: float
    rho: float

    @property
    def P_double(self) -> float:
        """Parallel networks whose root edge is a double edge, ``rho**2 D``."""
        return self.rho**2 * self.D

    @property
    def P_pair(self) -> float:
        """Parallel networks made of an unordered pair, ``rho**2 D**2 / 2``."""
        return self.rho**2 * self.D**2 / 2

    @property
    def NsSeries(self) -> float:
        """Series networks that are simple, ``S - L**2``."""
        return self.S - self.L**2


def class_values(constants: SingularData) -> ClassValues:
    """Closed-form values of ``L, I, S, P, H, D, Ns`` at the singularity.

    ``H(rho) = (Q(tau) - tau) / (2 (1 + D0))`` because the argument of ``Q``
    equals ``tau`` exactly at ``rho``.
    """
    with mpmath.workdps(constants.precision + _GUARD_DIGITS):
        rho, d0 = constants.rho, constants.D0
        loop = 1 + rho**2 / 2 - mpmath.sqrt(rho**4 / 4 + 1 - rho**2 * (d0 - 1))
        isthmus = loop**2 / rho**2
        series = d0**2 / (1 + d0)
        parallel = rho**2 * d0 + rho**2 * d0**2 / 2
        q_excess = mpmath.mpf(Q_SUM_BEYOND_ONE.numerator) / Q_SUM_BEYOND_ONE.denominator
        polyhedral = q_excess / (2 * (1 + d0))
        simple = polyhedral + rho**2 * d0**2 / 2 + isthmus + series - loop**2
        return ClassValues(
            L=float(loop),
            I=float(isthmus),
            S=float(series),
            P=float(parallel),
            H=float(polyhedral),
            D=float(d0),
            Ns=float(simple),
            rho=float(rho),
        )


def connected_value(constants: SingularData, table: GrammarTable) -> float:
    """``C(rho)``, the exponential generating function of connected cubic planar graphs at ``rho``.

    Sums ``[x^n] C = [x^n] Cdot / n`` from a Boltzmann-normalised float table
    (``table.scale == rho**2``) and adds the ``n**(-7/2)`` tail beyond the
    table order.
    """
    rho2 = float(constants.rho) ** 2
    if table.mode != "float" or not np.isclose(float(table.scale), rho2, rtol=1e-12):
        msg = "connected_value needs a float table normalised with scale rho**2."
        raise ConstantsError(msg)
    cdot = np.asarray(table.t_coeffs["Cdot"], dtype=float)
    m = np.arange(1, len(cdot))
    head = float(np.sum(cdot[1:] / (2 * m)))
    n_max = 2 * (len(cdot) - 1)
    tail_constant = 3 * float(constants.C3dot) / (2 * np.sqrt(np.pi))
    tail = tail_constant * n_max ** (-2.5) / 5
    return head + tail
