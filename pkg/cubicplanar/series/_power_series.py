"""Truncated univariate power series with exact rational or float coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Literal, TypeAlias, Union

import numpy as np

from cubicplanar.exceptions import SeriesError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

Mode: TypeAlias = Literal["exact", "float"]
Parity: TypeAlias = Literal["any", "even"]
Scalar: TypeAlias = Union[int, float, Fraction]

_MODES = ("exact", "float")
_PARITIES = ("any", "even")


def _coerce(values: Iterable[Any], mode: Mode) -> np.ndarray:
    if mode == "exact":
        coeffs = [Fraction(v) for v in values]
        array = np.empty(len(coeffs), dtype=object)
        array[:] = coeffs
    else:
        array = np.array([float(v) for v in values], dtype=float)
    array.setflags(write=False)
    return array


def _dot(a: np.ndarray, b: np.ndarray, start: int, stop: int, total: int) -> Any:
    """Sum of ``a[i] * b[total - i]`` for ``start <= i <= stop``."""
    if stop < start:
        return 0
    return np.dot(a[start : stop + 1], b[total - stop : total - start + 1][::-1])


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """A power series truncated after degree ``order``.

    Parameters
    ----------
    coeffs
        Coefficients of degrees ``0..order``. Exact series hold
        `fractions.Fraction` values, float series hold ``float64``.
    mode
        ``"exact"`` or ``"float"``. Never inferred from the coefficients.
    parity
        ``"even"`` asserts that every odd coefficient is exactly zero.

    """

    coeffs: np.ndarray = field(repr=False)
    mode: Mode = "exact"
    parity: Parity = "any"

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            msg = f"Unknown series mode `{self.mode}`, use one of {_MODES}."
            raise SeriesError(msg)
        if self.parity not in _PARITIES:
            msg = f"Unknown parity `{self.parity}`, use one of {_PARITIES}."
            raise SeriesError(msg)
        coeffs = _coerce(self.coeffs, self.mode)
        if len(coeffs) == 0:
            msg = "A power series needs at least the constant coefficient."
            raise SeriesError(msg)
        if self.parity == "even" and any(coeffs[1::2] != 0):
            msg = "Series flagged even-only has a non-zero odd coefficient."
            raise SeriesError(msg)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeros(cls, order: int, mode: Mode = "exact", parity: Parity = "any") -> PowerSeries:
        """The zero series truncated at ``order``."""
        return cls([0] * (order + 1), mode, parity)

    @classmethod
    def constant(
        cls,
        value: Scalar,
        order: int,
        mode: Mode = "exact",
        parity: Parity = "any",
    ) -> PowerSeries:
        """The constant series ``value``."""
        return cls([value] + [0] * order, mode, parity)

    @classmethod
    def monomial(cls, degree: int, order: int, mode: Mode = "exact", scale: Scalar = 1) -> PowerSeries:
        """The series ``scale * x**degree`` (zero if ``degree > order``)."""
        coeffs: list[Scalar] = [0] * (order + 1)
        if degree <= order:
            coeffs[degree] = scale
        return cls(coeffs, mode, "even" if degree % 2 == 0 else "any")

    @property
    def order(self) -> int:
        """Truncation degree."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Any:
        return self.coeffs[n]

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""  # noqa: PLR2004
        return f"PowerSeries([{shown}{more}], order={self.order}, mode={self.mode!r}, parity={self.parity!r})"

    def to_list(self) -> list[Any]:
        """Coefficients as a list."""
        return list(self.coeffs)

    def _new(self, coeffs: Iterable[Any], parity: Parity) -> PowerSeries:
        return PowerSeries(np.asarray(list(coeffs), dtype=object), self.mode, parity)

    def _check_compatible(self, other: PowerSeries) -> int:
        if other.mode != self.mode:
            msg = f"Cannot combine `{self.mode}` and `{other.mode}` series, use `astype` first."
            raise SeriesError(msg)
        return min(self.order, other.order)

    def _joint_parity(self, other: PowerSeries) -> Parity:
        return "even" if self.parity == other.parity == "even" else "any"

    def _scalar(self, value: Scalar) -> Scalar:
        return Fraction(value) if self.mode == "exact" else float(value)

    def truncate(self, order: int) -> PowerSeries:
        """Drop all coefficients above ``order``."""
        if order > self.order:
            msg = f"Cannot truncate a series of order {self.order} to the larger order {order}."
            raise SeriesError(msg)
        return self._new(self.coeffs[: order + 1], self.parity)

    def astype(self, mode: Mode) -> PowerSeries:
        """Convert between exact and float coefficients."""
        return PowerSeries(self.coeffs, mode, self.parity)

    def __add__(self, other: PowerSeries | Scalar) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] + self._scalar(other)
            return self._new(coeffs, self.parity)
        order = self._check_compatible(other)
        return self._new(
            self.coeffs[: order + 1] + other.coeffs[: order + 1],
            self._joint_parity(other),
        )

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return self._new(-self.coeffs, self.parity)

    def __sub__(self, other: PowerSeries | Scalar) -> PowerSeries:
        return self + (-other)

    def __rsub__(self, other: Scalar) -> PowerSeries:
        return (-self) + other

    def __mul__(self, other: PowerSeries | Scalar) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            return self._new(self.coeffs * self._scalar(other), self.parity)
        order = self._check_compatible(other)
        a, b = self.coeffs[: order + 1], other.coeffs[: order + 1]
        if self.mode == "float":
            product = np.convolve(a.astype(float), b.astype(float))[: order + 1]
        else:
            product = [_dot(a, b, 0, n, n) for n in range(order + 1)]
        return self._new(product, self._joint_parity(other))

    __rmul__ = __mul__

    def __truediv__(self, other: PowerSeries | Scalar) -> PowerSeries:
        if isinstance(other, PowerSeries):
            return self * other.inverse()
        return self * (1 / self._scalar(other))

    def __pow__(self, exponent: int) -> PowerSeries:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = PowerSeries.constant(1, self.order, self.mode, "even")
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def equals(self, other: PowerSeries) -> bool:
        """Coefficientwise equality up to the smaller order."""
        order = self._check_compatible(other)
        return bool(np.all(self.coeffs[: order + 1] == other.coeffs[: order + 1]))

    def allclose(self, other: PowerSeries, rtol: float = 1e-12) -> bool:
        """Coefficientwise agreement to ``rtol`` relative to the larger magnitude."""
        order = min(self.order, other.order)
        a = np.array([float(c) for c in self.coeffs[: order + 1]])
        b = np.array([float(c) for c in other.coeffs[: order + 1]])
        scale = np.maximum(np.abs(a), np.abs(b))
        return bool(np.all(np.abs(a - b) <= rtol * scale))

    def shift(self, k: int) -> PowerSeries:
        """Multiply by ``x**k`` keeping the truncation order."""
        if k < 0:
            msg = "Use `truncate` and slicing for negative shifts."
            raise SeriesError(msg)
        coeffs = [0] * k + list(self.coeffs[: max(self.order + 1 - k, 0)])
        parity = self.parity if k % 2 == 0 else "any"
        return self._new(coeffs, parity)

    def derivative(self) -> PowerSeries:
        """Formal derivative, one order shorter."""
        coeffs = [n * self.coeffs[n] for n in range(1, self.order + 1)] or [0]
        return self._new(coeffs, "any")

    def inverse(self) -> PowerSeries:
        """Multiplicative inverse; the constant term must be non-zero."""
        c0 = self.coeffs[0]
        if c0 == 0:
            msg = "Cannot invert a series with zero constant term."
            raise SeriesError(msg)
        one = self._scalar(1)
        out = np.empty(self.order + 1, dtype=object if self.mode == "exact" else float)
        out[0] = one / c0
        for n in range(1, self.order + 1):
            out[n] = -_dot(self.coeffs, out, 1, n, n) / c0
        return self._new(out, self.parity)

    def sqrt(self) -> PowerSeries:
        """Square root with positive constant term, see `series_sqrt`."""
        return series_sqrt(self)

    def compose(self, inner: PowerSeries) -> PowerSeries:
        """The series ``self(inner(x))`` by Horner's rule; ``inner`` has no constant term."""
        if inner.coeffs[0] != 0:
            msg = "The inner series of a composition must have zero constant term."
            raise SeriesError(msg)
        order = self._check_compatible(inner)
        inner = inner.truncate(order)
        result = PowerSeries.constant(self.coeffs[order], order, self.mode)
        for k in range(order - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        parity: Parity = "even" if inner.parity == "even" else "any"
        return PowerSeries(result.coeffs, self.mode, parity)


def series_sqrt(s: PowerSeries) -> PowerSeries:
    """Square root of a series by Newton iteration with doubling precision.

    Parameters
    ----------
    s
        Series with strictly positive constant term. In exact mode the
        constant term must be the square of a rational.

    Returns
    -------
        The series ``t`` with positive constant term and ``t * t == s``
        coefficientwise up to ``s.order``.

    """
    c0 = s.coeffs[0]
    if not c0 > 0:
        msg = f"Series square root needs a positive constant term, got {c0}."
        raise SeriesError(msg)
    if s.mode == "exact":
        num, den = math.isqrt(c0.numerator), math.isqrt(c0.denominator)
        if Fraction(num, den) ** 2 != c0:
            msg = f"Constant term {c0} has no rational square root."
            raise SeriesError(msg)
        root: Scalar = Fraction(num, den)
    else:
        root = math.sqrt(c0)
    t = PowerSeries.constant(root, 0, s.mode, s.parity)
    precision = 0
    while precision < s.order:
        precision = min(2 * precision + 1, s.order)
        padded = PowerSeries([*t.coeffs, *([0] * (precision - t.order))], s.mode)
        target = s.truncate(precision)
        t = (padded + target * padded.inverse()) * Fraction(1, 2)
    return PowerSeries(t.coeffs, s.mode, s.parity)


def even_from_t(values: Sequence[Any], order: int, mode: Mode) -> PowerSeries:
    """The even series ``sum values[m] x**(2m)`` truncated at ``order``."""
    coeffs: list[Any] = [0] * (order + 1)
    for m, value in enumerate(values):
        if 2 * m > order:
            break
        coeffs[2 * m] = value
    return PowerSeries(coeffs, mode, "even")
