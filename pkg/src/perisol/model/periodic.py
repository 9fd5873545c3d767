""" Perisol
    Periodic coefficients (truncated Fourier series) and derived periodic functions
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from perisol.exceptions import ModelError

NONNEG_TOLERANCE = 1e-12
DERIVED_QUADRATURE_POINTS = 2049


def _as_floats(values) -> tuple:
    return tuple(float(value) for value in values)


@dataclass(frozen=True)
class PeriodicFn:
    """omega-periodic scalar coefficient

    f(t) = mean + sum_k a_k cos(2 pi k t / period) + b_k sin(2 pi k t / period)
    with a_k = cos_coeffs[k-1] and b_k = sin_coeffs[k-1]

    Coefficients flagged `nonneg` are checked at every evaluation: values below
    -1e-12 * (1 + sum |coefficients|) raise a ModelError, smaller negative values are
    rounding noise and are clipped to 0.
    """

    period: float
    mean: float = 0.0
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()
    nonneg: bool = True
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.period > 0 or not np.isfinite(self.period):
            raise ModelError(f"Period of coefficient {self.label or '?'} must be > 0")
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "cos_coeffs", _as_floats(self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", _as_floats(self.sin_coeffs))

    @classmethod
    def constant(cls, period: float, value: float, label: str = "", nonneg: bool = True):
        """Constant coefficient"""
        return cls(period=period, mean=value, nonneg=nonneg, label=label)

    @property
    def order(self) -> int:
        """Number of harmonics"""
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    def is_constant(self) -> bool:
        """True when every harmonic coefficient is zero"""
        return not any(self.cos_coeffs) and not any(self.sin_coeffs)

    def _harmonics(self):
        order = self.order
        cos_part = np.zeros(order)
        sin_part = np.zeros(order)
        cos_part[: len(self.cos_coeffs)] = self.cos_coeffs
        sin_part[: len(self.sin_coeffs)] = self.sin_coeffs
        return np.arange(1, order + 1), cos_part, sin_part

    def _scale(self) -> float:
        harmonics = sum(map(abs, self.cos_coeffs)) + sum(map(abs, self.sin_coeffs))
        return 1.0 + abs(self.mean) + harmonics

    def __call__(self, t):
        times = np.asarray(t, dtype=float)
        values = np.full(times.shape, self.mean)

        if self.order:
            harmonics, cos_part, sin_part = self._harmonics()
            phase = 2.0 * np.pi * np.mod(times, self.period) / self.period
            angles = np.multiply.outer(phase, harmonics)
            values = values + np.cos(angles) @ cos_part + np.sin(angles) @ sin_part

        if self.nonneg:
            threshold = -NONNEG_TOLERANCE * self._scale()
            if np.any(values < threshold):
                where = np.ravel(times)[np.argmin(values)]
                raise ModelError(
                    f"Coefficient {self.label or '?'} is negative at t={where:.17g} "
                    f"(value {np.min(values):.3e})"
                )
            values = np.maximum(values, 0.0)

        if values.ndim == 0:
            return float(values)
        return values

    def antiderivative(self, t):
        """Exact integral of the series from 0 to t (any real t)"""

        times = np.asarray(t, dtype=float)
        values = self.mean * times

        if self.order:
            harmonics, cos_part, sin_part = self._harmonics()
            phase = 2.0 * np.pi * np.mod(times, self.period) / self.period
            angles = np.multiply.outer(phase, harmonics)
            weights = self.period / (2.0 * np.pi * harmonics)
            values = values + np.sin(angles) @ (cos_part * weights)
            values = values + (1.0 - np.cos(angles)) @ (sin_part * weights)

        if values.ndim == 0:
            return float(values)
        return values

    def integral(self) -> float:
        """Integral over one period"""
        return self.mean * self.period

    def extrema(self, samples: int = 4096):
        """(min, max) over one period, sampled"""
        values = self(np.linspace(0.0, self.period, samples + 1))
        return float(np.min(values)), float(np.max(values))

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return PeriodicFn(
                self.period, self.mean + other, self.cos_coeffs, self.sin_coeffs, self.nonneg
            )
        if not isinstance(other, PeriodicFn):
            return NotImplemented
        if abs(other.period - self.period) > 1e-12 * self.period:
            raise ModelError("Cannot add coefficients with different periods")

        order = max(self.order, other.order)

        def padded(coeffs):
            return np.pad(np.asarray(coeffs, dtype=float), (0, order - len(coeffs)))

        return PeriodicFn(
            self.period,
            self.mean + other.mean,
            padded(self.cos_coeffs) + padded(other.cos_coeffs),
            padded(self.sin_coeffs) + padded(other.sin_coeffs),
            self.nonneg and other.nonneg,
        )

    __radd__ = __add__

    def __mul__(self, factor):
        if not isinstance(factor, (int, float)):
            return NotImplemented
        return PeriodicFn(
            self.period,
            self.mean * factor,
            [coef * factor for coef in self.cos_coeffs],
            [coef * factor for coef in self.sin_coeffs],
            self.nonneg and factor >= 0,
            self.label,
        )

    __rmul__ = __mul__

    def to_dict(self):
        """Config representation: a bare number for constants"""
        if self.is_constant():
            return self.mean
        data = {"mean": self.mean}
        if self.cos_coeffs:
            data["cos"] = list(self.cos_coeffs)
        if self.sin_coeffs:
            data["sin"] = list(self.sin_coeffs)
        return data

    @classmethod
    def from_dict(cls, period: float, data, label: str = "", nonneg: bool = True):
        """Build from a number or a {mean, cos, sin} mapping"""
        if isinstance(data, PeriodicFn):
            return data
        if isinstance(data, (int, float)):
            return cls.constant(period, data, label=label, nonneg=nonneg)
        return cls(
            period=period,
            mean=data.get("mean", 0.0),
            cos_coeffs=data.get("cos", ()),
            sin_coeffs=data.get("sin", ()),
            nonneg=nonneg,
            label=label,
        )


def eval_periodic(func: PeriodicFn, t):
    """Value of a periodic coefficient at t (asserts the nonneg flag)"""
    return func(t)


@dataclass(frozen=True)
class DerivedFn:
    """Periodic function computed from other coefficients (derived envelopes, b_i(t))"""

    period: float
    func: Callable = field(compare=False)
    label: str = ""

    def __call__(self, t):
        values = np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)
        if values.ndim == 0:
            return float(values)
        return values

    def integral(self) -> float:
        """Integral over one period (composite Simpson)"""
        nodes = np.linspace(0.0, self.period, DERIVED_QUADRATURE_POINTS)
        return float(integrate.simpson(self(nodes), x=nodes))

    def extrema(self, samples: int = 4096):
        """(min, max) over one period, sampled"""
        values = self(np.linspace(0.0, self.period, samples + 1))
        return float(np.min(values)), float(np.max(values))

    def __mul__(self, factor):
        if not isinstance(factor, (int, float)):
            return NotImplemented
        return DerivedFn(self.period, lambda t, inner=self.func: factor * inner(t), self.label)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return DerivedFn(self.period, lambda t, inner=self.func: inner(t) + other, self.label)
        if not callable(other):
            return NotImplemented
        return DerivedFn(self.period, lambda t, inner=self.func: inner(t) + other(t), self.label)

    __radd__ = __add__


def as_derived(func, period: float, label: str = "") -> DerivedFn:
    """Wrap a PeriodicFn (or any vectorised callable) as a DerivedFn"""
    if isinstance(func, DerivedFn):
        return func
    return DerivedFn(period, func, label or getattr(func, "label", ""))
