""" Perisol
    Kernel integrals  K_i[w](t) = int_t^{t+omega} exp(D_i(s) - D_i(t)) w(s) ds  and grid extrema
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from perisol.model.grid import DEFAULT_POINTS
from perisol.model.periodic import PeriodicFn
from perisol.model.system import SystemSpec

CHUNK = 256


@dataclass(frozen=True)
class Weight:
    """Linear combination sum_k coef_k f_k(s) of periodic functions"""

    terms: tuple = ()

    @classmethod
    def of(cls, func, coef: float = 1.0):
        """Single term weight (a Weight is returned unchanged)"""
        if isinstance(func, Weight):
            return func.scaled(coef) if coef != 1.0 else func
        return cls(((float(coef), func),))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        total = np.zeros(s.shape)
        for coef, func in self.terms:
            total = total + coef * np.asarray(func(s))
        return total

    def __add__(self, other):
        return Weight(self.terms + Weight.of(other).terms)

    def scaled(self, factor: float):
        """factor * weight"""
        return Weight(tuple((factor * coef, func) for coef, func in self.terms))

    def integral(self) -> float:
        """Integral over one period"""
        return float(sum(coef * func.integral() for coef, func in self.terms))


def coupling_weight(spec: SystemSpec, i: int, v) -> Weight:
    """sum_{j != i} v_j / v_i a_ij as a Weight"""
    return Weight(tuple((v[j] / v[i], spec.coupling[i][j]) for j in range(spec.n) if j != i))


def kernel_integral(spec: SystemSpec, i: int, t, weight, points: int = DEFAULT_POINTS):
    """int_t^{t+omega} exp(D_i(s) - D_i(t)) weight(s) ds

    Composite Simpson on `points` uniform offsets s = t + k omega / points.
    """

    times = np.atleast_1d(np.asarray(t, dtype=float))
    death = spec.death[i]
    offsets = np.linspace(0.0, spec.omega, points + 1)
    values = np.empty(times.shape)

    for start in range(0, times.size, CHUNK):
        block = times[start : start + CHUNK]
        nodes = block[:, None] + offsets[None, :]
        growth = np.exp(death.antiderivative(nodes) - death.antiderivative(block)[:, None])
        integrand = growth * np.asarray(weight(nodes))
        values[start : start + CHUNK] = integrate.simpson(
            integrand, dx=spec.omega / points, axis=1
        )

    if np.ndim(t) == 0:
        return float(values[0])
    return values


def refine_extremum(func, nodes: np.ndarray, values: np.ndarray, kind: str = "min"):
    """Extremum of a smooth function sampled on `nodes`, refined between the neighbours
    of the best node with a bounded scalar minimisation

    Returns (value, t).
    """

    sign = 1.0 if kind == "min" else -1.0
    index = int(np.argmin(sign * values))
    best_value, best_t = float(values[index]), float(nodes[index])

    low = nodes[max(index - 1, 0)]
    high = nodes[min(index + 1, len(nodes) - 1)]
    if high > low:
        result = optimize.minimize_scalar(
            lambda t: sign * float(func(t)),
            bounds=(low, high),
            method="bounded",
            options={"xatol": 1e-10 * max(1.0, high)},
        )
        if result.success and sign * result.fun < sign * best_value:
            best_value, best_t = float(sign * result.fun), float(result.x)

    return best_value, best_t


class KernelEvaluator:
    """Kernel profiles on the system grid, cached per (component, function)

    Kernel integrals are linear in the weight, so profiles of Weight combinations are
    assembled from the cached profiles of their terms.
    """

    def __init__(self, spec: SystemSpec, points: int = DEFAULT_POINTS):
        self.spec = spec
        self.points = points
        self.grid = spec.grid(points)
        self._profiles = {}
        self._derived = {}
        self.one = PeriodicFn.constant(spec.omega, 1.0, label="1")

    @property
    def nodes(self) -> np.ndarray:
        """Evaluation times over one period"""
        return self.grid.t

    def derived_b(self, i: int):
        """b_i(t) of component i (memoised)"""
        if i not in self._derived:
            self._derived[i] = self.spec.nonlinearity[i].derived_b(self.spec.omega)
        return self._derived[i]

    def _term_profile(self, i: int, func) -> np.ndarray:
        key = (i, id(func))
        if key not in self._profiles:
            self._profiles[key] = (
                func,
                kernel_integral(self.spec, i, self.nodes, func, self.points),
            )
        return self._profiles[key][1]

    def profile(self, i: int, weight) -> np.ndarray:
        """K_i[weight] at every grid node"""
        weight = Weight.of(weight)
        total = np.zeros(self.grid.size)
        for coef, func in weight.terms:
            total += coef * self._term_profile(i, func)
        return total

    def integral(self, i: int, t, weight):
        """K_i[weight](t) at arbitrary times"""
        return kernel_integral(self.spec, i, t, Weight.of(weight), self.points)

    def extremum(self, i: int, weight, kind: str = "min"):
        """(min or max over t of K_i[weight](t), extremizer)"""
        weight = Weight.of(weight)
        return refine_extremum(
            lambda t: self.integral(i, t, weight), self.nodes, self.profile(i, weight), kind
        )

    def self_test(self, i: int, samples: int = 64) -> float:
        """Relative error of K_i[d_i](t) against exp(D_i(omega)) - 1 at `samples` times"""
        exact = np.expm1(self.spec.death[i].integral())
        times = np.linspace(0.0, self.spec.omega, samples, endpoint=False)
        values = self.integral(i, times, self.spec.death[i])
        return float(np.max(np.abs(values - exact)) / exact)
