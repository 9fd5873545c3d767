""" Perisol
    Impulse algebra : D_i, J_ik, B_i, B~_i, Gamma_i and their closed form bounds
"""

from dataclasses import dataclass, asdict

import numpy as np

from perisol.exceptions import HypothesisError
from perisol.model.grid import GridFunction
from perisol.model.system import SystemSpec
from perisol.utils.logging import get_perisol_logger

# pylint: disable=invalid-name,logging-fstring-interpolation


@dataclass
class ImpulseBounds:
    """Bounds of B~_i and Gamma_i for one component, and the derived multipliers

    sigma = B_lower / B_upper exp(-D(omega)), m1 = Gamma_lower B_lower (exp(D(omega)) - 1),
    m2 = Gamma_upper B_upper (exp(D(omega)) - 1), n1 = Gamma_lower B_lower,
    n2 = Gamma_upper B_upper exp(D(omega)).
    """

    component: int
    B_lower: float
    B_upper: float
    Gamma_lower: float
    Gamma_upper: float
    D_omega: float
    sigma: float
    m1: float
    m2: float
    n1: float
    n2: float

    def to_dict(self):
        """Export bounds to dict format"""
        return asdict(self)


def D(spec: SystemSpec, i: int, t):
    """D_i(t), exact integral of d_i from 0 to t"""
    return spec.death[i].antiderivative(t)


def J(impulse_map, u):
    """J_ik(u) = u / (u + I_ik(u)), with its stored limit at u = 0"""
    return impulse_map.J(u)


def impulse_factors(spec: SystemSpec, i: int, x: GridFunction = None) -> np.ndarray:
    """J_ik(x_i(t_k)) for k = 1..p, state read with left continuity

    Without a state, J is taken at u = 0 (exact for state independent maps).
    """

    if not spec.p:
        return np.ones(0)
    instants = np.array(spec.impulses.instants)
    if x is None:
        states = np.zeros(spec.p)
    else:
        states = x.evaluate(instants, side="left")[:, i]
    return np.array(
        [J(spec.impulses.map_for(i, k), max(state, 0.0)) for k, state in enumerate(states)]
    )


def B(spec: SystemSpec, i: int, x: GridFunction, t, side: str = "left"):
    """B_i(t; x_i), product of J over the instants in [0, t) (or [0, t] for the right limit)

    Extended to every real t by B_i(t + omega) = B_i(t) B_i(omega).
    """

    times = np.asarray(t, dtype=float)
    factors = impulse_factors(spec, i, x)
    cumulative = np.concatenate(([1.0], np.cumprod(factors)))
    full = cumulative[-1]

    shift = np.floor(times / spec.omega)
    phase = times - shift * spec.omega
    count = np.searchsorted(np.array(spec.impulses.instants), phase, side=side)
    values = cumulative[count] * full**shift

    if values.ndim == 0:
        return float(values)
    return values


def B_window(spec: SystemSpec, i: int, x: GridFunction, t_from: float, t_to: float) -> float:
    """B~_i(t_to, t_from; x_i), product of J over the instants in [t_from, t_to)"""

    factors = impulse_factors(spec, i, x)
    product = 1.0
    for _, k in spec.impulses.instants_in(t_from, t_to, spec.omega):
        product *= factors[k]
    return product


def Gamma(spec: SystemSpec, i: int, x: GridFunction = None) -> float:
    """Gamma_i(x_i) = (B_i(omega; x_i) exp(D_i(omega)) - 1)^-1"""

    full = float(np.prod(impulse_factors(spec, i, x)))
    d_omega = spec.death[i].integral()
    growth = full * np.exp(d_omega)
    if not growth > 1.0:
        raise HypothesisError(
            "H3", f"component {i + 1}: B(omega) exp(D(omega)) = {growth:.12g} is not > 1"
        )
    denominator = growth - 1.0
    return 1.0 / denominator


def _window_products(factors: np.ndarray) -> np.ndarray:
    """Products of `factors` over every cyclic window k = j..j+l-1, j = 1..p, l = 0..p"""

    p = len(factors)
    products = [1.0]
    for start in range(p):
        product = 1.0
        for length in range(1, p + 1):
            product *= factors[(start + length - 1) % p]
            products.append(product)
    return np.array(products)


def component_bounds(spec: SystemSpec, i: int) -> ImpulseBounds:
    """Closed form bounds for component i"""

    log = get_perisol_logger()
    d_omega = spec.death[i].integral()
    growth = np.exp(d_omega)

    maps = [spec.impulses.map_for(i, k) for k in range(spec.p)]
    upper_factors = np.array([1.0 / (1.0 + m.upper_slope) for m in maps])
    lower_factors = np.array([1.0 / (1.0 + m.lower_slope) for m in maps])

    b_lower = float(np.min(_window_products(upper_factors)))
    b_upper = float(np.max(_window_products(lower_factors)))

    upper_denominator = float(np.prod(upper_factors)) * growth - 1.0
    if not upper_denominator > 0:
        product = float(np.prod(1.0 / upper_factors))
        log.warning(f"Hypothesis (H3) fails for component {i + 1}")
        raise HypothesisError(
            "H3",
            f"component {i + 1}: product of (1 + eta_k) = {product:.12g} "
            f"is not below exp(D(omega)) = {growth:.12g}",
        )
    lower_denominator = float(np.prod(lower_factors)) * growth - 1.0

    gamma_lower = 1.0 / lower_denominator
    gamma_upper = 1.0 / upper_denominator

    return ImpulseBounds(
        component=i,
        B_lower=b_lower,
        B_upper=b_upper,
        Gamma_lower=gamma_lower,
        Gamma_upper=gamma_upper,
        D_omega=d_omega,
        sigma=b_lower / b_upper / growth,
        m1=gamma_lower * b_lower * (growth - 1.0),
        m2=gamma_upper * b_upper * (growth - 1.0),
        n1=gamma_lower * b_lower,
        n2=gamma_upper * b_upper * growth,
    )


def bounds(spec: SystemSpec):
    """ImpulseBounds of every component"""
    return [component_bounds(spec, i) for i in range(spec.n)]


def continuous_transform(spec: SystemSpec, x: GridFunction):
    """y_i(t) = B_i(t; x_i) x_i(t) on the grid nodes of [0, omega], as (left, right) arrays

    y is continuous at the impulse instants when x is a solution. It is not periodic
    (y(t + omega) = B_i(omega) y(t)), hence raw arrays rather than a GridFunction.
    """

    t = x.grid.t
    left = np.empty_like(x.left)
    right = np.empty_like(x.right)
    for i in range(spec.n):
        left[:, i] = B(spec, i, x, t, side="left") * x.left[:, i]
        right[:, i] = B(spec, i, x, t, side="right") * x.right[:, i]
    return left, right
