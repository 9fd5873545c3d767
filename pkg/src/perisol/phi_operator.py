""" Perisol
    Fixed point operator Phi on omega-periodic grid functions, cone checks and the damped
    fixed point iteration
"""

from dataclasses import dataclass

import numpy as np

from perisol import impulse_algebra
from perisol.exceptions import ModelError, NumericalError
from perisol.model.grid import DEFAULT_POINTS, GridFunction
from perisol.utils.logging import get_perisol_logger

# pylint: disable=logging-fstring-interpolation,invalid-name

CONE_TOLERANCE = 1e-12
COLLAPSE_FLOOR = 1e-10
MIN_DAMPING = 1.0 / 64


class GridAccess:
    """State access of component i of a periodic grid function, for birth function evaluation"""

    def __init__(self, func: GridFunction, i: int, integrands: dict):
        self.func = func
        self.i = i
        self._windows = {
            key: func.transform(lambda t, values, psi=psi: psi(t, values[:, i]))
            for key, psi in integrands.items()
        }

    def delayed(self, times, side="left"):
        """x_i at the given times"""
        return self.func.evaluate(times, side)[..., self.i]

    def window(self, key, start, stop):
        """Integral of psi_key(r, x_i(r)) over [start, stop]"""
        return self._windows[key].integral(start, stop)[..., 0]


def source_terms(spec, x: GridFunction, i: int, side: str = "left") -> np.ndarray:
    """sum_j a_ij(s) x_j(s) + g_i(s, x_is) at every grid node, one side of the jumps"""

    t = x.grid.t
    values = x.left if side == "left" else x.right
    total = np.zeros(len(t))
    for j in range(spec.n):
        if j != i:
            total += spec.coupling[i][j](t) * values[:, j]

    descriptor = spec.nonlinearity[i]
    access = GridAccess(x, i, descriptor.window_integrands())
    return total + descriptor.evaluate(t, access, side)


def apply_phi(spec, x: GridFunction) -> GridFunction:
    """(Phi x)(t) on the nodes of x's grid, both sides of every jump

    (Phi_i x)(t) = Gamma_i(x_i) int_t^{t+omega} B~_i(s, t; x_i) exp(D_i(s) - D_i(t)) h_i(s) ds
    is evaluated through C_i(t) = int_0^t B_i(s) exp(D_i(s) - D_i(omega)) h_i(s) ds as
    (Gamma_i C_i(omega) + C_i(t)) / (B_i(t) exp(D_i(t) - D_i(omega))), with B_i(t) taken
    from the left or the right at impulse instants.
    """

    if x.dimension != spec.n:
        raise ModelError(f"Grid function has {x.dimension} components, system has {spec.n}")
    if np.min(x.inf()) < 0:
        raise ModelError("Phi is only defined on nonnegative functions")

    grid = x.grid
    t = grid.t
    integrand = {"left": np.empty((grid.size, spec.n)), "right": np.empty((grid.size, spec.n))}
    scale = {}

    for i in range(spec.n):
        d_omega = spec.death[i].integral()
        weight = np.exp(spec.death[i].antiderivative(t) - d_omega)
        for side in ("left", "right"):
            factor = impulse_algebra.B(spec, i, x, t, side=side) * weight
            integrand[side][:, i] = factor * source_terms(spec, x, i, side)
            scale[(i, side)] = factor

    if not (np.all(np.isfinite(integrand["left"])) and np.all(np.isfinite(integrand["right"]))):
        raise NumericalError("Phi integrand is not finite")

    cumulative = GridFunction(grid, integrand["left"], integrand["right"]).integral(0.0, t)

    left = np.empty((grid.size, spec.n))
    right = np.empty((grid.size, spec.n))
    for i in range(spec.n):
        numerator = impulse_algebra.Gamma(spec, i, x) * cumulative[-1, i] + cumulative[:, i]
        left[:, i] = numerator / scale[(i, "left")]
        right[:, i] = numerator / scale[(i, "right")]

    return GridFunction(grid, left, right)


def _instant_nodes(spec, grid):
    """Node index of every impulse instant"""
    indices = []
    for instant in spec.impulses.instants:
        index = int(np.argmin(np.abs(grid.t - instant)))
        indices.append(index)
    return indices


def jump_identity_check(spec, x: GridFunction, y: GridFunction = None) -> float:
    """max_{i,k} |y_i(t_k+) - y_i(t_k) / J_ik(x_i(t_k))| / (1 + |y_i(t_k)|), y = Phi x"""

    y = apply_phi(spec, x) if y is None else y
    worst = 0.0
    for i in range(spec.n):
        factors = impulse_algebra.impulse_factors(spec, i, x)
        for k, index in enumerate(_instant_nodes(spec, y.grid)):
            before, after = y.left[index, i], y.right[index, i]
            violation = abs(after - before / factors[k]) / (1.0 + abs(before))
            worst = max(worst, violation)
    return float(worst)


@dataclass(frozen=True)
class ConeParams:
    """sigma_i of the cone  x_i(t) >= sigma_i sup x_i"""

    sigma: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(float(value) for value in self.sigma))
        if any(not 0 < value <= 1 for value in self.sigma):
            raise ModelError("Cone parameters must lie in (0, 1]")

    @classmethod
    def from_spec(cls, spec):
        """sigma_i = B_lower / B_upper exp(-D_i(omega))"""
        return cls(tuple(bound.sigma for bound in impulse_algebra.bounds(spec)))


def cone_membership(x: GridFunction, cone: ConeParams):
    """(member, worst margin) with margin_i = inf x_i - sigma_i sup x_i"""

    margins = x.inf() - np.array(cone.sigma) * x.sup()
    worst = float(np.min(margins))
    return worst >= -CONE_TOLERANCE, worst


@dataclass
class FixedPointResult:
    """Outcome of the damped fixed point iteration"""

    solution: GridFunction
    residual: float
    iterations: int
    cone_check: bool
    positivity_floor: float
    converged: bool
    damping: float
    collapsed: bool = False

    def summary(self):
        """Scalar fields only"""
        return {
            "residual": self.residual,
            "iterations": self.iterations,
            "cone_check": self.cone_check,
            "positivity_floor": self.positivity_floor,
            "converged": self.converged,
            "damping": self.damping,
            "collapsed": self.collapsed,
        }


def initial_iterate(spec, grid, initial=None) -> GridFunction:
    """Starting point of the iteration

    A GridFunction is used as it is, numbers give constant functions, and by default the
    constant sqrt(r0 R0) of declared envelope radii or 1.
    """

    if isinstance(initial, GridFunction):
        return initial
    if initial is None:
        envelopes = spec.envelopes
        if envelopes is not None and envelopes.r0 is not None and envelopes.R0 is not None:
            initial = np.sqrt(envelopes.r0 * envelopes.R0)
        else:
            initial = 1.0
    values = np.broadcast_to(np.asarray(initial, dtype=float), (spec.n,))
    return GridFunction.constant(grid, values)


def solve_fixed_point(
    spec,
    initial=None,
    damping: float = 0.5,
    tol: float = 1e-8,
    max_iter: int = 2000,
    points: int = DEFAULT_POINTS,
    cone: ConeParams = None,
) -> FixedPointResult:
    """Damped iteration x <- (1 - lambda) x + lambda Phi x

    lambda is halved whenever the relative residual sup |Phi x - x| / sup |Phi x| grows,
    down to 1/64. The best iterate is returned, flagged converged only when the residual
    is below tol, it lies in the cone and it stays positive.
    """

    log = get_perisol_logger()
    if not 0 < damping <= 1:
        raise ValueError(f"Damping must lie in (0, 1], got {damping}")

    grid = spec.grid(points)
    x = initial_iterate(spec, grid, initial)
    if x.grid.size != grid.size or not np.allclose(x.grid.t, grid.t):
        x = GridFunction(grid, x.evaluate(grid.t, "left"), x.evaluate(grid.t, "right"))
    cone = cone or ConeParams.from_spec(spec)

    best, best_residual = x, np.inf
    previous = np.inf
    collapsed = False
    iteration = 0

    for iteration in range(1, max_iter + 1):
        try:
            y = apply_phi(spec, x)
        except NumericalError as exc:
            log.error(f"Fixed point iteration failed at iteration {iteration} : {exc}")
            raise NumericalError(str(exc), index=iteration) from exc

        size = max(float(np.max(np.abs(y.sup()))), float(np.max(np.abs(x.sup()))))
        residual = x.sup_distance(y) / size if size > 0 else 0.0
        if not np.isfinite(residual):
            raise NumericalError(f"Non finite residual at iteration {iteration}", index=iteration)

        if residual < best_residual:
            best, best_residual = y, residual
        if residual <= tol:
            log.debug(f"Fixed point iteration converged after {iteration} iterations")
            break
        if size < COLLAPSE_FLOOR:
            collapsed = True
            log.info(f"Fixed point iteration collapsed to 0 at iteration {iteration}")
            break

        if residual > previous and damping > MIN_DAMPING:
            damping = max(damping / 2.0, MIN_DAMPING)
            log.debug(f"Residual increased at iteration {iteration}, damping set to {damping}")
        previous = residual
        x = x.blend(y, damping)

    member, _ = cone_membership(best, cone)
    floor = float(np.min(best.inf()))
    converged = bool(best_residual <= tol and member and floor > 0 and not collapsed)
    if not converged:
        log.warning(
            f"Fixed point iteration on {spec.name or 'system'} did not reach a positive "
            f"solution (residual={best_residual:.3e}, floor={floor:.3e})"
        )

    return FixedPointResult(
        solution=best,
        residual=float(best_residual),
        iterations=iteration,
        cone_check=bool(member),
        positivity_floor=floor,
        converged=converged,
        damping=damping,
        collapsed=collapsed,
    )
