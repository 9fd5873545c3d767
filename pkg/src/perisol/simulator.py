""" Perisol
    Method of steps integrator for the impulsive delay system : fixed step RK4 on a
    breakpoint mesh, cubic Hermite dense output and exact impulses
"""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from perisol.exceptions import ModelError, NumericalError, PositivityError
from perisol.model.grid import GridFunction
from perisol.utils.logging import get_perisol_logger

# pylint: disable=logging-fstring-interpolation,too-many-instance-attributes,invalid-name

POSITIVITY_TOLERANCE = -1e-10
MERGE_TOLERANCE = 1e-12
BREAKPOINT_DEPTH = 2
SAMPLES_PER_PERIOD = 1024


@dataclass(frozen=True)
class ImpulseEvent:
    """Jump applied to one component at one impulse instant"""

    time: float
    component: int
    before: float
    jump: float

    def to_dict(self):
        """Export event to dict format"""
        return {
            "time": self.time,
            "component": self.component,
            "before": self.before,
            "jump": self.jump,
        }


def _hermite(t0, t1, z0, z1, f0, f1, times):
    """Cubic Hermite interpolant on [t0, t1], vectorized over steps"""
    h = t1 - t0
    s = ((times - t0) / h)[..., None]
    h = h[..., None]
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * z0 + h10 * h * f0 + h01 * z1 + h11 * h * f1


class Trajectory:
    """Dense output of one integration

    Step k covers [starts[k], ends[k]] with the right value at its start and the left
    value at its end, so reading a step boundary from the left gives the state before the
    impulse applied there. Times <= 0 read the history.
    """

    def __init__(self, n: int, history: GridFunction, capacity: int, width: int):
        self.n = n
        self.history = history
        self.starts = np.empty(capacity)
        self.ends = np.empty(capacity)
        self.z0 = np.empty((capacity, width))
        self.z1 = np.empty((capacity, width))
        self.f0 = np.empty((capacity, width))
        self.f1 = np.empty((capacity, width))
        self.count = 0
        self.events = []
        self.history_primitives = []

    @property
    def t_end(self) -> float:
        """Last integrated time"""
        return float(self.ends[self.count - 1]) if self.count else 0.0

    def append(self, t0, t1, z0, z1, f0, f1):
        """Store one completed step"""
        k = self.count
        self.starts[k], self.ends[k] = t0, t1
        self.z0[k], self.z1[k], self.f0[k], self.f1[k] = z0, z1, f0, f1
        self.count += 1

    def _history_state(self, times):
        values = self.history.evaluate(times, "left")
        extra = [-primitive.integral(times, 0.0)[..., 0] for primitive in self.history_primitives]
        if extra:
            values = np.concatenate([values, np.stack(extra, axis=-1)], axis=-1)
        return values

    def state(self, times, side: str = "left"):
        """Full state (components and window primitives) at the given times"""

        times = np.asarray(times, dtype=float)
        flat = times.ravel()
        out = np.empty((flat.size, self.z0.shape[1]))

        past = flat <= 0.0 if side == "left" else flat < 0.0
        if np.any(past):
            out[past] = self._history_state(flat[past])

        inside = ~past
        if np.any(inside):
            if not self.count:
                # constant extrapolation of the history before the first step
                out[inside] = self._history_state(np.zeros(int(np.sum(inside))))
                return out.reshape(times.shape + (out.shape[1],))
            ends = self.ends[: self.count]
            starts = self.starts[: self.count]
            if side == "left":
                index = np.searchsorted(ends, flat[inside], side="left")
            else:
                index = np.searchsorted(starts, flat[inside], side="right") - 1
            index = np.clip(index, 0, self.count - 1)
            out[inside] = _hermite(
                starts[index],
                ends[index],
                self.z0[index],
                self.z1[index],
                self.f0[index],
                self.f1[index],
                flat[inside],
            )

        return out.reshape(times.shape + (out.shape[1],))

    def evaluate(self, times, side: str = "left"):
        """System components x(t), shape times.shape + (n,)"""
        return self.state(times, side)[..., : self.n]

    def __call__(self, times, side: str = "left"):
        return self.evaluate(times, side)

    def sample(self, start: float = 0.0, stop: float = None, points: int = 2001):
        """Uniform samples as a DataFrame with columns t, x1..xn"""
        stop = self.t_end if stop is None else stop
        times = np.linspace(start, stop, points)
        values = self.evaluate(times)
        frame = pd.DataFrame(values, columns=[f"x{i + 1}" for i in range(self.n)])
        frame.insert(0, "t", times)
        return frame

    def events_frame(self):
        """Impulse event log as a DataFrame"""
        return pd.DataFrame(
            [event.to_dict() for event in self.events],
            columns=["time", "component", "before", "jump"],
        )


class _StageAccess:
    """Birth function state access during one RK stage of component i"""

    def __init__(self, trajectory, i, windows, state):
        self.trajectory = trajectory
        self.i = i
        self.windows = windows
        self.current = state

    def delayed(self, times, side="left"):
        """x_i at delayed times (history, dense output or the running state)"""
        return self.trajectory.evaluate(times, side)[..., self.i]

    def window(self, key, start, stop):  # pylint: disable=unused-argument
        """W(stop) - W(start) with W' = psi_key(t, x_i(t)), stop being the stage time"""
        column = self.windows[key]
        return self.current[column] - self.trajectory.state(start, "left")[..., column]


class Integrator:
    """RK4 with fixed steps inside each inter-breakpoint panel

    Windowed terms int_{t - tau}^t psi(r, x_i(r)) dr read the difference of an extra
    state W' = psi(t, x_i(t)) appended to the system.
    """

    def __init__(self, spec, max_step: float = 1e-2):
        if not max_step > 0:
            raise ValueError(f"max_step must be > 0, got {max_step}")
        self.spec = spec
        self.max_step = max_step
        self.log = get_perisol_logger()

        self.windows = []
        self.columns = []
        for i, descriptor in enumerate(spec.nonlinearity):
            columns = {}
            for key, psi in descriptor.window_integrands().items():
                columns[key] = spec.n + len(self.windows)
                self.windows.append((i, psi))
            self.columns.append(columns)
        self.width = spec.n + len(self.windows)

    def mesh(self, t_end: float):
        """(mesh times, impulse times -> instant index) over [0, t_end]"""

        spec = self.spec
        impulses = {time: k for time, k in spec.impulses.instants_in(0.0, t_end, spec.omega)}
        delays = sorted(
            {tau for desc in spec.nonlinearity for tau in desc.constant_delays() if tau > 0}
        )

        seeds = [0.0] + list(impulses)
        candidates = set()
        for seed in seeds:
            for tau in delays:
                for order in range(1, BREAKPOINT_DEPTH + 1):
                    point = seed + order * tau
                    if 0.0 < point < t_end:
                        candidates.add(point)

        fixed = sorted({0.0, t_end} | set(impulses))
        points = list(fixed)
        for point in sorted(candidates):
            if min(abs(point - other) for other in points) > MERGE_TOLERANCE * max(1.0, t_end):
                points.append(point)
        return sorted(points), impulses

    def rhs(self, trajectory, t, z):
        """Vector field of the augmented system at time t"""

        spec = self.spec
        times = np.asarray(t, dtype=float)
        x = z[: spec.n]
        dz = np.empty(self.width)

        for i in range(spec.n):
            total = -spec.death[i](times) * x[i]
            for j in range(spec.n):
                if j != i:
                    total += spec.coupling[i][j](times) * x[j]
            access = _StageAccess(trajectory, i, self.columns[i], z)
            total += spec.nonlinearity[i].evaluate(times, access, "left")
            dz[i] = total

        for column, (i, psi) in enumerate(self.windows):
            dz[spec.n + column] = psi(times, np.asarray(x[i]))
        return dz

    def _jump(self, trajectory, time, k, z):
        spec = self.spec
        z = z.copy()
        for i in range(spec.n):
            impulse_map = spec.impulses.map_for(i, k)
            jump = float(impulse_map(z[i]))
            if jump != 0.0:
                trajectory.events.append(ImpulseEvent(float(time), i, float(z[i]), jump))
            z[i] += jump
        return z

    def run(self, history: GridFunction, t_end: float) -> Trajectory:
        """Integrate from the history on [-tau, 0] up to t_end"""

        spec = self.spec
        if not t_end > 0:
            raise ValueError(f"t_end must be > 0, got {t_end}")
        if history.dimension != spec.n:
            raise ModelError(f"History has {history.dimension} components, system has {spec.n}")
        if np.min(history.inf()) < 0:
            raise ModelError("History must be nonnegative")

        points, impulses = self.mesh(t_end)
        panels = [
            (start, stop, max(1, math.ceil((stop - start) / self.max_step - 1e-9)))
            for start, stop in zip(points[:-1], points[1:])
        ]
        trajectory = Trajectory(spec.n, history, sum(p[2] for p in panels), self.width)
        for i, psi in self.windows:
            trajectory.history_primitives.append(
                history.transform(lambda t, values, psi=psi, i=i: psi(t, values[:, i]))
            )

        z = np.concatenate([history.evaluate(0.0, "left"), np.zeros(len(self.windows))])
        if 0.0 in impulses:
            z = self._jump(trajectory, 0.0, impulses[0.0], z)

        self.log.debug(
            f"Integrating {spec.name or 'system'} to t={t_end} on {len(panels)} panels"
        )

        step = 0
        for start, stop, count in panels:
            h = (stop - start) / count
            f = self.rhs(trajectory, start, z)
            for index in range(count):
                t0 = start + index * h
                t1 = stop if index == count - 1 else t0 + h
                z_next = self._rk4_step(trajectory, t0, t1 - t0, z, f)
                f_next = self.rhs(trajectory, t1, z_next)
                step += 1
                self._guard(z_next, t1, step)
                trajectory.append(t0, t1, z, z_next, f, f_next)
                z, f = z_next, f_next

            if stop in impulses and stop < t_end:
                z = self._jump(trajectory, stop, impulses[stop], z)
                self._guard(z, stop, step)

        self.log.debug(
            f"Integration done : {step} steps, {len(trajectory.events)} impulse events"
        )
        return trajectory

    def _rk4_step(self, trajectory, t, h, z, f):
        k1 = f
        k2 = self.rhs(trajectory, t + h / 2, z + h / 2 * k1)
        k3 = self.rhs(trajectory, t + h / 2, z + h / 2 * k2)
        k4 = self.rhs(trajectory, t + h, z + h * k3)
        return z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def _guard(self, z, time, step):
        x = z[: self.spec.n]
        if not np.all(np.isfinite(z)):
            self.log.error(f"Non finite state at t={time} (step {step})")
            raise NumericalError(f"Non finite state at t={time:.6g}", index=step)
        if np.min(x) < POSITIVITY_TOLERANCE:
            component = int(np.argmin(x))
            self.log.error(f"Positivity lost by component {component + 1} at t={time}")
            raise PositivityError(
                f"component {component + 1} reached {x[component]:.3e} at t={time:.6g}",
                index=step,
            )


def integrate(spec, history, t_end: float, max_step: float = 1e-2, points: int = 512):
    """Trajectory of the system from a history given as a GridFunction or constant values"""

    if not isinstance(history, GridFunction):
        values = np.broadcast_to(np.asarray(history, dtype=float), (spec.n,))
        history = GridFunction.constant(spec.grid(points), values)
    return Integrator(spec, max_step).run(history, t_end)


def _side_distance(first, first_times, second, second_times) -> float:
    """sup |first - second| with both one sided limits taken at each time

    At an impulse instant the closest pairing of sides counts.
    """

    gaps = [
        np.abs(first(first_times, side) - second(second_times, other))
        for side in ("left", "right")
        for other in ("left", "right")
    ]
    return float(np.max(np.minimum.reduce(gaps)))


def periodicity_residual(traj: Trajectory, omega: float, t_start: float) -> float:
    """sup |x(t + omega) - x(t)| over t in [t_start, t_start + omega]

    Both periods must lie inside the trajectory: t_start + 2 omega <= t_end.
    """

    if t_start < -MERGE_TOLERANCE or t_start + 2 * omega > traj.t_end + MERGE_TOLERANCE:
        raise ValueError(
            f"[t_start, t_start + 2 omega] = [{t_start}, {t_start + 2 * omega}] "
            f"must lie within [0, t_end={traj.t_end}]"
        )
    times = np.linspace(t_start, t_start + omega, SAMPLES_PER_PERIOD + 1)
    shifted = np.minimum(times + omega, traj.t_end)
    return _side_distance(traj.evaluate, times, traj.evaluate, shifted)


def long_run_floor(traj: Trajectory, window: float) -> np.ndarray:
    """Per component minimum over [t_end - window, t_end]"""

    if not 0 < window <= traj.t_end:
        raise ValueError(f"window must lie in (0, t_end={traj.t_end}]")
    times = np.linspace(traj.t_end - window, traj.t_end, SAMPLES_PER_PERIOD + 1)
    return np.min(traj.evaluate(times), axis=0)


def sup_deviation(traj: Trajectory, solution: GridFunction, start: float, stop: float) -> float:
    """sup |x(t) - solution(t)| on [start, stop], solution extended periodically"""

    times = np.linspace(start, stop, SAMPLES_PER_PERIOD + 1)
    return _side_distance(traj.evaluate, times, solution.evaluate, times)


def floor_trend(traj: Trajectory, sections: int = 4) -> list:
    """Smallest component value over each of `sections` equal parts of [0, t_end]"""

    if sections < 1 or not traj.t_end > 0:
        raise ValueError("floor_trend needs a non empty trajectory and at least one section")
    edges = np.linspace(0.0, traj.t_end, sections + 1)
    floors = []
    for start, stop in zip(edges[:-1], edges[1:]):
        times = np.linspace(start, stop, SAMPLES_PER_PERIOD + 1)
        floors.append(float(np.min(traj.evaluate(times))))
    return floors
