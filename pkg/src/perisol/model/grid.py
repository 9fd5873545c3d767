""" Perisol
    Breakpoint-aligned periodic grids, grid functions with left/right values at jumps
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from perisol.exceptions import ModelError

DEFAULT_POINTS = 512
MIN_PANEL_INTERVALS = 4
MERGE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Nodes covering [0, period] and the indices of the panel boundaries

    Every breakpoint (impulse instants, their delay images) is a panel boundary, and
    integrands are smooth inside each panel.
    """

    period: float
    t: np.ndarray
    breaks: tuple

    @property
    def size(self) -> int:
        """Number of nodes (both ends included)"""
        return len(self.t)

    def panels(self):
        """(first, last) node indices of every panel"""
        return list(zip(self.breaks[:-1], self.breaks[1:]))

    def boundary_times(self) -> np.ndarray:
        """Times of the panel boundaries"""
        return self.t[list(self.breaks)]

    def refined(self, factor: int = 2):
        """Same breakpoints, `factor` times as many intervals per panel"""
        return make_grid(self.period, self.boundary_times(), (self.size - 1) * factor)


def make_grid(period: float, breakpoints=(), points: int = DEFAULT_POINTS) -> TimeGrid:
    """Grid on [0, period] with `points` intervals spread over the breakpoint panels

    Each panel gets max(4, even round(points * length / period)) uniform intervals.
    """

    if not period > 0:
        raise ModelError("Grid period must be > 0")
    if points < MIN_PANEL_INTERVALS:
        raise ModelError(f"Grid needs at least {MIN_PANEL_INTERVALS} intervals")

    cuts = np.sort(np.mod(np.asarray(list(breakpoints), dtype=float), period))
    cuts = np.concatenate(([0.0], cuts, [period]))
    bounds = [0.0]
    for cut in cuts[1:]:
        if cut - bounds[-1] > MERGE_TOLERANCE * period:
            bounds.append(float(cut))
    bounds[-1] = float(period)

    nodes = [np.array([0.0])]
    breaks = [0]
    for start, stop in zip(bounds[:-1], bounds[1:]):
        intervals = int(round(points * (stop - start) / period))
        intervals = max(MIN_PANEL_INTERVALS, intervals + intervals % 2)
        nodes.append(np.linspace(start, stop, intervals + 1)[1:])
        breaks.append(breaks[-1] + intervals)

    times = np.concatenate(nodes)
    times[-1] = period
    return TimeGrid(period=float(period), t=times, breaks=tuple(breaks))


class GridFunction:
    """Sampled omega-periodic vector function, piecewise smooth between panel boundaries

    `left[j]` holds x(t_j) (left-continuous convention) and `right[j]` holds x(t_j+). Both
    only differ at panel boundaries. Periodic closure is enforced: x(0) = x(omega) and
    x(0+) = x(omega+).
    """

    def __init__(self, grid: TimeGrid, left, right=None):
        left = np.array(left, dtype=float)
        if left.ndim == 1:
            left = left[:, None]
        right = left.copy() if right is None else np.array(right, dtype=float)
        if right.ndim == 1:
            right = right[:, None]

        if left.shape[0] != grid.size or right.shape != left.shape:
            raise ModelError(f"Grid function values must have shape ({grid.size}, n)")
        if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right))):
            raise ModelError("Grid function values must be finite")

        left[0] = left[-1]
        right[-1] = right[0]

        self.grid = grid
        self.left = left
        self.right = right
        self._splines = None
        self._primitives = None

    @property
    def dimension(self) -> int:
        """Number of components"""
        return self.left.shape[1]

    @classmethod
    def constant(cls, grid: TimeGrid, values):
        """Constant function, one value per component"""
        values = np.atleast_1d(np.asarray(values, dtype=float))
        return cls(grid, np.tile(values, (grid.size, 1)))

    @classmethod
    def from_callable(cls, grid: TimeGrid, func):
        """Sample a continuous function t -> values, shape (N,) or (N, n)"""
        return cls(grid, func(grid.t))

    def splines(self):
        """One vector valued cubic spline per panel"""
        if self._splines is None:
            self._splines = []
            for first, last in self.grid.panels():
                values = self.left[first : last + 1].copy()
                values[0] = self.right[first]
                self._splines.append(CubicSpline(self.grid.t[first : last + 1], values, axis=0))
        return self._splines

    def _panel_index(self, phase, side):
        bounds = self.grid.boundary_times()
        index = np.searchsorted(bounds, phase, side="left" if side == "left" else "right") - 1
        return np.clip(index, 0, len(bounds) - 2)

    def _reduce(self, times, side):
        period = self.grid.period
        phase = np.mod(times, period)
        if side == "left":
            phase = np.where(phase <= 0.0, period, phase)
        else:
            phase = np.where(phase >= period, 0.0, phase)
        return phase

    def evaluate(self, times, side: str = "left"):
        """Values at arbitrary times (periodic extension), shape times.shape + (n,)"""

        times = np.asarray(times, dtype=float)
        flat = self._reduce(times.ravel(), side)
        index = self._panel_index(flat, side)
        out = np.empty((flat.size, self.dimension))

        splines = self.splines()
        for panel in np.unique(index):
            mask = index == panel
            out[mask] = splines[panel](flat[mask])

        return out.reshape(times.shape + (self.dimension,))

    def __call__(self, times, side: str = "left"):
        return self.evaluate(times, side)

    def _antiderivative(self, times):
        if self._primitives is None:
            primitives = [spline.antiderivative() for spline in self.splines()]
            starts = [np.zeros(self.dimension)]
            bounds = self.grid.boundary_times()
            for primitive, stop in zip(primitives, bounds[1:]):
                starts.append(starts[-1] + primitive(stop))
            self._primitives = (primitives, np.array(starts))

        primitives, starts = self._primitives
        period = self.grid.period
        times = np.asarray(times, dtype=float).ravel()
        shift = np.floor(times / period)
        phase = np.clip(times - shift * period, 0.0, period)
        index = self._panel_index(phase, "right")

        out = shift[:, None] * starts[-1] + starts[index]
        for panel in np.unique(index):
            mask = index == panel
            out[mask] += primitives[panel](phase[mask])
        return out

    def integral(self, start, stop):
        """Integral of every component over [start, stop] (periodic extension)"""
        start = np.asarray(start, dtype=float)
        stop = np.asarray(stop, dtype=float)
        shape = np.broadcast(start, stop).shape
        start, stop = np.broadcast_to(start, shape), np.broadcast_to(stop, shape)
        values = self._antiderivative(stop) - self._antiderivative(start)
        return values.reshape(shape + (self.dimension,))

    def transform(self, func):
        """Pointwise image t, x(t) -> func(t, x(t)) on both sides of every node"""
        return GridFunction(
            self.grid, func(self.grid.t, self.left), func(self.grid.t, self.right)
        )

    def blend(self, other, weight: float):
        """(1 - weight) self + weight other"""
        return GridFunction(
            self.grid,
            (1.0 - weight) * self.left + weight * other.left,
            (1.0 - weight) * self.right + weight * other.right,
        )

    def sup(self):
        """Per component sup over one period"""
        return np.maximum(self.left.max(axis=0), self.right.max(axis=0))

    def inf(self):
        """Per component inf over one period"""
        return np.minimum(self.left.min(axis=0), self.right.min(axis=0))

    def sup_distance(self, other) -> float:
        """Sup norm of self - other on the nodes, both sides"""
        return float(
            max(np.max(np.abs(self.left - other.left)), np.max(np.abs(self.right - other.right)))
        )

    def jumps(self):
        """(node index, right - left) at panel boundaries"""
        return [(j, self.right[j] - self.left[j]) for j in self.grid.breaks]


class HistorySegment:
    """x_t : s -> x(t + s) for s in [-tau, 0]"""

    def __init__(self, func: GridFunction, time: float, tau: float, side: str = "left"):
        self.func = func
        self.time = float(time)
        self.tau = float(tau)
        self.side = side

    def __call__(self, offsets):
        return self.func.evaluate(self.time + np.asarray(offsets, dtype=float), self.side)


def history_window(func: GridFunction, time: float, tau: float, side: str = "left"):
    """History segment of a grid function ending at `time`"""
    if tau < 0:
        raise ModelError(f"History window length must be >= 0 (got {tau})")
    return HistorySegment(func, time, tau, side)
