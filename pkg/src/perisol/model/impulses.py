""" Perisol
    Impulse maps I_ik(u) and the periodic impulse schedule
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from perisol.exceptions import HypothesisError, ModelError

SLOPE_TOLERANCE = 1e-12


class ImpulseKind(Enum):
    """Impulse map families"""

    NONE = "none"
    LINEAR = "linear"
    BOUNDED_SLOPE = "bounded_slope"
    SATURATING = "saturating"


@dataclass(frozen=True)
class ImpulseMap:
    """Jump x(t_k+) - x(t_k) = I(x(t_k)) applied to one component at one instant

    - none : I = 0
    - linear : I(u) = eta u
    - saturating : I(u) = eta u / (1 + u / scale)
    - bounded_slope : piecewise-linear table starting at (0, 0), extended linearly past
      its last node, with alpha u <= I(u) <= eta u

    `lower_slope` / `upper_slope` are the constants alpha, eta such that
    alpha u <= I(u) <= eta u, and j0 is the limit of u / (u + I(u)) at 0+.
    """

    kind: ImpulseKind = ImpulseKind.NONE
    eta: float = 0.0
    alpha: float = None
    scale: float = None
    table: tuple = ()
    j0: float = None

    def __post_init__(self):
        kind = ImpulseKind(self.kind)
        object.__setattr__(self, "kind", kind)

        if kind is ImpulseKind.NONE:
            object.__setattr__(self, "eta", 0.0)
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "j0", 1.0)
        elif kind is ImpulseKind.LINEAR:
            self._check_lower(float(self.eta))
            object.__setattr__(self, "eta", float(self.eta))
            object.__setattr__(self, "alpha", float(self.eta))
            object.__setattr__(self, "j0", 1.0 / (1.0 + self.eta))
        elif kind is ImpulseKind.SATURATING:
            if self.scale is None or not self.scale > 0:
                raise HypothesisError("H2", "saturating impulse map needs a positive scale")
            self._check_lower(min(0.0, float(self.eta)))
            object.__setattr__(self, "eta", float(self.eta))
            object.__setattr__(self, "scale", float(self.scale))
            object.__setattr__(self, "alpha", None)
            object.__setattr__(self, "j0", 1.0 / (1.0 + self.eta))
        else:
            self._init_table()

    @staticmethod
    def _check_lower(alpha: float):
        if not alpha > -1.0:
            raise HypothesisError("H2", f"impulse lower slope alpha={alpha} must be > -1")

    def _init_table(self):
        if self.alpha is None:
            raise HypothesisError("H2", "bounded_slope impulse map needs its lower slope alpha")
        alpha, eta = float(self.alpha), float(self.eta)
        self._check_lower(alpha)
        if alpha > eta:
            raise HypothesisError(
                "H2", f"impulse slopes must satisfy alpha <= eta ({alpha} > {eta})"
            )

        table = tuple((float(u), float(jump)) for u, jump in self.table)
        if len(table) < 2 or table[0] != (0.0, 0.0):
            raise ModelError("bounded_slope table must start at (0, 0) and hold at least 2 nodes")
        nodes = np.array(table)
        if np.any(np.diff(nodes[:, 0]) <= 0):
            raise ModelError("bounded_slope table nodes must be strictly increasing in u")
        steps = np.diff(nodes[:, 1])
        if np.any(steps > 0) and np.any(steps < 0):
            raise ModelError("bounded_slope table must be monotone")

        tol = SLOPE_TOLERANCE * (1.0 + np.abs(nodes[:, 1]))
        if np.any(nodes[:, 1] < alpha * nodes[:, 0] - tol) or np.any(
            nodes[:, 1] > eta * nodes[:, 0] + tol
        ):
            raise HypothesisError("H2", "impulse table leaves the cone alpha u <= I(u) <= eta u")

        slopes = steps / np.diff(nodes[:, 0])
        if not alpha - SLOPE_TOLERANCE <= slopes[-1] <= eta + SLOPE_TOLERANCE:
            raise HypothesisError("H2", "impulse table extension slope is outside [alpha, eta]")

        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "table", table)
        if self.j0 is None:
            object.__setattr__(self, "j0", float(1.0 / (1.0 + slopes[0])))
        else:
            object.__setattr__(self, "j0", float(self.j0))

    @property
    def lower_slope(self) -> float:
        """alpha in alpha u <= I(u)"""
        if self.kind is ImpulseKind.SATURATING:
            return min(0.0, self.eta)
        return self.alpha

    @property
    def upper_slope(self) -> float:
        """eta in I(u) <= eta u"""
        if self.kind is ImpulseKind.SATURATING:
            return max(0.0, self.eta)
        return self.eta

    def __call__(self, u):
        """Jump size I(u)"""
        state = np.asarray(u, dtype=float)

        if self.kind is ImpulseKind.NONE:
            jump = np.zeros_like(state)
        elif self.kind is ImpulseKind.LINEAR:
            jump = self.eta * state
        elif self.kind is ImpulseKind.SATURATING:
            jump = self.eta * state / (1.0 + state / self.scale)
        else:
            nodes = np.array(self.table)
            last_u, last_jump = nodes[-1]
            last_slope = (nodes[-1, 1] - nodes[-2, 1]) / (nodes[-1, 0] - nodes[-2, 0])
            jump = np.where(
                state <= last_u,
                np.interp(state, nodes[:, 0], nodes[:, 1]),
                last_jump + last_slope * (state - last_u),
            )

        if jump.ndim == 0:
            return float(jump)
        return jump

    def J(self, u):  # pylint: disable=invalid-name
        """u / (u + I(u)) for u > 0, j0 at u = 0"""
        state = np.asarray(u, dtype=float)
        denominator = state + np.asarray(self(state))
        ratio = np.divide(
            state, denominator, out=np.full(state.shape, self.j0), where=state > 0
        )
        if ratio.ndim == 0:
            return float(ratio)
        return ratio

    def to_dict(self):
        """Config representation"""
        data = {"kind": self.kind.value}
        if self.kind in (ImpulseKind.LINEAR, ImpulseKind.SATURATING):
            data["eta"] = self.eta
        if self.kind is ImpulseKind.SATURATING:
            data["scale"] = self.scale
        if self.kind is ImpulseKind.BOUNDED_SLOPE:
            data["eta"] = self.eta
            data["alpha"] = self.alpha
            data["table"] = [list(node) for node in self.table]
            data["j0"] = self.j0
        return data

    @classmethod
    def from_dict(cls, data: dict):
        """Build from config mapping"""
        return cls(
            kind=ImpulseKind(data.get("kind", "none")),
            eta=data.get("eta", 0.0),
            alpha=data.get("alpha"),
            scale=data.get("scale"),
            table=tuple(tuple(node) for node in data.get("table", ())),
            j0=data.get("j0"),
        )


NO_IMPULSE = ImpulseMap()


@dataclass(frozen=True)
class ImpulseSchedule:
    """Impulse instants 0 <= t_1 < ... < t_p < omega and the p x n grid of maps

    Extended periodically: t_{k+p} = t_k + omega and I_{i,k+p} = I_ik.
    """

    instants: tuple = ()
    maps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "instants", tuple(float(instant) for instant in self.instants))
        object.__setattr__(self, "maps", tuple(tuple(row) for row in self.maps))

    @property
    def p(self) -> int:  # pylint: disable=invalid-name
        """Number of impulse instants per period"""
        return len(self.instants)

    def is_empty(self) -> bool:
        """True when no instant carries a non trivial map"""
        return all(m.kind is ImpulseKind.NONE for row in self.maps for m in row)

    def validate(self, period: float, dimension: int):
        """Structural checks against the owning system"""

        if len(self.maps) != self.p:
            raise ModelError(
                f"Impulse schedule has {self.p} instants but {len(self.maps)} map rows"
            )
        for row in self.maps:
            if len(row) != dimension:
                raise ModelError(f"Each impulse map row needs {dimension} maps, got {len(row)}")
        if any(instant < 0 or instant >= period for instant in self.instants):
            raise HypothesisError("H1", f"impulse instants must lie in [0, {period})")
        if any(b <= a for a, b in zip(self.instants, self.instants[1:])):
            raise HypothesisError("H1", "impulse instants must be strictly increasing")

    def map_for(self, i: int, k: int) -> ImpulseMap:
        """Map of component i at (periodically extended) instant index k"""
        return self.maps[k % self.p][i]

    def instants_in(self, start: float, stop: float, period: float):
        """(time, k) of impulse instants in [start, stop), k in 0..p-1"""

        if not self.p or stop <= start:
            return []

        found = []
        first = math.floor(start / period) - 1
        last = math.ceil(stop / period) + 1
        for shift in range(first, last + 1):
            for k, instant in enumerate(self.instants):
                time = instant + shift * period
                if start <= time < stop:
                    found.append((time, k))
        return sorted(found)

    def to_dict(self):
        """Config representation"""
        return {
            "instants": list(self.instants),
            "maps": [[m.to_dict() for m in row] for row in self.maps],
        }

    @classmethod
    def from_dict(cls, data: dict):
        """Build from config mapping"""
        if not data:
            return cls()
        return cls(
            instants=tuple(data.get("instants", ())),
            maps=tuple(
                tuple(ImpulseMap.from_dict(entry) for entry in row) for row in data.get("maps", ())
            ),
        )
