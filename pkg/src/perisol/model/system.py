""" Perisol
    System description (dimension, coefficients, birth functions, impulses) and its loaders
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import yaml
from scipy import integrate

from perisol.exceptions import HypothesisError, ModelError
from perisol.model.grid import DEFAULT_POINTS, make_grid
from perisol.model.impulses import ImpulseSchedule
from perisol.model.nonlinearity import NonlinearityDescriptor
from perisol.model.periodic import PeriodicFn
from perisol.utils.config import config_from_yaml, validate_config
from perisol.utils.logging import get_perisol_logger

# pylint: disable=logging-fstring-interpolation

HYPOTHESIS_SAMPLES = 2048
PERIOD_TOLERANCE = 1e-12
BREAKPOINT_DEPTH = 2


@dataclass(frozen=True)
class EnvelopePair:
    """Comparison functions b_1i, b_2i and the radii 0 < r0 < R0 they hold on"""

    b1: tuple
    b2: tuple
    r0: float = None
    R0: float = None  # pylint: disable=invalid-name

    def __post_init__(self):
        object.__setattr__(self, "b1", tuple(self.b1))
        object.__setattr__(self, "b2", tuple(self.b2))
        if len(self.b1) != len(self.b2):
            raise HypothesisError("H6", "envelopes b1 and b2 must have one entry per component")
        if self.r0 is not None and self.R0 is not None and not 0 < self.r0 < self.R0:
            raise HypothesisError(
                "H6", f"envelope radii must satisfy 0 < r0 < R0 ({self.r0}, {self.R0})"
            )
        for name, funcs in (("b1", self.b1), ("b2", self.b2)):
            for i, func in enumerate(funcs):
                if not func.integral() > 0:
                    raise HypothesisError(
                        "H6", f"integral of {name}[{i + 1}] over a period must be > 0"
                    )

    def to_dict(self):
        """Config representation (periodic coefficients only)"""
        data = {
            "b1": [func.to_dict() for func in self.b1],
            "b2": [func.to_dict() for func in self.b2],
        }
        if self.r0 is not None:
            data["r0"] = self.r0
        if self.R0 is not None:
            data["R0"] = self.R0
        return data

    @classmethod
    def from_dict(cls, period: float, data: dict):
        """Build from config mapping"""
        return cls(
            b1=tuple(
                PeriodicFn.from_dict(period, coef, label=f"b1[{i + 1}]")
                for i, coef in enumerate(data["b1"])
            ),
            b2=tuple(
                PeriodicFn.from_dict(period, coef, label=f"b2[{i + 1}]")
                for i, coef in enumerate(data["b2"])
            ),
            r0=data.get("r0"),
            R0=data.get("R0"),
        )


@dataclass(frozen=True)
class LimitProfile:
    """Limits of F_i(t,u) / (d_i(t) u) at 0+ and at infinity, values in [0, inf]"""

    f0: tuple
    F0: tuple  # pylint: disable=invalid-name
    finf: tuple
    Finf: tuple  # pylint: disable=invalid-name

    def __post_init__(self):
        for name in ("f0", "F0", "finf", "Finf"):
            values = tuple(float(value) for value in getattr(self, name))
            if any(np.isnan(value) or value < 0 for value in values):
                raise ModelError(f"Limit profile {name} must hold values in [0, inf]")
            object.__setattr__(self, name, values)
        if not len(self.f0) == len(self.F0) == len(self.finf) == len(self.Finf):
            raise ModelError("Limit profile entries must have one value per component")
        if any(low > high for low, high in zip(self.f0, self.F0)) or any(
            low > high for low, high in zip(self.finf, self.Finf)
        ):
            raise ModelError("Limit profile must satisfy f0 <= F0 and finf <= Finf")

    def to_dict(self):
        """Config representation"""
        return {name: list(getattr(self, name)) for name in ("f0", "F0", "finf", "Finf")}

    @classmethod
    def from_dict(cls, data: dict):
        """Build from config mapping"""
        return cls(**{name: tuple(data[name]) for name in ("f0", "F0", "finf", "Finf")})


@dataclass(frozen=True)
class SystemSpec:
    """Periodic impulsive delay system

    x_i'(t) = -d_i(t) x_i(t) + sum_{j != i} a_ij(t) x_j(t) + g_i(t, x_it),  t != t_k
    x_i(t_k+) - x_i(t_k) = I_ik(x_i(t_k))

    Building a SystemSpec only checks its structure. Hypotheses on the coefficients and
    impulses are checked by `check_hypotheses`.
    """

    n: int
    omega: float
    death: tuple
    coupling: tuple
    nonlinearity: tuple
    impulses: ImpulseSchedule = field(default_factory=ImpulseSchedule)
    name: str = ""
    envelopes: EnvelopePair = None
    limits: LimitProfile = None
    meta: dict = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "death", tuple(self.death))
        object.__setattr__(self, "coupling", tuple(tuple(row) for row in self.coupling))
        object.__setattr__(self, "nonlinearity", tuple(self.nonlinearity))
        if self.meta is None:
            object.__setattr__(self, "meta", {})

        if self.n < 1:
            raise ModelError("System dimension must be >= 1")
        if not self.omega > 0:
            raise ModelError("System period must be > 0")
        if len(self.death) != self.n or len(self.nonlinearity) != self.n:
            raise ModelError(f"System needs {self.n} death rates and {self.n} birth functions")
        if len(self.coupling) != self.n or any(len(row) != self.n for row in self.coupling):
            raise ModelError(f"Coupling matrix must be {self.n}x{self.n}")

        for i in range(self.n):
            diagonal = self.coupling[i][i]
            if diagonal.mean != 0 or not diagonal.is_constant():
                raise ModelError(f"Coupling a[{i + 1}][{i + 1}] must be identically zero")

        for coef in self.coefficients():
            if abs(coef.period - self.omega) > PERIOD_TOLERANCE * self.omega:
                raise ModelError(
                    f"Coefficient {coef.label or '?'} has period {coef.period} != {self.omega}"
                )

        self.impulses.validate(self.omega, self.n)

        if self.envelopes is not None and len(self.envelopes.b1) != self.n:
            raise ModelError(f"Envelopes must hold {self.n} entries")
        if self.limits is not None and len(self.limits.f0) != self.n:
            raise ModelError(f"Limit profile must hold {self.n} entries")

    def coefficients(self):
        """Every periodic coefficient of the system"""
        coefs = list(self.death) + [a for row in self.coupling for a in row]
        for descriptor in self.nonlinearity:
            coefs.extend(descriptor.coefficients())
        if self.envelopes is not None:
            coefs.extend(self.envelopes.b1 + self.envelopes.b2)
        return coefs

    @property
    def p(self) -> int:  # pylint: disable=invalid-name
        """Impulse instants per period"""
        return self.impulses.p

    def is_impulsive(self) -> bool:
        """True when at least one non trivial impulse map exists"""
        return not self.impulses.is_empty()

    def max_delay(self) -> float:
        """Largest delay of the system"""
        return max(descriptor.max_delay() for descriptor in self.nonlinearity)

    def kinds(self):
        """Distinct birth function kinds, in component order"""
        return list(dict.fromkeys(descriptor.kind for descriptor in self.nonlinearity))

    def breakpoints(self, depth: int = BREAKPOINT_DEPTH):
        """Panel boundaries in [0, omega): impulse instants and their constant delay images"""
        points = set(self.impulses.instants)
        delays = sorted({tau for desc in self.nonlinearity for tau in desc.constant_delays()})
        for instant in self.impulses.instants:
            for tau in delays:
                for order in range(1, depth + 1):
                    points.add(float(np.mod(instant + order * tau, self.omega)))
        return sorted(points)

    def grid(self, points: int = DEFAULT_POINTS):
        """Evaluation grid aligned on the system breakpoints"""
        return make_grid(self.omega, self.breakpoints(), points)

    def coupling_weight(self, i: int, v, times):
        """sum_{j != i} v_j / v_i a_ij(t)"""
        times = np.asarray(times, dtype=float)
        total = np.zeros(times.shape)
        for j in range(self.n):
            if j != i:
                total += v[j] / v[i] * self.coupling[i][j](times)
        return total

    def to_dict(self):
        """Config representation"""
        data = {
            "name": self.name,
            "period": self.omega,
            "dimension": self.n,
            "death": [d.to_dict() for d in self.death],
            "coupling": [[a.to_dict() for a in row] for row in self.coupling],
            "nonlinearity": [descriptor.to_dict() for descriptor in self.nonlinearity],
            "impulses": self.impulses.to_dict(),
        }
        if self.envelopes is not None:
            data["envelopes"] = self.envelopes.to_dict()
        if self.limits is not None:
            data["limits"] = self.limits.to_dict()
        if self.meta:
            data["meta"] = dict(self.meta)
        return data

    @classmethod
    def from_dict(cls, data: dict):
        """Build from a schema validated config mapping"""

        period = data["period"]
        n = data["dimension"]

        def coefficient(value, label):
            return PeriodicFn.from_dict(period, value, label=label)

        coupling = data.get("coupling") or [[0.0] * n for _ in range(n)]

        return cls(
            n=n,
            omega=period,
            death=tuple(coefficient(d, f"d[{i + 1}]") for i, d in enumerate(data["death"])),
            coupling=tuple(
                tuple(coefficient(a, f"a[{i + 1}][{j + 1}]") for j, a in enumerate(row))
                for i, row in enumerate(coupling)
            ),
            nonlinearity=tuple(
                NonlinearityDescriptor.from_dict(period, entry, component=i)
                for i, entry in enumerate(data["nonlinearity"])
            ),
            impulses=ImpulseSchedule.from_dict(data.get("impulses")),
            name=data.get("name", ""),
            envelopes=(
                EnvelopePair.from_dict(period, data["envelopes"]) if data.get("envelopes") else None
            ),
            limits=LimitProfile.from_dict(data["limits"]) if data.get("limits") else None,
            meta=dict(data.get("meta") or {}),
        )

    def digest(self) -> str:
        """sha256 of the canonical config representation"""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def check_hypotheses(spec: SystemSpec):
    """Raise HypothesisError (tag H1..H4) when the system leaves the supported class

    (H1) and (H2) are enforced when the schedule and the maps are built, (H3) and (H4)
    need the whole system.
    """

    log = get_perisol_logger()
    times = np.linspace(0.0, spec.omega, HYPOTHESIS_SAMPLES + 1)

    try:
        for coef in spec.coefficients():
            coef(times)
    except ModelError as exc:
        log.error(f"Hypothesis (H4) violated : {exc}")
        raise HypothesisError("H4", str(exc)) from exc

    for i in range(spec.n):
        d_omega = spec.death[i].integral()
        if not d_omega > 0:
            raise HypothesisError(
                "H4", f"integral of d[{i + 1}] over a period must be > 0 (got {d_omega})"
            )

        product = np.prod([1.0 + spec.impulses.map_for(i, k).upper_slope for k in range(spec.p)])
        if not product < np.exp(d_omega):
            log.error(f"Hypothesis (H3) violated for component {i + 1}")
            raise HypothesisError(
                "H3",
                f"component {i + 1}: product of (1 + eta_k) = {product:.12g} "
                f"is not below exp(D(omega)) = {np.exp(d_omega):.12g}",
            )

    if spec.n > 1:
        for i in range(spec.n):
            couplings = [spec.coupling[i][j].integral() for j in range(spec.n) if j != i]
            if all(value > 0 for value in couplings):
                continue
            birth = integrate.simpson(spec.nonlinearity[i].evaluate_constant(times, 0.0), x=times)
            if not birth > 0:
                raise HypothesisError(
                    "H4",
                    f"component {i + 1}: some coupling a[{i + 1}][j] has zero mean "
                    "and g(t, 0) integrates to 0",
                )

    log.debug(f"System {spec.name} satisfies (H1)-(H4)")
    return spec


def system_from_dict(data: dict) -> SystemSpec:
    """Validate, build and check a system from an already parsed config"""
    return check_hypotheses(SystemSpec.from_dict(validate_config(data)))


def load_system(path: str) -> SystemSpec:
    """Load a system description from YAML, all hypotheses checked"""
    return check_hypotheses(SystemSpec.from_dict(config_from_yaml(path)))


def save_system(spec: SystemSpec, path: str):
    """Write a system description to YAML"""
    with open(path, "w", encoding="utf-8") as yaml_stream:
        yaml.safe_dump(spec.to_dict(), yaml_stream, sort_keys=False)
