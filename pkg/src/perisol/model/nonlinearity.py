""" Perisol
    Birth functions g_i(t, x_t) : descriptor kinds, evaluation, derived b_i(t) and limit profiles
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from perisol.exceptions import ModelError
from perisol.model.periodic import DerivedFn, PeriodicFn

# pylint: disable=invalid-name

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)
PROFILE_SAMPLES = 4096


class NonlinearityKind(Enum):
    """Supported birth function families"""

    NICHOLSON_DISCRETE = "nicholson_discrete"
    NICHOLSON_DISTRIBUTED = "nicholson_distributed"
    NICHOLSON_MIXED = "nicholson_mixed"
    HEMATOPOIESIS_DISTRIBUTED = "hematopoiesis_distributed"
    HEMATOPOIESIS_DISCRETE = "hematopoiesis_discrete"
    MACKEY_GLASS_DISTRIBUTED = "mackey_glass_distributed"
    CUSTOM_TABLE = "custom_table"


REQUIRED_FIELDS = {
    NonlinearityKind.NICHOLSON_DISCRETE: ("c",),
    NonlinearityKind.NICHOLSON_DISTRIBUTED: ("c", "gamma"),
    NonlinearityKind.NICHOLSON_MIXED: ("c", "theta"),
    NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED: ("c", "alpha"),
    NonlinearityKind.HEMATOPOIESIS_DISCRETE: ("c", "alpha"),
    NonlinearityKind.MACKEY_GLASS_DISTRIBUTED: ("c", "alpha"),
    NonlinearityKind.CUSTOM_TABLE: ("table",),
}

DISTRIBUTED_KINDS = (
    NonlinearityKind.NICHOLSON_DISTRIBUTED,
    NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED,
    NonlinearityKind.MACKEY_GLASS_DISTRIBUTED,
)

# Bounded in the state, with g(t, 0) = 0 and g(t, x) <= b(t) x near 0
BOUNDED_KINDS = (
    NonlinearityKind.NICHOLSON_DISCRETE,
    NonlinearityKind.NICHOLSON_DISTRIBUTED,
    NonlinearityKind.MACKEY_GLASS_DISTRIBUTED,
)

HEMATOPOIESIS_KINDS = (
    NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED,
    NonlinearityKind.HEMATOPOIESIS_DISCRETE,
)


@dataclass(frozen=True)
class NonlinearTerm:
    """One term l of g_i: coefficients beta_il, tau_il and the kind specific ones"""

    beta: PeriodicFn
    tau: PeriodicFn
    c: PeriodicFn = None
    gamma: PeriodicFn = None
    theta: PeriodicFn = None
    alpha: float = None
    table: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "table", tuple((float(u), float(h)) for u, h in self.table))
        if self.table:
            nodes = np.array(self.table)
            if nodes[0, 0] != 0.0 or np.any(np.diff(nodes[:, 0]) <= 0):
                raise ModelError("custom_table nodes must start at u=0 and increase strictly")
            if np.any(nodes[:, 1] < 0):
                raise ModelError("custom_table values must be nonnegative")

    def h(self, u):
        """Tabulated response, constant past the last node"""
        nodes = np.array(self.table)
        return np.interp(u, nodes[:, 0], nodes[:, 1])

    def h_slope0(self) -> float:
        """Slope of the first table segment"""
        (u0, h0), (u1, h1) = self.table[:2]
        return (h1 - h0) / (u1 - u0)

    def delays(self):
        """Delay coefficients read by this term"""
        return [delay for delay in (self.tau, self.theta) if delay is not None]

    def to_dict(self):
        """Config representation"""
        data = {"beta": self.beta.to_dict(), "tau": self.tau.to_dict()}
        for name in ("c", "gamma", "theta"):
            if getattr(self, name) is not None:
                data[name] = getattr(self, name).to_dict()
        if self.alpha is not None:
            data["alpha"] = self.alpha
        if self.table:
            data["table"] = [list(node) for node in self.table]
        return data

    @classmethod
    def from_dict(cls, period: float, data: dict, label: str = ""):
        """Build from config mapping"""

        def coefficient(name):
            if name not in data or data[name] is None:
                return None
            return PeriodicFn.from_dict(period, data[name], label=f"{name}{label}")

        return cls(
            beta=coefficient("beta"),
            tau=coefficient("tau"),
            c=coefficient("c"),
            gamma=coefficient("gamma"),
            theta=coefficient("theta"),
            alpha=None if data.get("alpha") is None else float(data["alpha"]),
            table=tuple(tuple(node) for node in data.get("table", ())),
        )


class ConstantAccess:
    """State access for the constant function x_i = value (used for g_i(t, 0) and profiles)"""

    def __init__(self, value: float, integrands: dict):
        self.value = float(value)
        self.integrands = integrands

    def delayed(self, times, side="left"):  # pylint: disable=unused-argument
        """x_i at the given times"""
        return np.full(np.shape(times), self.value)

    def window(self, key, start, stop):
        """Integral of psi_key(r, x_i(r)) over [start, stop] (Gauss-Legendre)"""
        start = np.asarray(start, dtype=float)
        stop = np.asarray(stop, dtype=float)
        half = 0.5 * (stop - start)
        middle = 0.5 * (stop + start)
        nodes = middle[..., None] + half[..., None] * GAUSS_NODES
        values = self.integrands[key](nodes, np.full(nodes.shape, self.value))
        return half * (values @ GAUSS_WEIGHTS)


@dataclass(frozen=True)
class NonlinearityDescriptor:
    """g_i for one component: a kind and its m terms"""

    kind: NonlinearityKind
    terms: tuple

    def __post_init__(self):
        kind = NonlinearityKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "terms", tuple(self.terms))

        if not self.terms:
            raise ModelError(f"Nonlinearity {kind.value} needs at least one term")
        for index, term in enumerate(self.terms):
            if term.beta is None or term.tau is None:
                raise ModelError(f"Term {index} of {kind.value} needs beta and tau")
            missing = [
                name for name in REQUIRED_FIELDS[kind] if getattr(term, name) in (None, ())
            ]
            if missing:
                raise ModelError(f"Term {index} of {kind.value} is missing {', '.join(missing)}")
            if term.alpha is not None and term.alpha <= 0:
                raise ModelError(f"Term {index} of {kind.value} needs a positive exponent alpha")

    @property
    def is_distributed(self) -> bool:
        """True when g_i integrates the state over delay windows"""
        return self.kind in DISTRIBUTED_KINDS

    def coefficients(self):
        """Every periodic coefficient of the descriptor"""
        coefs = []
        for term in self.terms:
            coefs.extend(
                coef
                for coef in (term.beta, term.tau, term.c, term.gamma, term.theta)
                if coef is not None
            )
        return coefs

    def max_delay(self) -> float:
        """Largest delay over terms and over one period"""
        return max(delay.extrema()[1] for term in self.terms for delay in term.delays())

    def constant_delays(self):
        """Values of the delays that do not depend on t"""
        return sorted(
            {delay.mean for term in self.terms for delay in term.delays() if delay.is_constant()}
        )

    def window_integrands(self) -> dict:
        """psi(r, u) for every delay window the kind integrates"""
        if self.kind is NonlinearityKind.NICHOLSON_DISTRIBUTED:
            return {
                f"term{index}": (
                    lambda r, u, term=term: term.gamma(r) * u * np.exp(-term.c(r) * u)
                )
                for index, term in enumerate(self.terms)
            }
        if self.is_distributed:
            return {"state": lambda r, u: u}
        return {}

    def evaluate(self, times, access, side="left"):
        """g_i(s, x_s) at the given times through a state access object"""

        times = np.asarray(times, dtype=float)
        total = np.zeros(times.shape)

        for index, term in enumerate(self.terms):
            beta = term.beta(times)
            lagged = times - term.tau(times)

            if self.kind is NonlinearityKind.NICHOLSON_DISCRETE:
                y = access.delayed(lagged, side)
                total += beta * y * np.exp(-term.c(times) * y)
            elif self.kind is NonlinearityKind.NICHOLSON_DISTRIBUTED:
                total += beta * access.window(f"term{index}", lagged, times)
            elif self.kind is NonlinearityKind.NICHOLSON_MIXED:
                y = access.delayed(lagged, side)
                z = access.delayed(times - term.theta(times), side)
                total += beta * y * np.exp(-term.c(times) * z)
            elif self.kind is NonlinearityKind.HEMATOPOIESIS_DISCRETE:
                y = np.maximum(access.delayed(lagged, side), 0.0)
                total += beta / (1.0 + term.c(times) * y**term.alpha)
            elif self.kind is NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED:
                mass = np.maximum(access.window("state", lagged, times), 0.0)
                total += beta / (1.0 + term.c(times) * mass**term.alpha)
            elif self.kind is NonlinearityKind.MACKEY_GLASS_DISTRIBUTED:
                mass = np.maximum(access.window("state", lagged, times), 0.0)
                total += beta * mass / (1.0 + term.c(times) * mass**term.alpha)
            else:
                total += beta * term.h(access.delayed(lagged, side))

        return total

    def evaluate_constant(self, times, value: float):
        """g_i(s, u) for the constant state u"""
        return self.evaluate(times, ConstantAccess(value, self.window_integrands()))

    def derived_b(self, period: float) -> DerivedFn:
        """b_i(t) of the bounded and hematopoiesis families

        Linear growth rate at 0 for Nicholson, Mackey-Glass and table kinds, value at 0 for
        hematopoiesis kinds.
        """

        terms = self.terms

        if self.kind is NonlinearityKind.NICHOLSON_DISTRIBUTED:

            def func(t):
                return sum(
                    term.beta(t)
                    * (term.gamma.antiderivative(t) - term.gamma.antiderivative(t - term.tau(t)))
                    for term in terms
                )

        elif self.kind is NonlinearityKind.MACKEY_GLASS_DISTRIBUTED:

            def func(t):
                return sum(term.beta(t) * term.tau(t) for term in terms)

        elif self.kind is NonlinearityKind.CUSTOM_TABLE:

            def func(t):
                return sum(term.beta(t) * term.h_slope0() for term in terms)

        else:

            def func(t):
                return sum(term.beta(t) for term in terms)

        return DerivedFn(period, func, label=f"b[{self.kind.value}]")

    def limit_profile(self, death: PeriodicFn):
        """(f0, F0, finf, Finf) of F_i(t,u) / (d_i(t) u), or None when it is not derivable

        Only discrete-delay kinds of the form sum_l f_l(t, x(t - tau_l(t))) are covered.
        """

        times = np.linspace(0.0, death.period, PROFILE_SAMPLES + 1)
        d = death(times)

        if self.kind in (NonlinearityKind.NICHOLSON_DISCRETE, NonlinearityKind.CUSTOM_TABLE):
            if self.kind is NonlinearityKind.CUSTOM_TABLE and any(
                term.h(0.0) > 0 for term in self.terms
            ):
                return (np.inf, np.inf, 0.0, 0.0)
            rate = self.derived_b(death.period)(times)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(d > 0, rate / np.where(d > 0, d, 1.0), np.inf)
            return (float(np.min(ratio)), float(np.max(ratio)), 0.0, 0.0)

        if self.kind is NonlinearityKind.HEMATOPOIESIS_DISCRETE:
            return (np.inf, np.inf, 0.0, 0.0)

        return None

    def to_dict(self):
        """Config representation"""
        return {"kind": self.kind.value, "terms": [term.to_dict() for term in self.terms]}

    @classmethod
    def from_dict(cls, period: float, data: dict, component: int = 0):
        """Build from config mapping"""
        return cls(
            kind=NonlinearityKind(data["kind"]),
            terms=tuple(
                NonlinearTerm.from_dict(period, term, label=f"[{component + 1}][{index + 1}]")
                for index, term in enumerate(data["terms"])
            ),
        )
