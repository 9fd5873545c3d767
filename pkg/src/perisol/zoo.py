""" Perisol
    Built-in systems : worked examples with their declared envelopes, limits and expected
    quantities
"""

import math
from dataclasses import dataclass, field

import numpy as np

from perisol.model.impulses import ImpulseKind, ImpulseMap, ImpulseSchedule
from perisol.model.nonlinearity import NonlinearityDescriptor, NonlinearityKind, NonlinearTerm
from perisol.model.periodic import PeriodicFn
from perisol.model.system import EnvelopePair, SystemSpec, check_hypotheses

# pylint: disable=too-many-arguments,invalid-name

PROVENANCES = ("reference", "derived", "trivial")


@dataclass(frozen=True)
class Expected:
    """Expected quantity of a zoo entry, with where it comes from and how close to match it"""

    value: object
    provenance: str
    tolerance: float = 0.0

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"Unknown provenance {self.provenance}")

    def to_dict(self):
        """Export expected quantity to dict format"""
        value = self.value
        if isinstance(value, (np.floating, np.bool_)):
            value = value.item()
        return {"value": value, "provenance": self.provenance, "tolerance": self.tolerance}


@dataclass
class ZooEntry:
    """A built-in system and the quantities it should reproduce"""

    id: str
    spec: SystemSpec
    expected: dict = field(default_factory=dict)

    def to_dict(self):
        """Export entry to dict format"""
        return {
            "id": self.id,
            "system": self.spec.to_dict(),
            "expected": {name: value.to_dict() for name, value in self.expected.items()},
        }


def _fn(omega, value=0.0, cos=(), sin=(), label=""):
    return PeriodicFn(period=omega, mean=value, cos_coeffs=cos, sin_coeffs=sin, label=label)


def _coupling(omega, n, value):
    return tuple(
        tuple(_fn(omega, 0.0 if i == j else value, label=f"a[{i + 1}][{j + 1}]") for j in range(n))
        for i in range(n)
    )


def _linear_schedule(instant, etas):
    if not any(etas):
        return ImpulseSchedule()
    return ImpulseSchedule(
        instants=(instant,),
        maps=(tuple(ImpulseMap(kind=ImpulseKind.LINEAR, eta=eta) for eta in etas),),
    )


def scalar_nicholson_example(tau: float = 1.0, c: float = 1.0) -> ZooEntry:
    """x' = -sin^2(t) x + 3 cos^2(t) x(t - tau) exp(-c x(t - tau)), period pi"""

    omega = math.pi
    term = NonlinearTerm(
        beta=_fn(omega, 1.5, cos=(1.5,), label="beta"),
        tau=_fn(omega, tau, label="tau"),
        c=_fn(omega, c, label="c"),
    )
    spec = SystemSpec(
        n=1,
        omega=omega,
        death=(_fn(omega, 0.5, cos=(-0.5,), label="d"),),
        coupling=_coupling(omega, 1, 0.0),
        nonlinearity=(NonlinearityDescriptor(NonlinearityKind.NICHOLSON_DISCRETE, (term,)),),
        name="scalar_nicholson",
        meta={"tau": "constant delay chosen as 1, the criterion does not depend on it"},
    )
    growth = math.exp(math.pi / 2)
    return ZooEntry(
        id="scalar_nicholson",
        spec=check_hypotheses(spec),
        expected={
            "integral_beta": Expected(3 * math.pi / 2, "reference", 1e-9),
            "growth_minus_one": Expected(growth - 1.0, "reference", 1e-9),
            "T3_3_average": Expected(True, "derived"),
            "birth_exceeds_death_everywhere": Expected(False, "reference"),
        },
    )


def planar_m1(omega: float, eta: float) -> float:
    """(e^{2 omega} - 1) / (e^{2 omega} - (1 + eta))"""
    growth = math.exp(2 * omega)
    return (growth - 1.0) / (growth - (1.0 + eta))


def planar_m2(omega: float, eta: float) -> float:
    """(e^{2 omega} - 1) / (e^{2 omega} / (1 + eta) - 1)"""
    growth = math.exp(2 * omega)
    return (growth - 1.0) / (growth / (1.0 + eta) - 1.0)


def planar_threshold(omega: float) -> float:
    """Largest admissible eta : (e^{2 omega} - 1) / (e^{2 omega} + 1)"""
    growth = math.exp(2 * omega)
    return (growth - 1.0) / (growth + 1.0)


def planar_autonomous_example(omega: float = math.log(2) / 2, eta=(0.2, 0.2)) -> ZooEntry:
    """x_i' = -2 x_i + x_j + x_i(t - 1) exp(-x_i(t - 1)), one linear impulse eta_i per period

    Without impulses 0 attracts every solution, admissible impulses create a positive
    periodic solution.
    """

    if not omega > 0:
        raise ValueError("omega must be > 0")
    eta = tuple(float(value) for value in np.broadcast_to(np.asarray(eta, dtype=float), (2,)))

    terms = [
        NonlinearTerm(
            beta=_fn(omega, 1.0, label=f"beta[{i + 1}]"),
            tau=_fn(omega, 1.0, label=f"tau[{i + 1}]"),
            c=_fn(omega, 1.0, label=f"c[{i + 1}]"),
        )
        for i in range(2)
    ]
    spec = SystemSpec(
        n=2,
        omega=omega,
        death=tuple(_fn(omega, 2.0, label=f"d[{i + 1}]") for i in range(2)),
        coupling=_coupling(omega, 2, 1.0),
        nonlinearity=tuple(
            NonlinearityDescriptor(NonlinearityKind.NICHOLSON_DISCRETE, (term,)) for term in terms
        ),
        impulses=_linear_schedule(omega / 2, eta),
        name="planar_autonomous",
        meta={"impulse_instant": "omega / 2"},
    )

    threshold = planar_threshold(omega)
    expected = {
        "threshold": Expected(threshold, "reference", 1e-12),
        "spectral_abscissa_nonimpulsive": Expected(0.0, "derived", 1e-12),
        "T4_2_planar": Expected(all(0 < value < threshold for value in eta), "reference"),
        "extinction": Expected(not any(eta), "reference"),
    }
    for i, value in enumerate(eta):
        expected[f"m1[{i + 1}]"] = Expected(planar_m1(omega, value), "reference", 1e-12)
        expected[f"m2[{i + 1}]"] = Expected(planar_m2(omega, value), "reference", 1e-12)

    return ZooEntry(id="planar_autonomous", spec=check_hypotheses(spec), expected=expected)


def hematopoiesis_system(
    dimension: int = 2,
    omega: float = 1.0,
    eta: float = 0.1,
    discrete: bool = False,
    coupling: float = 0.1,
    envelope_eps: float = 0.01,
) -> ZooEntry:
    """x_i' = -d_i x_i + sum_j a_ij x_j + beta_i / (1 + c_i (int_{t - tau}^t x_i)^alpha)

    With `discrete`, the window integral is replaced by x_i(t - tau). Declared envelopes
    are b1 = 1 / eps and b2 = eps.
    """

    kind = (
        NonlinearityKind.HEMATOPOIESIS_DISCRETE
        if discrete
        else NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED
    )
    descriptors = tuple(
        NonlinearityDescriptor(
            kind,
            (
                NonlinearTerm(
                    beta=_fn(omega, 1.0, sin=(0.5,), label=f"beta[{i + 1}]"),
                    tau=_fn(omega, 0.5, label=f"tau[{i + 1}]"),
                    c=_fn(omega, 1.0, label=f"c[{i + 1}]"),
                    alpha=2.0,
                ),
            ),
        )
        for i in range(dimension)
    )
    spec = SystemSpec(
        n=dimension,
        omega=omega,
        death=tuple(_fn(omega, 1.0, cos=(0.5,), label=f"d[{i + 1}]") for i in range(dimension)),
        coupling=_coupling(omega, dimension, coupling),
        nonlinearity=descriptors,
        impulses=_linear_schedule(omega / 2, (eta,) * dimension),
        name="hematopoiesis",
        envelopes=EnvelopePair(
            b1=tuple(_fn(omega, 1.0 / envelope_eps, label="b1") for _ in range(dimension)),
            b2=tuple(_fn(omega, envelope_eps, label="b2") for _ in range(dimension)),
        ),
    )

    growth = math.exp(omega)
    return ZooEntry(
        id="hematopoiesis",
        spec=check_hypotheses(spec),
        expected={
            "impulse_condition": Expected(1.0 + eta < growth, "reference"),
            "T4_1_hematopoiesis": Expected(True, "derived"),
        },
    )


def nicholson_distributed_system(
    dimension: int = 2, omega: float = 1.0, eta: float = 0.0, coupling: float = 0.2
) -> ZooEntry:
    """x_i' = -d_i x_i + sum_j a_ij x_j + beta_i int_{t - tau}^t gamma x_i(s) exp(-c x_i(s)) ds"""

    tau = 0.5
    descriptors = tuple(
        NonlinearityDescriptor(
            NonlinearityKind.NICHOLSON_DISTRIBUTED,
            (
                NonlinearTerm(
                    beta=_fn(omega, 4.0, sin=(1.0,), label=f"beta[{i + 1}]"),
                    tau=_fn(omega, tau, label=f"tau[{i + 1}]"),
                    c=_fn(omega, 1.0, label=f"c[{i + 1}]"),
                    gamma=_fn(omega, 1.0, label=f"gamma[{i + 1}]"),
                ),
            ),
        )
        for i in range(dimension)
    )
    spec = SystemSpec(
        n=dimension,
        omega=omega,
        death=tuple(_fn(omega, 1.0, cos=(0.3,), label=f"d[{i + 1}]") for i in range(dimension)),
        coupling=_coupling(omega, dimension, coupling),
        nonlinearity=descriptors,
        impulses=_linear_schedule(omega / 2, (eta,) * dimension),
        name="nicholson_distributed",
    )
    return ZooEntry(
        id="nicholson_distributed",
        spec=check_hypotheses(spec),
        expected={
            "derived_b_mean": Expected(4.0 * tau, "derived", 1e-9),
            "T_N1_nicholson": Expected(True, "derived"),
        },
    )


def mackey_glass_system(
    dimension: int = 2, omega: float = 1.0, eta: float = 0.0, coupling: float = 0.2
) -> ZooEntry:
    """x_i' = -d_i x_i + sum_j a_ij x_j + beta_i M / (1 + c M^alpha),  M = int_{t - tau}^t x_i"""

    tau = 0.5
    descriptors = tuple(
        NonlinearityDescriptor(
            NonlinearityKind.MACKEY_GLASS_DISTRIBUTED,
            (
                NonlinearTerm(
                    beta=_fn(omega, 3.0, sin=(1.0,), label=f"beta[{i + 1}]"),
                    tau=_fn(omega, tau, label=f"tau[{i + 1}]"),
                    c=_fn(omega, 1.0, label=f"c[{i + 1}]"),
                    alpha=2.0,
                ),
            ),
        )
        for i in range(dimension)
    )
    spec = SystemSpec(
        n=dimension,
        omega=omega,
        death=tuple(_fn(omega, 1.0, cos=(0.3,), label=f"d[{i + 1}]") for i in range(dimension)),
        coupling=_coupling(omega, dimension, coupling),
        nonlinearity=descriptors,
        impulses=_linear_schedule(omega / 2, (eta,) * dimension),
        name="mackey_glass",
    )
    return ZooEntry(
        id="mackey_glass",
        spec=check_hypotheses(spec),
        expected={
            "derived_b_mean": Expected(3.0 * tau, "derived", 1e-9),
            "T3_4_bounded": Expected(True, "derived"),
        },
    )


def nicholson_mixed_system(
    dimension: int = 1,
    omega: float = 1.0,
    beta: float = 6.0,
    death: float = 1.0,
    coupling: float = 0.0,
    eta: float = 0.0,
) -> ZooEntry:
    """x_i' = -d x_i + sum_j a_ij x_j + beta x_i(t - tau) exp(-c x_i(t - theta))

    Constant coefficients, so the averaged mixed monotonicity condition reads
    beta omega >= e^{d omega} (e^{d omega} - 1) for scalar systems.
    """

    descriptors = tuple(
        NonlinearityDescriptor(
            NonlinearityKind.NICHOLSON_MIXED,
            (
                NonlinearTerm(
                    beta=_fn(omega, beta, label=f"beta[{i + 1}]"),
                    tau=_fn(omega, 1.0, label=f"tau[{i + 1}]"),
                    c=_fn(omega, 1.0, label=f"c[{i + 1}]"),
                    theta=_fn(omega, 0.5, label=f"theta[{i + 1}]"),
                ),
            ),
        )
        for i in range(dimension)
    )
    spec = SystemSpec(
        n=dimension,
        omega=omega,
        death=tuple(_fn(omega, death, label=f"d[{i + 1}]") for i in range(dimension)),
        coupling=_coupling(omega, dimension, coupling),
        nonlinearity=descriptors,
        impulses=_linear_schedule(omega / 2, (eta,) * dimension),
        name="nicholson_mixed",
        meta={"c_plus": 1.0, "c_minus": 1.0},
    )
    growth = math.exp(death * omega)
    return ZooEntry(
        id="nicholson_mixed",
        spec=check_hypotheses(spec),
        expected={
            "average_condition": Expected(beta * omega >= growth * (growth - 1.0), "derived"),
            "pointwise_condition": Expected(beta > death * growth, "reference"),
        },
    )


ZOO = {
    "scalar_nicholson": scalar_nicholson_example,
    "planar_autonomous": planar_autonomous_example,
    "hematopoiesis": hematopoiesis_system,
    "nicholson_distributed": nicholson_distributed_system,
    "mackey_glass": mackey_glass_system,
    "nicholson_mixed": nicholson_mixed_system,
}


def zoo_ids():
    """Ids of the built-in systems"""
    return list(ZOO)


def make_entry(entry_id: str, **params) -> ZooEntry:
    """Create and return a zoo entry according to its id"""

    if entry_id not in ZOO:
        raise ValueError(f"The zoo entry {entry_id} does not exist (known: {', '.join(ZOO)})")
    return ZOO[entry_id](**params)


def community_spectral_abscissa(spec: SystemSpec) -> float:
    """Largest real part of the eigenvalues of M = [beta_i - d_i on the diagonal, a_ij off it]

    Only defined for systems with constant coefficients.
    """

    coefs = list(spec.death) + [a for row in spec.coupling for a in row]
    for descriptor in spec.nonlinearity:
        coefs.extend(term.beta for term in descriptor.terms)
    if not all(coef.is_constant() for coef in coefs):
        raise ValueError("The community matrix needs constant coefficients")

    matrix = np.array([[a.mean for a in row] for row in spec.coupling])
    for i, descriptor in enumerate(spec.nonlinearity):
        matrix[i, i] = sum(term.beta.mean for term in descriptor.terms) - spec.death[i].mean
    return float(np.max(np.linalg.eigvals(matrix).real))


def zhw_condition(entry) -> dict:
    """a1+ a2+ < d1- d2- for planar systems, and the interval of v1 / v2 it opens

    v2 a1+ / d1- < v1 < v2 d2- / a2+
    """

    spec = entry.spec if isinstance(entry, ZooEntry) else entry
    if spec.n != 2:
        raise ValueError("The condition is stated for planar systems")

    a1 = spec.coupling[0][1].extrema()[1]
    a2 = spec.coupling[1][0].extrema()[1]
    d1 = spec.death[0].extrema()[0]
    d2 = spec.death[1].extrema()[0]
    low = a1 / d1 if d1 > 0 else math.inf
    high = d2 / a2 if a2 > 0 else math.inf
    return {
        "holds": bool(a1 * a2 < d1 * d2),
        "ratio_low": float(low),
        "ratio_high": float(high),
    }
