""" Tests for perisol.zoo
"""

import math

import pytest

from perisol import impulse_algebra, zoo
from perisol.model.system import SystemSpec, system_from_dict


@pytest.mark.parametrize("entry_id", zoo.zoo_ids())
def test_entries_round_trip(entry_id):
    """Every built-in system survives its config representation"""

    entry = zoo.make_entry(entry_id)
    assert entry.id == entry_id
    assert SystemSpec.from_dict(entry.spec.to_dict()) == entry.spec
    assert system_from_dict(entry.to_dict()["system"]).digest() == entry.spec.digest()


def test_make_entry():
    """Entries are built from their id and parameters"""

    entry = zoo.make_entry("planar_autonomous", eta=0.1)
    assert entry.spec.is_impulsive()
    assert not zoo.make_entry("planar_autonomous", eta=0.0).spec.is_impulsive()
    with pytest.raises(ValueError):
        zoo.make_entry("lotka_volterra")


def test_scalar_nicholson_quantities():
    """Reference integrals of the scalar Nicholson example"""

    entry = zoo.scalar_nicholson_example()
    beta = entry.spec.nonlinearity[0].terms[0].beta
    expected = entry.expected
    assert beta.integral() == pytest.approx(
        expected["integral_beta"].value, abs=expected["integral_beta"].tolerance
    )
    (bound,) = impulse_algebra.bounds(entry.spec)
    assert math.expm1(bound.D_omega) == pytest.approx(
        expected["growth_minus_one"].value, abs=expected["growth_minus_one"].tolerance
    )
    assert expected["integral_beta"].to_dict()["provenance"] == "reference"


def test_planar_expectations():
    """Threshold and multipliers of the planar example"""

    omega = math.log(2) / 2
    assert zoo.planar_threshold(omega) == pytest.approx(1.0 / 3.0)
    entry = zoo.planar_autonomous_example(omega, eta=(0.2, 0.3))
    assert entry.expected["T4_2_planar"].value
    assert not entry.expected["extinction"].value
    for bound, eta in zip(impulse_algebra.bounds(entry.spec), (0.2, 0.3)):
        assert bound.m1 == pytest.approx(zoo.planar_m1(omega, eta))
        assert bound.m2 == pytest.approx(zoo.planar_m2(omega, eta))

    assert zoo.planar_autonomous_example(omega, eta=0.0).expected["extinction"].value
    assert not zoo.planar_autonomous_example(omega, eta=0.4).expected["T4_2_planar"].value


def test_spectral_abscissa():
    """Community matrix [[-1, 1], [1, -1]] of the planar example"""

    spec = zoo.planar_autonomous_example(eta=0.0).spec
    assert zoo.community_spectral_abscissa(spec) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        zoo.community_spectral_abscissa(zoo.nicholson_distributed_system().spec)


def test_zhw_condition():
    """a1+ a2+ < d1- d2- on the planar example"""

    condition = zoo.zhw_condition(zoo.planar_autonomous_example())
    assert condition["holds"]
    assert condition["ratio_low"] == pytest.approx(0.5)
    assert condition["ratio_high"] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        zoo.zhw_condition(zoo.scalar_nicholson_example())


def test_expected_provenance():
    """Provenance is reference, derived or trivial"""

    with pytest.raises(ValueError):
        zoo.Expected(1.0, "guessed")
