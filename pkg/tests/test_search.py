""" Tests for perisol.criteria.search
"""

import numpy as np
import pytest

from perisol import zoo
from perisol.criteria import make_checker
from perisol.criteria.search import search, search_v


def test_scalar_search():
    """Scalar systems only try v = 1"""

    spec = zoo.scalar_nicholson_example().spec
    v, report = search(spec, make_checker("T3_3_average"))
    assert list(v) == [1.0]
    assert report.verdict


def test_planar_search():
    """The witness of a passing search passes the criterion"""

    spec = zoo.planar_autonomous_example(eta=0.2).spec
    checker = make_checker("T4_2_planar")
    v, report = search(spec, checker)
    assert v is not None
    assert v[0] == 1.0
    assert report.verdict
    assert checker.check(spec, v).verdict
    assert report.margin >= checker.check(spec, np.ones(2)).margin - 1e-12


@pytest.mark.parametrize("eta", [0.0, 0.4])
def test_failed_search(eta):
    """No scaling vector rescues the planar criterion outside 0 < eta < 1/3"""

    spec = zoo.planar_autonomous_example(eta=eta).spec
    assert search_v(spec, make_checker("T4_2_planar")) is None
