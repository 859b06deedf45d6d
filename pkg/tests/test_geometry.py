import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from maxfield.errors import ConfigError
from maxfield.geometry import RectDomain, dilated_volume, dist_to_K, dist2_to_K


def test_grid_size_and_order():
    d1 = RectDomain(1, 1.0, 0.1)
    assert d1.size == 21 and d1.axis[0] == -1.0 and d1.axis[-1] == 1.0
    d2 = RectDomain(2, 1.0, 0.25)
    assert d2.shape == (9, 9)
    pts = d2.points
    # lexicographic: first coordinate slowest
    assert np.all(np.diff(pts[:, 0]) >= 0)
    assert tuple(pts[1]) == (-1.0, -0.75)
    assert d2.index_of((0.0, 0.25)) == 4 * 9 + 5
    assert not pts.flags.writeable


def test_grid_step_must_divide():
    with pytest.raises(ConfigError, match="grid_step must divide 2R") as info:
        RectDomain(1, 1.0, 0.3)
    assert info.value.field == "grid_step"
    for bad in [dict(dim=3, R=1, h=0.1), dict(dim=1, R=-1, h=0.1), dict(dim=1, R=1, h=0)]:
        with pytest.raises(ConfigError):
            RectDomain(**bad)


def test_singleton():
    d = RectDomain(2, 0.0, 0.1)
    assert d.size == 1 and d.volume == 0.0
    assert d.points.tolist() == [[0.0, 0.0]]


def test_distance_to_rectangle():
    d = RectDomain(2, 1.0, 0.5)
    assert dist_to_K(d, [0.3, -0.2]) == 0.0
    assert dist_to_K(d, [4.0, 0.0]) == pytest.approx(3.0)
    assert dist_to_K(d, [4.0, -5.0]) == pytest.approx(5.0)
    assert dist2_to_K(1.0, np.array([-3.0])) == pytest.approx(4.0)


@given(st.floats(0, 20), st.floats(0.01, 10))
def test_dilated_volumes(R, a):
    d1 = RectDomain(1, R, 2 * R if R > 0 else 1.0)
    assert dilated_volume(d1, a, "cube") == pytest.approx(2 * (R + a))
    assert dilated_volume(d1, a, "ball") == pytest.approx(2 * (R + a))
    d2 = RectDomain(2, R, 2 * R if R > 0 else 1.0)
    assert dilated_volume(d2, a, "cube") == pytest.approx(4 * (R + a) ** 2)
    assert dilated_volume(d2, a, "ball") == pytest.approx(4 * R * R + 8 * R * a + math.pi * a * a)
