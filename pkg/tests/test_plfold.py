import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobreflect.inversive import INFINITY
from mobreflect.plfold import CubeInversion, involution_check, jacobian_det, pl_invert

UNIT = CubeInversion((0, 0, 0, 0), F(1, 2))


def test_examples():
    assert pl_invert(UNIT, (1, 0, 0, 0)) == (F(1, 4), 0, 0, 0)
    assert pl_invert(UNIT, (F(1, 2), F(1, 2), 0, 0)) == (F(1, 2), F(1, 2), 0, 0)
    assert pl_invert(UNIT, (0, 0, 0, 0)) is INFINITY
    assert pl_invert(UNIT, INFINITY) == (0, 0, 0, 0)
    assert pl_invert(UNIT, pl_invert(UNIT, INFINITY)) is INFINITY


def test_rejects_bad_width():
    with pytest.raises(ValueError):
        CubeInversion((0, 0, 0, 0), 0)


rat = st.fractions(min_value=-5, max_value=5, max_denominator=30)


@settings(max_examples=300, deadline=None)
@given(st.tuples(rat, rat, rat, rat), st.tuples(rat, rat, rat, rat),
       st.fractions(min_value=F(1, 10), max_value=3, max_denominator=10))
def test_involution_and_radial_monotonicity(x, o, s):
    ci = CubeInversion(o, s)
    assert involution_check(ci, [x]) is None
    if x == ci.center:
        return
    y = pl_invert(ci, x)
    # same ray, sup-radius inverted about s
    assert ci.sup_radius(y) * ci.sup_radius(x) == s * s
    u = [a - c for a, c in zip(x, o)]
    v = [a - c for a, c in zip(y, o)]
    k = next(vi / ui for ui, vi in zip(u, v) if ui)
    assert k > 0 and all(vi == k * ui for ui, vi in zip(u, v))


def test_inside_goes_outside():
    x = (F(1, 8), F(-1, 5), 0, F(1, 3))
    assert UNIT.side(x) == -1 and UNIT.side(pl_invert(UNIT, x)) == 1


def test_boundary_points_fixed():
    pts = [(F(1, 2), F(k, 7) - F(1, 2), 0, 0) for k in range(8)] + [(F(-1, 2),) * 4]
    assert involution_check(UNIT, pts) is None
    assert all(pl_invert(UNIT, p) == p for p in pts)


def test_orientation_reversing():
    rng = random.Random(2)
    for _ in range(50):
        ci = CubeInversion([F(rng.randint(-5, 5), 3) for _ in range(4)], F(rng.randint(1, 9), 4))
        # a point whose sup-norm coordinate is unique (interior of a face ray)
        u = [rng.uniform(-1, 1) for _ in range(4)]
        k = rng.randrange(4)
        u[k] = rng.choice((-1, 1)) * (max(abs(a) for a in u) + 0.5)
        x = [float(c) + a for c, a in zip(ci.center, u)]
        assert jacobian_det(ci, x) < 0
        # closed form: -(s^2 / u_k^2)^4
        expected = -(float(ci.half_width) ** 2 / u[k] ** 2) ** 4
        assert abs(jacobian_det(ci, x) - expected) < 1e-6 * max(1.0, abs(expected))
