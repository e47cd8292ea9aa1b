import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crn_tdi.fan import (DegenerateSources, Fan, build_fan, cones_within, fan_rays,
                         intersection_signs)

from test_arrangement import random_normals


def test_birth_death_fan(graph_A):
    fan = build_fan(graph_A.sources)
    assert fan.normals == ((1,),)
    assert sorted(r.direction for r in fan.rays) == [(-1,), (1,)]
    assert len(fan.chambers) == 2 and fan.J.dim == 1


def test_case_two_fan_has_lineality():
    # sources on a line in the plane: J is one-dimensional
    fan = build_fan([(0, 0), (1, 1), (2, 2)])
    assert fan.J.dim == 1 and fan.lineality.dim == 1
    assert len(fan.chambers) == 2
    for r in fan.rays:
        assert fan.J.contains(r.direction)


def test_degenerate_sources():
    fan = build_fan([(1, 2)])
    assert fan.normals == ()
    with pytest.raises(DegenerateSources):
        fan_rays(fan)
    assert cones_within(fan, [0.0, 0.0], 1.0) == ([()], ())


def test_chambers_cover_space():
    fan = build_fan([(0, 0), (1, 0), (0, 1), (2, 3)])
    rng = np.random.default_rng(0)
    for X in rng.normal(size=(200, 2)):
        inside = [c for c in fan.chambers if fan.contains(c, tuple(float(x) for x in X))]
        assert len(inside) >= 1
        # a generic point lies in exactly one chamber
        assert len(inside) == 1


def test_cones_within_validates_delta():
    fan = Fan.from_normals([(1,)], 1)
    with pytest.raises(ValueError):
        cones_within(fan, [0.0], 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 4))
def test_closed_form_matches_distance_route(seed, n, k):
    rng = np.random.default_rng(seed)
    fan = Fan.from_normals(random_normals(rng, n, k if n > 1 else 1), n)
    for _ in range(5):
        delta = float(rng.uniform(0.1, 3))
        X = rng.normal(scale=2 * delta, size=n)
        # stay away from the hyperplane-distance boundary where float ties decide
        d = np.abs(fan.float_normals @ X) / np.linalg.norm(fan.float_normals, axis=1)
        if np.any(np.abs(d - delta) < 1e-6):
            continue
        qualifying, signs = cones_within(fan, X, delta)
        assert signs == intersection_signs(fan, X, delta)
        assert all(c in fan.chambers for c in qualifying)


@pytest.mark.parametrize("k", range(1, 7))
def test_planar_fan_counts(k):
    normals = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)][:k]
    fan = Fan.from_normals(normals, 2)
    assert len(fan.chambers) == 2 * k
    assert len(fan.rays) == 2 * k
