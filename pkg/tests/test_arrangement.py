from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crn_tdi.geometry.arrangement import (arrangement_rays, enumerate_faces, merge_signs, region_contains,
                                          sign_vector)
from crn_tdi.geometry.linalg import canonical_normal


def random_normals(rng, n, k, lo=-2, hi=2):
    out = set()
    while len(out) < k:
        v = tuple(int(x) for x in rng.integers(lo, hi + 1, size=n))
        if any(v):
            out.add(canonical_normal(v))
    return sorted(out)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 4))
def test_cocircuit_faces_match_lp_oracle(seed, n, k):
    normals = random_normals(np.random.default_rng(seed), n, k if n > 1 else 1)
    fast = enumerate_faces(normals, n)
    slow = enumerate_faces(normals, n, method="lp")
    assert [f.signs for f in fast] == [f.signs for f in slow]
    for f in fast:
        assert sign_vector(normals, f.point) == f.signs


def test_faces_of_coordinate_arrangement():
    faces = enumerate_faces([(1, 0), (0, 1)], 2)
    assert len(faces) == 9
    assert faces[0].signs == (0, 0) and faces[0].point == (0, 0)
    assert len(enumerate_faces([(1, 0), (0, 1)], 2, full_only=True)) == 4


@pytest.mark.parametrize("k", range(1, 7))
def test_planar_arrangement_counts(k):
    # k distinct lines through the origin cut the plane into 2k sectors and 2k rays
    normals = sorted({canonical_normal((int(np.cos(np.pi * i / k) * 1000),
                                        int(np.sin(np.pi * i / k) * 1000))) for i in range(k)})
    assert len(normals) == k
    faces = enumerate_faces(normals, 2)
    assert sum(1 for f in faces if f.zeros == 0) == 2 * k
    # rays are counted modulo the lineality space (k = 1: the line's two normal directions)
    assert len(arrangement_rays(normals, 2)) == 2 * k
    if k > 1:
        assert sum(1 for f in faces if f.zeros == 1) == 2 * k


def test_merge_signs():
    assert merge_signs([(1, -1, 0), (1, 1, 0)]) == (1, 0, 0)
    with pytest.raises(ValueError):
        merge_signs([])


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3), st.integers(1, 5))
def test_lower_faces_are_intersections_of_chambers(seed, n, k):
    normals = random_normals(np.random.default_rng(seed), n, k)
    faces = enumerate_faces(normals, n)
    chambers = [f.signs for f in faces if f.zeros == 0]
    for f in faces:
        if f.zeros == 0:
            continue
        above = [c for c in chambers
                 if all(s == 0 or s == t for s, t in zip(f.signs, c))]
        merged = merge_signs(above)
        assert merged == f.signs
        assert region_contains(merged, f.signs, normals, n)
        assert region_contains(f.signs, merged, normals, n)
