import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import lsq_linear

from crn_tdi.geometry.arrangement import arrangement_rays, enumerate_faces, sign_vector
from crn_tdi.geometry.cones import GeneratedCone, chamber_polar, cone_member, cone_residual
from crn_tdi.geometry.distance import distance_to_region, project_to_region

from test_arrangement import random_normals


def moreau_distance(X, signs, normals):
    """dist(X, C) = |proj of X onto the polar of C| (Moreau decomposition)."""
    cols = [-s * np.array(n, float) for s, n in zip(signs, normals) if s]
    cols += [np.array(n, float) for s, n in zip(signs, normals) if not s]
    cols += [-np.array(n, float) for s, n in zip(signs, normals) if not s]
    if not cols:
        return 0.0
    M = np.array(cols).T
    coef = lsq_linear(M, np.asarray(X, float), bounds=(0, np.inf), method='bvls').x
    return float(np.linalg.norm(M @ coef))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 4))
def test_distance_matches_moreau_oracle(seed, n, k):
    rng = np.random.default_rng(seed)
    normals = random_normals(rng, n, k if n > 1 else 1)
    faces = enumerate_faces(normals, n)
    for f in faces[:: max(1, len(faces) // 6)]:
        X = rng.normal(scale=3, size=n)
        d = distance_to_region(X, f.signs, normals)
        assert d == pytest.approx(moreau_distance(X, f.signs, normals), abs=1e-7)


def test_distance_grid_oracle():
    # closed quadrant x >= 0, y >= 0 against brute-force grid minimisation
    normals = [(1, 0), (0, 1)]
    g = np.linspace(0, 4, 401)
    pts = np.array(np.meshgrid(g, g)).reshape(2, -1).T
    for X in ([-1.0, 2.0], [-1.5, -0.5], [3.0, 1.0]):
        brute = np.min(np.linalg.norm(pts - X, axis=1))
        assert distance_to_region(X, (1, 1), normals) == pytest.approx(brute, abs=1e-2)


def test_projection_lands_in_region():
    normals = [(1, 1), (1, -1)]
    y = project_to_region([-3.0, 0.5], (1, 1), normals)
    assert np.all(np.array(normals) @ y >= -1e-9)


def test_chamber_polar_example():
    cone = chamber_polar((1,), [(1,)])
    assert cone.generators == ((-1,),)
    assert cone_member([-2.0], cone) and not cone_member([0.5], cone)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 4))
def test_polar_membership_matches_ray_duality(seed, n, k):
    rng = np.random.default_rng(seed)
    normals = random_normals(rng, n, k if n > 1 else 1)
    faces = enumerate_faces(normals, n)
    rays = arrangement_rays(normals, n)
    f = faces[int(rng.integers(len(faces)))]
    cone = chamber_polar(f.signs, normals)
    # modulo the common lineality the region of f is generated by the rays in its closure
    gens = [np.array(r, float) for r in rays
            if all(s == 0 or t == s for s, t in zip(sign_vector(normals, r), f.signs))
            and all(t != 0 or s == 0 for s, t in zip(sign_vector(normals, r), f.signs))]
    for _ in range(20):
        v = rng.normal(size=n)
        exact_in = cone_member(v, cone)
        dual_in = (all(v @ g <= 1e-9 for g in gens)
                   and _orthogonal_to_lineality(v, normals, f.signs))
        assert exact_in == dual_in


def _orthogonal_to_lineality(v, normals, signs):
    from crn_tdi.geometry.linalg import Subspace
    zero = [nv for s, nv in zip(signs, normals) if s == 0]
    strict = [nv for s, nv in zip(signs, normals) if s != 0]
    L = Subspace.span(zero + strict, len(v)).orthogonal_complement()
    return all(abs(v @ np.array(b, float)) <= 1e-9 for b in L.integer_basis())


def test_cone_member_exact_and_errors():
    cone = GeneratedCone(2, ((1, 0),), ((0, 1),))
    assert cone_member((3, -7), cone, tol=0)
    assert not cone_member((-1, 0), cone, tol=0)
    with pytest.raises(ValueError):
        cone_member((1, 2, 3), cone)
    assert GeneratedCone.whole_space(3).is_whole_space()
    assert cone_residual([0.0, 0.0], GeneratedCone(2)) == 0.0
