import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from trinoids.classify import (
    Membership,
    TripleTag,
    barycentric_membership,
    barycentric_membership_batch,
    bobenko_admissible,
    bobenko_membership_batch,
    classify_triple,
    tetrahedron_contains,
    tetrahedron_membership_batch,
    tetrahedron_slacks,
)
from trinoids.params import bobenko_delta, reduced_angle

PI = math.pi


class TestTetrahedron:
    def test_examples(self):
        assert tetrahedron_contains((PI / 2, PI / 2, PI / 2)) is Membership.INTERIOR
        assert tetrahedron_contains((PI / 10, PI / 10, PI / 10)) is Membership.OUTSIDE
        assert tetrahedron_contains((0.9 * PI, 0.9 * PI, 0.1 * PI)) is Membership.OUTSIDE

    def test_vertices_and_faces(self):
        for v in [(PI, 0, 0), (0, PI, 0), (0, 0, PI), (PI, PI, PI)]:
            assert tetrahedron_contains(v) is Membership.BOUNDARY
        # face point: r1 + r2 + r3 = pi exactly
        assert tetrahedron_contains((PI / 2, PI / 4, PI / 4), eps_face=1e-12) is Membership.BOUNDARY

    def test_domain(self):
        with pytest.raises(ValueError):
            tetrahedron_contains((-0.1, 1.0, 1.0))
        with pytest.raises(ValueError):
            tetrahedron_contains((PI + 0.1, 1.0, 1.0))

    def test_barycentric_oracle_grid(self):
        grid = np.linspace(0.0, PI, 21)
        pts = np.array(np.meshgrid(grid, grid, grid)).reshape(3, -1).T
        eps = 1e-12
        a = tetrahedron_membership_batch(pts, eps)
        b = barycentric_membership_batch(pts, eps)
        assert np.array_equal(a, b)

    def test_barycentric_scalar_agrees(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            r = rng.uniform(0, PI, 3)
            assert tetrahedron_contains(r, 1e-12) is barycentric_membership(r, 1e-12)


class TestBobenko:
    def test_examples(self):
        # sum 3/4 > 1/2 and each mixed combination 1/4 < 1/2
        assert bobenko_admissible((0.25, 0.25, 0.25)) is Membership.INTERIOR
        assert bobenko_admissible((0.05, 0.05, 0.05)) is Membership.OUTSIDE
        assert bobenko_admissible((0.45, 0.45, 0.05)) is Membership.OUTSIDE

    def test_domain(self):
        with pytest.raises(ValueError):
            bobenko_admissible((0.6, 0.1, 0.1))
        with pytest.raises(ValueError):
            bobenko_admissible((-0.01, 0.1, 0.1))

    def test_equivalence_with_tetrahedron(self):
        rng = np.random.default_rng(1)
        n = 100_000
        bps = rng.uniform(0.01, 5.0, (n, 3))
        # exclude half-integers: degenerate reduced angles
        keep = np.all(np.abs(bps - np.round(2 * bps) / 2) > 1e-4, axis=1)
        bps = bps[keep]
        deltas = np.abs(bps - np.floor(bps + 0.5))
        r = 2 * PI * deltas
        a = bobenko_membership_batch(deltas)
        b = tetrahedron_membership_batch(r)
        assert np.array_equal(a, b)


class TestClassifyTriple:
    def test_examples(self):
        assert classify_triple(PI / 2, PI / 2, PI / 2).tag is TripleTag.GENERIC_ADMISSIBLE
        assert classify_triple(7 * PI / 3, PI / 2, PI / 2).tag is TripleTag.GENERIC_ADMISSIBLE
        assert classify_triple(2 * PI, PI / 2, PI / 2).tag is TripleTag.DEGENERATE_MULTIPLE_OF_PI
        assert classify_triple(PI / 10, PI / 10, PI / 10).tag is TripleTag.INADMISSIBLE

    def test_degenerate_with_tolerance(self):
        out = classify_triple(3 * PI, 1.0, 1.0, eps_face=1e-12)
        assert out.tag is TripleTag.DEGENERATE_MULTIPLE_OF_PI
        near_pi = 3.14159265358979  # parses below pi
        out = classify_triple(near_pi, 1.0, 1.0, eps_face=1e-12)
        assert out.tag is TripleTag.DEGENERATE_MULTIPLE_OF_PI

    def test_boundary_tag(self):
        out = classify_triple(PI / 2, PI / 4, PI / 4, eps_face=1e-12)
        assert out.tag is TripleTag.PARALLEL_BOUNDARY

    def test_domain(self):
        with pytest.raises(ValueError):
            classify_triple(PI, 1.0, 1.0)
        with pytest.raises(ValueError):
            classify_triple(-1.0, 1.0, 1.0)

    def test_outputs_carry_slacks(self):
        out = classify_triple(PI / 2, PI / 2, PI / 2)
        assert out.reduced == pytest.approx((PI / 2,) * 3)
        assert np.allclose(out.slacks, tetrahedron_slacks(*out.reduced))

    @settings(max_examples=200)
    @given(
        st.floats(min_value=0.05, max_value=12.0),
        st.floats(min_value=0.05, max_value=12.0),
        st.floats(min_value=0.05, max_value=12.0),
    )
    def test_reduction_and_permutation_invariance(self, p1, p2, p3):
        r = [reduced_angle(p) for p in (p1, p2, p3)]
        margin = 1e-6
        assume(all(margin < x < PI - margin for x in r))
        assume(np.min(np.abs(tetrahedron_slacks(*r))) > margin)
        tag = classify_triple(p1, p2, p3).tag
        assert classify_triple(p1 + 2 * PI, p2, p3).tag is tag
        assert classify_triple(p2, p3, p1).tag is tag
        assert classify_triple(p3, p2, p1).tag is tag

    def test_cor1_correspondence_tags(self):
        # delta formulation matches the reduced-angle tag through the chain
        rng = np.random.default_rng(2)
        count = 0
        while count < 300:
            phis = rng.uniform(0.1, 10.0, 3)
            r = [reduced_angle(p) for p in phis]
            if any(x < 1e-3 or x > PI - 1e-3 for x in r):
                continue
            if np.min(np.abs(tetrahedron_slacks(*r))) < 1e-6:
                continue
            count += 1
            deltas = [bobenko_delta(p / (2 * PI)) for p in phis]
            tag = classify_triple(*phis).tag
            member = bobenko_admissible(deltas)
            expected = {
                Membership.INTERIOR: TripleTag.GENERIC_ADMISSIBLE,
                Membership.BOUNDARY: TripleTag.PARALLEL_BOUNDARY,
                Membership.OUTSIDE: TripleTag.INADMISSIBLE,
            }[member]
            assert tag is expected
