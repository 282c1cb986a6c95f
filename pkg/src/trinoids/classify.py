"""Admissibility classification of end-angle triples.

A triple of end angles (phi1, phi2, phi3) is reduced componentwise to
(r1, r2, r3) in [0, pi]^3 and tested against the open tetrahedron with
vertices (pi,0,0), (0,pi,0), (0,0,pi), (pi,pi,pi).  Strict interior points
are the generically admissible triples; boundary points correspond to
parallel line constellations; any angle that is an integer multiple of pi
is degenerate.  The same region can be cut out by four inequalities on the
fractional parts Delta_i = r_i/(2*pi), which is also provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .params import reduced_angle

PI = math.pi

#: Tetrahedron vertices, one per row.
TETRAHEDRON_VERTICES = np.array(
    [
        [PI, 0.0, 0.0],
        [0.0, PI, 0.0],
        [0.0, 0.0, PI],
        [PI, PI, PI],
    ]
)


class Membership(Enum):
    INTERIOR = 1
    BOUNDARY = 0
    OUTSIDE = -1


class TripleTag(Enum):
    GENERIC_ADMISSIBLE = "GenericAdmissible"
    PARALLEL_BOUNDARY = "ParallelBoundary"
    INADMISSIBLE = "Inadmissible"
    DEGENERATE_MULTIPLE_OF_PI = "DegenerateMultipleOfPi"


@dataclass(frozen=True)
class TripleClass:
    """Classification outcome: tag, reduced triple, and the four slacks."""

    tag: TripleTag
    reduced: tuple
    slacks: tuple


def tetrahedron_slacks(r1: float, r2: float, r3: float) -> np.ndarray:
    """Four half-space slacks; the reduced triple is interior iff all > 0.

    Order: [r1+r2+r3-pi, pi-(r1+r2-r3), pi-(r1-r2+r3), pi-(-r1+r2+r3)].
    """
    return np.array(
        [
            r1 + r2 + r3 - PI,
            PI - (r1 + r2 - r3),
            PI - (r1 - r2 + r3),
            PI - (-r1 + r2 + r3),
        ]
    )


def _membership_from_slacks(slacks: np.ndarray, eps: float) -> Membership:
    if np.any(slacks < -eps):
        return Membership.OUTSIDE
    if np.any(slacks <= eps):
        return Membership.BOUNDARY
    return Membership.INTERIOR


def tetrahedron_contains(r_triple, eps_face: float = 0.0) -> Membership:
    """Half-space membership test for a reduced triple in [0, pi]^3.

    ``eps_face`` widens the boundary: |slack| <= eps_face counts as
    BOUNDARY; a slack below -eps_face is OUTSIDE.
    """
    r = np.asarray(r_triple, dtype=float)
    if r.shape != (3,):
        raise ValueError("expected three reduced angles")
    if np.any(r < 0.0) or np.any(r > PI):
        raise ValueError(f"reduced angles must lie in [0, pi], got {r}")
    return _membership_from_slacks(tetrahedron_slacks(*r), eps_face)


def barycentric_coordinates(r_triples: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of points w.r.t. TETRAHEDRON_VERTICES.

    Accepts shape (3,) or (N, 3); returns shape (4,) or (N, 4).  Solved
    through the 4x4 vertex system, independently of tetrahedron_slacks.
    """
    pts = np.atleast_2d(np.asarray(r_triples, dtype=float))
    system = np.vstack([TETRAHEDRON_VERTICES.T, np.ones(4)])
    rhs = np.hstack([pts, np.ones((pts.shape[0], 1))])
    bary = np.linalg.solve(system, rhs.T).T
    return bary[0] if np.asarray(r_triples).ndim == 1 else bary


def barycentric_membership(r_triple, eps_face: float = 0.0) -> Membership:
    """Membership via barycentric coordinates (oracle for tetrahedron_contains).

    The coordinates are rescaled by 2*pi so that eps_face has the same
    meaning as in the half-space test.
    """
    r = np.asarray(r_triple, dtype=float)
    if np.any(r < 0.0) or np.any(r > PI):
        raise ValueError(f"reduced angles must lie in [0, pi], got {r}")
    bary = barycentric_coordinates(r) * (2.0 * PI)
    return _membership_from_slacks(bary, eps_face)


def bobenko_admissible(deltas, eps: float = 0.0) -> Membership:
    """Membership by the four fractional-part inequalities.

    Interior iff d1+d2+d3 > 1/2 and each of d1+d2-d3, d1-d2+d3, -d1+d2+d3
    is < 1/2, all strictly.  Agrees with tetrahedron_contains under
    d_i = r_i/(2*pi) when called with eps = eps_face/(2*pi).
    """
    d = np.asarray(deltas, dtype=float)
    if d.shape != (3,):
        raise ValueError("expected three fractional parts")
    if np.any(d < 0.0) or np.any(d > 0.5):
        raise ValueError(f"fractional parts must lie in [0, 1/2], got {d}")
    slacks = np.array(
        [
            d[0] + d[1] + d[2] - 0.5,
            0.5 - (d[0] + d[1] - d[2]),
            0.5 - (d[0] - d[1] + d[2]),
            0.5 - (-d[0] + d[1] + d[2]),
        ]
    )
    return _membership_from_slacks(slacks, eps)


def classify_triple(phi1: float, phi2: float, phi3: float, eps_face: float = 0.0) -> TripleClass:
    """Classify an angle triple with all components in J = (0, inf) \\ {pi}.

    Angles within eps_face of a multiple of pi short-circuit to
    DEGENERATE_MULTIPLE_OF_PI before any tetrahedron test.
    """
    phis = (phi1, phi2, phi3)
    for phi in phis:
        if not (phi > 0.0) or phi == PI:
            raise ValueError(f"angles must lie in (0, inf) \\ {{pi}}, got {phi}")
    reduced = tuple(reduced_angle(phi) for phi in phis)
    slacks = tuple(tetrahedron_slacks(*reduced))
    if any(r <= eps_face or r >= PI - eps_face for r in reduced):
        return TripleClass(TripleTag.DEGENERATE_MULTIPLE_OF_PI, reduced, slacks)
    membership = tetrahedron_contains(reduced, eps_face=eps_face)
    tag = {
        Membership.INTERIOR: TripleTag.GENERIC_ADMISSIBLE,
        Membership.BOUNDARY: TripleTag.PARALLEL_BOUNDARY,
        Membership.OUTSIDE: TripleTag.INADMISSIBLE,
    }[membership]
    return TripleClass(tag, reduced, slacks)


def tetrahedron_membership_batch(r_triples: np.ndarray, eps_face: float = 0.0) -> np.ndarray:
    """Vectorized half-space test; returns int8 array of Membership values."""
    r = np.asarray(r_triples, dtype=float)
    slacks = np.stack(
        [
            r[:, 0] + r[:, 1] + r[:, 2] - PI,
            PI - (r[:, 0] + r[:, 1] - r[:, 2]),
            PI - (r[:, 0] - r[:, 1] + r[:, 2]),
            PI - (-r[:, 0] + r[:, 1] + r[:, 2]),
        ],
        axis=1,
    )
    return _membership_batch(slacks, eps_face)


def barycentric_membership_batch(r_triples: np.ndarray, eps_face: float = 0.0) -> np.ndarray:
    """Vectorized barycentric test; returns int8 array of Membership values."""
    bary = barycentric_coordinates(np.asarray(r_triples, dtype=float)) * (2.0 * PI)
    return _membership_batch(bary, eps_face)


def bobenko_membership_batch(delta_triples: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """Vectorized fractional-part test; returns int8 array of Membership values."""
    d = np.asarray(delta_triples, dtype=float)
    slacks = np.stack(
        [
            d[:, 0] + d[:, 1] + d[:, 2] - 0.5,
            0.5 - (d[:, 0] + d[:, 1] - d[:, 2]),
            0.5 - (d[:, 0] - d[:, 1] + d[:, 2]),
            0.5 - (-d[:, 0] + d[:, 1] + d[:, 2]),
        ],
        axis=1,
    )
    return _membership_batch(slacks, eps)


def _membership_batch(slacks: np.ndarray, eps: float) -> np.ndarray:
    out = np.full(slacks.shape[0], Membership.INTERIOR.value, dtype=np.int8)
    boundary = np.any(slacks <= eps, axis=1)
    outside = np.any(slacks < -eps, axis=1)
    out[boundary] = Membership.BOUNDARY.value
    out[outside] = Membership.OUTSIDE.value
    return out
