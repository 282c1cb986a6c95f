"""Desk-scale verification that conjugated catenoidal end data is helicoidal.

Pipeline for symmetric (real-coefficient) power-end data with exponent
alpha and end parameter lambda = (1 - alpha^2)/(4 alpha^2):

1. sample_conjugate_end -- integrate the conjugated data over concentric
   arcs and along both boundary rays of the upper half-disk;
2. check_slab          -- the third coordinate minus its logarithmic
   principal term must stay inside a band set by the correction bound;
3. fit_rays            -- least-squares lines through the boundary samples;
   for symmetric data both are horizontal, the oriented angle between them
   is r(pi*alpha) and their vertical gap is (1-alpha^2)*pi/(2*alpha);
4. fit_helicoid        -- closed-form rigid placement of the standard
   helicoid (vertical drop 2*lambda per radian) carrying both rays as
   rulings, with an optional least-squares polish;
5. decay_profile       -- sup distance of each sampled arc to the placed
   helicoid; the end is accepted as asymptotic when the profile decays
   over dyadic radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import least_squares

from .constellation import HelicoidFrame
from .lines import OrientedLine, angle_between, common_perpendicular_feet, ruling_residual, unit
from .params import PitchConvention, ray_distance_h, reduced_angle
from .weierstrass import (
    IntegrationPath,
    PowerEndData,
    Route,
    branch_arg,
    conjugate_data,
    correction_bound,
    gauss_normal,
    integrate,
    is_symmetric,
    principal_log_coefficient,
)

DEFAULT_RADII = tuple(0.5**k for k in range(1, 9))


@dataclass(frozen=True)
class EndSample:
    """Sampled conjugate end: arcs at decreasing radii plus boundary rays."""

    data: PowerEndData            # conjugated data actually integrated
    alpha: float
    lam: float
    radii: Tuple[float, ...]
    arc_angles: np.ndarray        # angles used on every arc
    arc_points: Tuple[np.ndarray, ...]   # one (m, 3) array per radius
    boundary_pos_s: np.ndarray    # parameters s of samples at z = +s
    boundary_pos: np.ndarray      # (k, 3)
    boundary_neg_s: np.ndarray    # parameters s of samples at z = -s
    boundary_neg: np.ndarray      # (k, 3)
    tol: float


def sample_conjugate_end(
    data: PowerEndData,
    radii: Tuple[float, ...] = DEFAULT_RADII,
    samples_per_arc: int = 33,
    boundary_samples: int = 16,
    tol: float = 1e-10,
) -> EndSample:
    """Integrate the conjugated data from the base point 1 over the half-disk.

    ``data`` must be symmetric (real coefficients, unrotated omega); the
    conjugation is applied here.  Radii must decrease in (0, 1].
    """
    if not isinstance(data, PowerEndData):
        raise TypeError("end sampling needs PowerEndData")
    if not is_symmetric(data):
        raise ValueError("end sampling is defined for the symmetric (real) subclass")
    radii = tuple(float(r) for r in radii)
    if not all(0 < r <= 1 for r in radii) or not all(
        a > b for a, b in zip(radii, radii[1:])
    ):
        raise ValueError("radii must be strictly decreasing in (0, 1]")
    if samples_per_arc < 3 or boundary_samples < 2:
        raise ValueError("need at least 3 arc samples and 2 boundary samples")

    conj = conjugate_data(data)
    thetas = np.linspace(0.0, math.pi, samples_per_arc)

    def immerse(z: complex) -> np.ndarray:
        return integrate(conj, IntegrationPath(1.0, z, Route.RADIAL_THEN_ARC), tol)

    arcs = []
    for rho in radii:
        arcs.append(np.array([immerse(rho * np.exp(1j * th)) for th in thetas]))
    s_vals = np.geomspace(1.0, radii[-1], boundary_samples)
    pos = np.array([immerse(s) for s in s_vals])
    neg = np.array([immerse(complex(-s, 0.0)) for s in s_vals])
    return EndSample(
        data=conj,
        alpha=data.alpha,
        lam=data.lam,
        radii=radii,
        arc_angles=thetas,
        arc_points=tuple(arcs),
        boundary_pos_s=s_vals,
        boundary_pos=pos,
        boundary_neg_s=s_vals,
        boundary_neg=neg,
        tol=tol,
    )


@dataclass(frozen=True)
class SlabReport:
    """Vertical extent of the end after removing the principal log term."""

    sup: float
    inf: float
    width: float
    correction_bound: float  # bound on |2 C(z)|, the full correction term
    boundary_z_spread: float
    passed: bool


def _principal_third(sample: EndSample, z: complex) -> float:
    """Principal part of the third coordinate at z, base point 1."""
    coef = principal_log_coefficient(sample.data)
    return (coef * (math.log(abs(z)) + 1j * branch_arg(z))).real


def check_slab(sample: EndSample) -> SlabReport:
    """Slab containment: third coordinate minus principal term is bounded.

    PASS iff the residual width over all samples is at most twice the
    correction bound plus quadrature slack; the bound is on |2 C(z)|, which
    is exactly the removed correction.  Also reports how far the boundary
    rays are from being horizontal (their third-coordinate spread).
    """
    residuals = []
    for rho, arc in zip(sample.radii, sample.arc_points):
        for th, pt in zip(sample.arc_angles, arc):
            z = rho * np.exp(1j * th)
            residuals.append(pt[2] - _principal_third(sample, z))
    for s, pt in zip(sample.boundary_pos_s, sample.boundary_pos):
        residuals.append(pt[2] - _principal_third(sample, complex(s)))
    for s, pt in zip(sample.boundary_neg_s, sample.boundary_neg):
        residuals.append(pt[2] - _principal_third(sample, complex(-s, 0.0)))
    residuals = np.array(residuals)
    bound_2c = 2.0 * correction_bound(sample.data)
    width = float(residuals.max() - residuals.min())
    spread = max(
        float(np.ptp(sample.boundary_pos[:, 2])), float(np.ptp(sample.boundary_neg[:, 2]))
    )
    slack = 100.0 * sample.tol
    return SlabReport(
        sup=float(residuals.max()),
        inf=float(residuals.min()),
        width=width,
        correction_bound=bound_2c,
        boundary_z_spread=spread,
        passed=width <= 2.0 * bound_2c + slack,
    )


@dataclass(frozen=True)
class RayFit:
    """Least-squares lines through the two boundary sample sets."""

    ray_pos: OrientedLine
    ray_neg: OrientedLine
    deviation_pos: float
    deviation_neg: float
    vertical_gap: float
    angle: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviation_pos, self.deviation_neg)

    @property
    def horizontality(self) -> float:
        return max(abs(self.ray_pos.direction[2]), abs(self.ray_neg.direction[2]))


def _fit_line(points: np.ndarray) -> Tuple[OrientedLine, float]:
    centroid = points.mean(axis=0)
    centered = points - centroid
    spread = np.linalg.norm(centered, axis=1).max()
    if spread < 1e-12:
        raise ValueError("boundary samples nearly coincident; degenerate line fit")
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction = vt[0]
    # orient toward the end: samples are ordered from the base point inward
    t = centered @ direction
    if t[-1] < t[0]:
        direction = -direction
        t = -t
    deviation = float(np.linalg.norm(centered - np.outer(t, direction), axis=1).max())
    return OrientedLine(centroid, direction), deviation


def fit_rays(sample: EndSample) -> RayFit:
    """Fit both boundary rays, oriented toward the puncture.

    Requires at least 8 samples per side.  The vertical gap is the
    difference of mean third coordinates (the rays are horizontal for
    symmetric data); the angle is between the two oriented directions.
    """
    if len(sample.boundary_pos) < 8 or len(sample.boundary_neg) < 8:
        raise ValueError("need at least 8 boundary samples per side")
    ray_pos, dev_pos = _fit_line(sample.boundary_pos)
    ray_neg, dev_neg = _fit_line(sample.boundary_neg)
    gap = float(abs(sample.boundary_neg[:, 2].mean() - sample.boundary_pos[:, 2].mean()))
    return RayFit(
        ray_pos=ray_pos,
        ray_neg=ray_neg,
        deviation_pos=dev_pos,
        deviation_neg=dev_neg,
        vertical_gap=gap,
        angle=angle_between(ray_pos.direction, ray_neg.direction),
    )


@dataclass(frozen=True)
class HelicoidFit:
    """Rigid placement of the standard helicoid carrying both rays."""

    frame: Optional[HelicoidFrame]
    residual: float
    passed: bool
    message: str = ""


def fit_helicoid(rays: RayFit, lam: float, residual_tol: float = 1e-3) -> HelicoidFit:
    """Place the helicoid with parameter lam so both rays are rulings.

    Uses the standard vertical drop 2*lambda per radian.  The closed form
    reads the screw rotation angle off the measured foot offset and checks
    it against the measured direction angle modulo 2*pi; an inconsistent
    pair (wrong lambda) yields a failure report.  A short least-squares
    polish runs when the closed-form residual is above round-off.

    Parallel rays (angle a multiple of pi) carry no twist information; only
    the lower distance bound 2*|lambda|*pi for distinct parallel rulings is
    checked in that case, and no frame is produced.
    """
    u1 = rays.ray_pos.direction
    u2 = rays.ray_neg.direction
    pitch = 2.0 * lam
    cross = np.cross(u1, u2)
    if np.linalg.norm(cross) < 1e-8:
        min_gap = abs(pitch) * math.pi
        gap = rays.vertical_gap
        ok = gap >= min_gap * (1.0 - 1e-6) - 1e-9
        return HelicoidFit(
            frame=None,
            residual=max(0.0, min_gap - gap),
            passed=ok,
            message=(
                "parallel rays: distance lower-bound check only "
                f"(gap {gap:.6g} vs minimal ruling gap {min_gap:.6g})"
            ),
        )

    q1, q2 = common_perpendicular_feet(rays.ray_pos, rays.ray_neg)
    n_hat = unit(cross)
    d = float((q2 - q1) @ n_hat)
    angle = angle_between(u1, u2)
    # consistency: the twist implied by the gap must match the measured angle
    delta_y = -d / pitch
    mismatch = min(
        abs(_wrap_to_pi(delta_y - angle)), abs(_wrap_to_pi(delta_y + angle))
    )
    sigma = math.copysign(1.0, lam)
    # the axis direction is +/- the common perpendicular; the screw sense
    # picks one of them, so try both and keep the consistent placement
    frame, residual = None, math.inf
    for e_axis in (n_hat, -n_hat):
        col1 = sigma * u1
        R = np.column_stack([np.cross(col1, e_axis), col1, e_axis])
        cand = HelicoidFrame(lam, R, q1)
        res = max(
            ruling_residual(R, q1, pitch, rays.ray_pos),
            ruling_residual(R, q1, pitch, rays.ray_neg),
        )
        if res < residual:
            frame, residual = cand, res
    if residual > 1e-10:
        frame, residual = _polish_frame(frame, pitch, (rays.ray_pos, rays.ray_neg), residual)
    ok = residual < residual_tol
    msg = "" if ok else (
        f"no consistent placement: residual {residual:.3e}, "
        f"twist/angle mismatch {mismatch:.3e} (pitch may not match the rays)"
    )
    return HelicoidFit(frame=frame, residual=residual, passed=ok, message=msg)


def _wrap_to_pi(x: float) -> float:
    return (x + math.pi) % (2.0 * math.pi) - math.pi


def _polish_frame(frame: HelicoidFrame, pitch: float, rays, initial: float):
    """Least-squares refinement of the frame over rotation vector + shift.

    Residuals are point-to-surface distances of a few samples on each ray,
    so the count exceeds the six pose parameters.
    """
    from .lines import rotation_about

    ts = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])

    def apply(params: np.ndarray) -> HelicoidFrame:
        rotvec, shift = params[:3], params[3:]
        angle = float(np.linalg.norm(rotvec))
        R = frame.rotation if angle < 1e-300 else rotation_about(rotvec, angle) @ frame.rotation
        return HelicoidFrame(frame.lam, R, frame.translation + shift)

    def residuals(params: np.ndarray) -> np.ndarray:
        f = apply(params)
        out = []
        for ray in rays:
            d, _ = helicoid_distances(f, pitch, ray.at(ts))
            out.extend(d)
        return np.array(out)

    result = least_squares(residuals, np.zeros(6), method="lm", max_nfev=60)
    polished = apply(result.x)
    final = max(
        ruling_residual(polished.rotation, polished.translation, pitch, ray) for ray in rays
    )
    if final < initial:
        return polished, float(final)
    return frame, initial


def helicoid_distances(frame: HelicoidFrame, pitch: float, points: np.ndarray):
    """Distance of each point to the placed helicoid surface.

    Per point, the squared distance to the ruling at model height y is
    minimized over y by Newton iterations seeded from the point's own
    height (y0 = -Z/pitch) after a coarse scan of one screw period.
    Returns (distances, converged flags).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    local = (pts - frame.translation) @ frame.rotation
    dists = np.empty(len(local))
    flags = np.ones(len(local), dtype=bool)
    for i, (X, Y, Z) in enumerate(local):
        seed = -Z / pitch

        def dist2(y):
            # squared distance to the ruling at height -pitch*y; the
            # perpendicular in-plane component is X cos y + Y sin y
            # (cancellation-free form of X^2 + Y^2 - (X sin y - Y cos y)^2)
            up = X * math.cos(y) + Y * math.sin(y)
            return up * up + (Z + pitch * y) ** 2

        ys = seed + np.linspace(-math.pi, math.pi, 49)
        y = float(ys[int(np.argmin([dist2(v) for v in ys]))])
        ok = False
        for _ in range(40):
            u = X * math.sin(y) - Y * math.cos(y)
            du = X * math.cos(y) + Y * math.sin(y)
            grad = -2.0 * u * du + 2.0 * pitch * (Z + pitch * y)
            hess = -2.0 * (du * du - u * u) + 2.0 * pitch * pitch
            if abs(grad) < 1e-14 * max(1.0, abs(hess)):
                ok = True
                break
            step = grad / hess if hess > 1e-300 else math.copysign(0.1, grad)
            step = max(min(step, 0.5), -0.5)
            y -= step
        d2 = dist2(y)
        dists[i] = math.sqrt(max(d2, 0.0))
        flags[i] = ok
    return dists, flags


@dataclass(frozen=True)
class DecayProfile:
    """Sup distance to the fitted helicoid per sampled radius."""

    radii: Tuple[float, ...]
    sup_distance: Tuple[float, ...]
    nonconverged: int
    passed: bool

    @property
    def reduction(self) -> float:
        return self.sup_distance[0] / max(self.sup_distance[-1], 1e-300)


def decay_profile(sample: EndSample, fit: HelicoidFit,
                  containment_floor: float = 1e-8) -> DecayProfile:
    """Sup distance of each arc to the fitted helicoid, inner radii last.

    PASS iff the profile strictly decreases with radius and ends below
    5 percent of its initial value, or the whole profile already sits below
    ``containment_floor`` (exact containment up to quadrature noise, where
    relative decay is meaningless).
    """
    if fit.frame is None:
        raise ValueError("decay profile needs a successful helicoid fit")
    pitch = 2.0 * fit.frame.lam
    sups = []
    bad = 0
    for arc in sample.arc_points:
        d, flags = helicoid_distances(fit.frame, pitch, arc)
        bad += int(np.sum(~flags))
        good = d[flags] if np.any(flags) else d
        sups.append(float(good.max()))
    sups_t = tuple(sups)
    below_floor = max(sups_t) < containment_floor
    decreasing = all(b < a for a, b in zip(sups_t, sups_t[1:]))
    reduced_enough = sups_t[-1] < 0.05 * sups_t[0]
    return DecayProfile(
        radii=sample.radii,
        sup_distance=sups_t,
        nonconverged=bad,
        passed=below_floor or (decreasing and reduced_enough),
    )


@dataclass(frozen=True)
class GapReport:
    """Measured boundary-ray gap against the closed-form prediction.

    ``matches`` records which of the two ray-distance conventions the
    measured gap reproduces (measured, not assumed).
    """

    measured: float
    expected: float
    h_half_gap: float
    h_ruling_gap: float
    matches: str
    angle_measured: float
    angle_expected: float
    passed: bool


def gap_report(sample: EndSample, rays: RayFit, tol: float = 1e-6) -> GapReport:
    """Compare the measured vertical gap with (1-alpha^2)*pi/(2*alpha)."""
    alpha = sample.alpha
    phi = math.pi * alpha
    expected = abs(1.0 - alpha**2) * math.pi / (2.0 * alpha)
    h_half = ray_distance_h(phi, PitchConvention.HALF_GAP)
    h_ruling = ray_distance_h(phi, PitchConvention.RULING_GAP)
    measured = rays.vertical_gap
    matches = "ruling-gap" if abs(measured - h_ruling) <= abs(measured - h_half) else "half-gap"
    angle_expected = reduced_angle(phi)
    return GapReport(
        measured=measured,
        expected=expected,
        h_half_gap=h_half,
        h_ruling_gap=h_ruling,
        matches=matches,
        angle_measured=rays.angle,
        angle_expected=angle_expected,
        passed=abs(measured - expected) <= tol,
    )


@dataclass(frozen=True)
class NormalLimitReport:
    """Trend of the unit normal toward vertical as the puncture is approached."""

    deviation_outer: float
    deviation_inner: float
    passed: bool


def normal_limit_report(sample: EndSample) -> NormalLimitReport:
    """Deviation |N - (0,0,-1)| on the outermost and innermost arcs."""
    down = np.array([0.0, 0.0, -1.0])

    def max_dev(rho: float) -> float:
        devs = [
            np.linalg.norm(gauss_normal(sample.data, rho * np.exp(1j * th)) - down)
            for th in sample.arc_angles
        ]
        return float(max(devs))

    outer = max_dev(sample.radii[0])
    inner = max_dev(sample.radii[-1])
    return NormalLimitReport(outer, inner, passed=inner < outer and inner < 0.5)


@dataclass(frozen=True)
class EndVerification:
    """Full pipeline report for one end data set."""

    alpha: float
    lam: float
    slab: SlabReport
    rays: RayFit
    rays_horizontal: bool
    gap: GapReport
    normal_limit: NormalLimitReport
    fit: HelicoidFit
    decay: Optional[DecayProfile]

    @property
    def passed(self) -> bool:
        return (
            self.slab.passed
            and self.rays_horizontal
            and self.normal_limit.passed
            and self.fit.passed
            and self.decay is not None
            and self.decay.passed
        )

    def failed_hypotheses(self) -> List[str]:
        out = []
        if not self.slab.passed:
            out.append("slab-containment")
        if not self.rays_horizontal:
            out.append("horizontal-rays")
        if not self.normal_limit.passed:
            out.append("vertical-normal-limit")
        if not self.fit.passed:
            out.append("helicoid-fit")
        if self.decay is None or not self.decay.passed:
            out.append("decay")
        return out


def verify_end(
    data: PowerEndData,
    radii: Tuple[float, ...] = DEFAULT_RADII,
    samples_per_arc: int = 33,
    boundary_samples: int = 16,
    tol: float = 1e-10,
    horizontal_tol: float = 1e-6,
    fit_tol: float = 1e-3,
    fit_lam: Optional[float] = None,
) -> EndVerification:
    """Run the whole pipeline on symmetric power-end data.

    ``fit_lam`` overrides the end parameter used for the helicoid fit;
    a mismatched value makes the fit (and the run) fail, which is the
    intended way to probe the pitch hypothesis.
    """
    sample = sample_conjugate_end(data, radii, samples_per_arc, boundary_samples, tol)
    slab = check_slab(sample)
    rays = fit_rays(sample)
    gap = gap_report(sample, rays)
    normal = normal_limit_report(sample)
    fit = fit_helicoid(rays, sample.lam if fit_lam is None else fit_lam,
                       residual_tol=fit_tol)
    decay = None
    if fit.frame is not None:
        decay = decay_profile(sample, fit)
    return EndVerification(
        alpha=sample.alpha,
        lam=sample.lam,
        slab=slab,
        rays=rays,
        rays_horizontal=rays.horizontality <= horizontal_tol,
        gap=gap,
        normal_limit=normal,
        fit=fit,
        decay=decay,
    )


def verification_to_json(v: EndVerification) -> dict:
    """JSON-serializable report of an end verification."""
    doc = {
        "alpha": v.alpha,
        "lambda": v.lam,
        "hypotheses": {
            "slab": {
                "sup": v.slab.sup,
                "inf": v.slab.inf,
                "width": v.slab.width,
                "correction_bound": v.slab.correction_bound,
                "boundary_z_spread": v.slab.boundary_z_spread,
                "pass": v.slab.passed,
            },
            "horizontal_rays": {
                "direction_z_max": v.rays.horizontality,
                "deviation_max": v.rays.max_deviation,
                "pass": v.rays_horizontal,
            },
            "vertical_normal_limit": {
                "deviation_outer": v.normal_limit.deviation_outer,
                "deviation_inner": v.normal_limit.deviation_inner,
                "pass": v.normal_limit.passed,
            },
            "ray_gap": {
                "measured": v.gap.measured,
                "expected": v.gap.expected,
                "h_half_gap": v.gap.h_half_gap,
                "h_ruling_gap": v.gap.h_ruling_gap,
                "matches_convention": v.gap.matches,
                "angle_measured": v.gap.angle_measured,
                "angle_expected": v.gap.angle_expected,
                "pass": v.gap.passed,
            },
        },
        "helicoid_fit": {
            "residual": v.fit.residual,
            "pass": v.fit.passed,
            "message": v.fit.message,
        },
        "decay": None,
        "pass": v.passed,
        "failed": v.failed_hypotheses(),
    }
    if v.decay is not None:
        doc["decay"] = {
            "radii": list(v.decay.radii),
            "sup_distance": list(v.decay.sup_distance),
            "nonconverged_points": v.decay.nonconverged,
            "pass": v.decay.passed,
        }
    return doc
