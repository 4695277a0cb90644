"""Explicit divisible families: planar sectors, the odd-d four-rotation family,
and the fully analytic circle (d = 2) machinery.

* ``planar_division``: r rotations of the (x_1, x_2) coordinate plane by
  2 pi m / r together with the indicator of an angular sector of width
  2 pi / r; the rotated copies of the indicator partition the sphere off a
  measure-zero boundary set.

* ``odd_d4_tuple``: for odd d, three fixed diagonal rotations summing to -I
  extend ANY first rotation to a divisible 4-tuple; the witness is the
  linear harmonic x -> u . x built on a fixed point u of the free rotation.

* circle analysis: on S^1 the degree-n harmonic space is 2-dimensional and
  the rotation by phi acts on the (cos n., sin n.) basis as the 2x2 rotation
  by n phi.  With r - 1 angles held fixed, the angles phi of the remaining
  rotation that make the summed operator singular form a finite set,
  computable from a quadratic in cos(n phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divisibility import HarmonicFunction, axis_basis
from .errors import InputDomainError, InternalInconsistencyError
from .rotations import Rotation, RotationTuple, fixed_point, planar_rotation

__all__ = [
    "CircleAnalysis",
    "OddD4Family",
    "PlanarDivision",
    "analyze_circle",
    "circle_bad_angles",
    "circle_det",
    "circle_rotation_block",
    "circle_sum_matrix",
    "odd_d4_suffix",
    "odd_d4_tuple",
    "planar_division",
]

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class PlanarDivision:
    """Sector indicator whose rotated copies tile the sphere.

    ``indicator`` is 1 on points whose (x_1, x_2) angle lies in
    [0, 2 pi / r) and 0 elsewhere; ``near_boundary`` marks points within a
    tolerance of the sector endpoints or of the degenerate x_1 = x_2 = 0
    fiber, where almost-everywhere equality makes no claim.
    """

    d: int
    r: int
    rotations: RotationTuple
    sector_width: float

    def _angles(self, pts: np.ndarray) -> np.ndarray:
        return np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * math.pi)

    def indicator(self, x):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        inside = self._angles(pts) < self.sector_width
        vals = inside.astype(float)
        return float(vals[0]) if single else vals

    def near_boundary(self, x, tol: float = BOUNDARY_TOL):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        radial = np.hypot(pts[:, 0], pts[:, 1]) <= tol
        theta = self._angles(pts)
        # circular distance to the nearest sector endpoint {2 pi k / r}
        width = self.sector_width
        dist = np.abs(np.mod(theta + width / 2.0, width) - width / 2.0)
        mask = radial | (dist <= tol)
        return bool(mask[0]) if single else mask


def planar_division(d: int, r: int) -> PlanarDivision:
    """The r-fold division of S^{d-1} by (x_1, x_2)-plane rotations."""
    if d < 2 or r < 2:
        raise InputDomainError(f"planar_division requires d, r >= 2, got d={d}, r={r}")
    rots = RotationTuple(
        tuple(planar_rotation(d, 1, 2, 2.0 * math.pi * m / r) for m in range(r))
    )
    return PlanarDivision(d=d, r=r, rotations=rots, sector_width=2.0 * math.pi / r)


@dataclass(frozen=True)
class OddD4Family:
    """The three fixed diagonal rotations of the odd-d four-tuple family.

    For d = 2m + 1 the diagonals are sign patterns
    ((-1)^(2m-1), -1, 1), ((-1)^(2m-1), 1, -1), ((1)^(2m-1), -1, -1);
    each has determinant 1 and the three matrices sum to -I.
    """

    d: int
    suffix: tuple

    def suffix_sum(self) -> np.ndarray:
        return sum(g.matrix for g in self.suffix)


def odd_d4_suffix(d: int) -> OddD4Family:
    if d < 3 or d % 2 == 0:
        raise InputDomainError(f"the diagonal family needs odd d >= 3, got d={d}")
    m = (d - 1) // 2
    patterns = [
        [-1.0] * (2 * m - 1) + [-1.0, 1.0],
        [-1.0] * (2 * m - 1) + [1.0, -1.0],
        [1.0] * (2 * m - 1) + [-1.0, -1.0],
    ]
    suffix = tuple(Rotation(np.diag(p)) for p in patterns)
    return OddD4Family(d=d, suffix=suffix)


def odd_d4_tuple(d: int, gamma1: Rotation):
    """Extend gamma1 by the diagonal family; returns (tuple, kernel witness).

    The witness g(x) = u . x with u a fixed point of gamma1 satisfies
    gamma1.g = g while the diagonal suffix sends g to -g, so the four
    translates of g sum to zero identically.
    """
    family = odd_d4_suffix(d)
    if gamma1.d != d:
        raise InputDomainError(f"gamma1 has dimension {gamma1.d}, expected {d}")
    u = fixed_point(gamma1)
    witness = HarmonicFunction(axis_basis(d), u)
    return RotationTuple((gamma1,) + family.suffix), witness


def circle_rotation_block(n: int, phi: float) -> np.ndarray:
    """Action of the rotation by phi on degree-n circle harmonics, in the
    (cos n., sin n.) basis: the 2x2 rotation matrix by n phi."""
    c, s = math.cos(n * phi), math.sin(n * phi)
    return np.array([[c, -s], [s, c]])


def circle_sum_matrix(n: int, fixed_angles) -> np.ndarray:
    """Summed action of the fixed rotations on degree-n circle harmonics."""
    if n < 1:
        raise InputDomainError(f"degree must be >= 1, got n={n}")
    angles = np.atleast_1d(np.asarray(fixed_angles, dtype=float))
    if angles.size < 1:
        raise InputDomainError("at least one fixed angle is required")
    out = np.zeros((2, 2))
    for phi in angles:
        out += circle_rotation_block(n, float(phi))
    return out


def circle_det(x: float, branch_sign: int, kmat: np.ndarray) -> float:
    """det of (rotation block + fixed sum) as a function of x = cos(n phi).

    Equals +-sqrt(1-x^2) (K_21 - K_12) + x (K_11 + K_22) + det K + 1, with
    the sign chosen by the sin(n phi) branch.
    """
    if abs(x) > 1.0 + 1e-12:
        raise InputDomainError(f"x = {x} outside [-1, 1]")
    xx = min(1.0, max(-1.0, float(x)))
    sign = 1.0 if branch_sign >= 0 else -1.0
    kmat = np.asarray(kmat, dtype=float)
    return float(
        sign * math.sqrt(1.0 - xx * xx) * (kmat[1, 0] - kmat[0, 1])
        + xx * (kmat[0, 0] + kmat[1, 1])
        + np.linalg.det(kmat)
        + 1.0
    )


def circle_bad_angles(n: int, fixed_angles, *, dedupe_tol: float = 1e-9) -> np.ndarray:
    """All phi in [0, 2 pi) making the full circle tuple singular at degree n.

    Substituting x = cos(n phi), y = sin(n phi) into det = 0 and squaring
    leaves a quadratic in x; its roots are mapped back to angles after
    discarding sign-spurious solutions by direct evaluation of the unsquared
    expression (tolerance 1e-10).  The identically-zero quadratic would
    contradict the structure of the fixed-rotation sum and raises
    InternalInconsistencyError.
    """
    kmat = circle_sum_matrix(n, fixed_angles)
    trace = kmat[0, 0] + kmat[1, 1]
    skew = kmat[1, 0] - kmat[0, 1]
    shift = float(np.linalg.det(kmat)) + 1.0
    # w y + t x + shift = 0 with x^2 + y^2 = 1 squares to
    # (t^2 + w^2) x^2 + 2 t shift x + shift^2 - w^2 = 0
    a2 = trace * trace + skew * skew
    a1 = 2.0 * trace * shift
    a0 = shift * shift - skew * skew
    if max(abs(a2), abs(a1), abs(a0)) <= 1e-12:
        raise InternalInconsistencyError(
            "the squared determinant equation vanished identically; this case is "
            "impossible for sums of rotation blocks"
        )
    roots = []
    if a2 <= 1e-15:
        if abs(a1) > 1e-15:
            roots.append(-a0 / a1)
    else:
        disc = a1 * a1 - 4.0 * a2 * a0
        scale = max(a1 * a1, abs(4.0 * a2 * a0), 1e-300)
        if abs(disc) <= 1e-12 * scale:
            # singular configurations are tangency points of a line and the
            # unit circle, so the quadratic has a double root; the vertex is
            # accurate where the sqrt of the tiny discriminant would lose
            # half the digits
            roots.append(-a1 / (2.0 * a2))
        elif disc > 0.0:
            sq = math.sqrt(disc)
            roots.extend([(-a1 + sq) / (2.0 * a2), (-a1 - sq) / (2.0 * a2)])
    angles = []
    for x in roots:
        if abs(x) > 1.0 + 1e-9:
            continue
        x = min(1.0, max(-1.0, x))
        for sign in (1, -1):
            y = sign * math.sqrt(max(0.0, 1.0 - x * x))
            if abs(skew * y + trace * x + shift) > 1e-10:
                continue
            base = math.atan2(y, x) % (2.0 * math.pi)
            for k in range(n):
                angles.append((base + 2.0 * math.pi * k) / n)
    angles.sort()
    result = []
    for phi in angles:
        if phi >= 2.0 * math.pi - dedupe_tol:
            phi -= 2.0 * math.pi
        if not result or all(abs(phi - prev) > dedupe_tol for prev in result):
            result.append(phi)
    result.sort()
    return np.asarray(result)


@dataclass(frozen=True)
class CircleAnalysis:
    """Degree-n singular-angle analysis for a circle tuple with fixed suffix."""

    n: int
    fixed_angles: np.ndarray
    sum_matrix: np.ndarray
    bad_angles: np.ndarray

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "fixed_angles": [float(a) for a in self.fixed_angles],
            "sum_matrix": [list(map(float, row)) for row in self.sum_matrix],
            "bad_angles": [float(a) for a in self.bad_angles],
        }


def analyze_circle(n: int, fixed_angles) -> CircleAnalysis:
    angles = np.atleast_1d(np.asarray(fixed_angles, dtype=float))
    return CircleAnalysis(
        n=n,
        fixed_angles=angles,
        sum_matrix=circle_sum_matrix(n, angles),
        bad_angles=circle_bad_angles(n, angles),
    )
