"""Elements and tuples of the d-dimensional rotation group.

Rotations are plain dense matrices validated (and, for mildly inaccurate
input, repaired) on construction.  The group acts on sphere points by matrix
product and on sphere functions by composition with the inverse:

    (act_function(g, f))(v) = f(g^T v).

Haar sampling uses sign-fixed QR of a Gaussian matrix, restricted to the
special orthogonal component by negating the last column when needed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputDomainError, NoFixedPointError
from .harmonics import unit_vector
from .sampling import as_rng

__all__ = [
    "Rotation",
    "RotationTuple",
    "act_function",
    "act_point",
    "fixed_point",
    "haar_sample",
    "identity_rotation",
    "planar_rotation",
]

ORTHO_TOL = 1e-9
REPAIR_TOL = 1e-4
DET_TOL = 1e-9


@dataclass(frozen=True)
class Rotation:
    """A validated element of SO(d), stored as a read-only d x d matrix.

    Matrices violating orthogonality by more than 1e-9 but less than 1e-4
    are replaced by their nearest orthogonal matrix (polar factor) and
    flagged ``repaired``; anything worse is rejected.  A determinant of -1
    is always rejected: reflections are not repairable into SO(d).
    """

    matrix: np.ndarray
    repaired: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputDomainError(f"rotation matrix must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise InputDomainError(f"rotation dimension must be >= 2, got {m.shape[0]}")
        err = float(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))))
        repaired = False
        if err > REPAIR_TOL:
            raise InputDomainError(
                f"matrix violates the orthogonality invariant: max |g^T g - I| = {err:.3e}"
            )
        if err > ORTHO_TOL:
            u, _, vt = np.linalg.svd(m)
            m = u @ vt
            repaired = True
            warnings.warn(
                f"rotation input off orthogonal by {err:.3e}; repaired by polar projection",
                stacklevel=2,
            )
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > DET_TOL:
            raise InputDomainError(
                f"matrix violates the determinant-one invariant: det = {det:.12g}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "repaired", repaired)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def compose(self, other: "Rotation") -> "Rotation":
        if other.d != self.d:
            raise InputDomainError(f"dimension mismatch: {self.d} vs {other.d}")
        return Rotation(self.matrix @ other.matrix)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return self.compose(other)

    def to_json_obj(self) -> dict:
        return {"d": self.d, "rows": [list(map(float, row)) for row in self.matrix]}

    @classmethod
    def from_json_obj(cls, obj) -> "Rotation":
        if not isinstance(obj, dict) or "d" not in obj or "rows" not in obj:
            raise InputDomainError('rotation JSON must be an object with keys "d" and "rows"')
        d = obj["d"]
        rows = obj["rows"]
        if not isinstance(d, int) or not isinstance(rows, list) or len(rows) != d:
            raise InputDomainError(f'rotation JSON "rows" must be a list of {d} rows')
        try:
            m = np.array(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputDomainError(f"rotation JSON rows are not numeric: {exc}") from exc
        if m.shape != (d, d):
            raise InputDomainError(f'rotation JSON rows have shape {m.shape}, expected ({d}, {d})')
        return cls(m)


def identity_rotation(d: int) -> Rotation:
    return Rotation(np.eye(d))


@dataclass(frozen=True)
class RotationTuple:
    """An ordered tuple of r >= 2 rotations sharing one dimension."""

    rotations: tuple

    def __post_init__(self):
        rots = tuple(self.rotations)
        if len(rots) < 2:
            raise InputDomainError(f"a rotation tuple needs r >= 2 entries, got {len(rots)}")
        dims = {g.d for g in rots}
        if len(dims) != 1:
            raise InputDomainError(f"rotations mix dimensions {sorted(dims)}")
        object.__setattr__(self, "rotations", rots)

    @property
    def d(self) -> int:
        return self.rotations[0].d

    @property
    def r(self) -> int:
        return len(self.rotations)

    def __iter__(self):
        return iter(self.rotations)

    def __len__(self):
        return len(self.rotations)

    def __getitem__(self, i):
        return self.rotations[i]

    def to_json_obj(self) -> list:
        return [g.to_json_obj() for g in self.rotations]

    @classmethod
    def from_json_obj(cls, obj) -> "RotationTuple":
        if not isinstance(obj, list):
            raise InputDomainError("rotation tuple JSON must be an array of rotation objects")
        return cls(tuple(Rotation.from_json_obj(item) for item in obj))


def act_point(rotation: Rotation, x) -> np.ndarray:
    """Image g x of a unit vector under the rotation, renormalized."""
    xx = unit_vector(x, name="point")
    if xx.shape[0] != rotation.d:
        raise InputDomainError(f"dimension mismatch: rotation d={rotation.d}, point d={xx.shape[0]}")
    y = rotation.matrix @ xx
    return y / np.linalg.norm(y)


def act_function(rotation: Rotation, f):
    """Left action on functions: returns v -> f(g^T v).

    The returned callable accepts a single point of shape (d,) or a batch of
    shape (m, d), mirroring the convention of the function it wraps.
    """
    mat = rotation.matrix

    def moved(x):
        return f(np.asarray(x, dtype=float) @ mat)

    return moved


def haar_sample(d: int, rng) -> Rotation:
    """Haar-distributed element of SO(d).

    QR of a standard Gaussian matrix with the R-diagonal signs fixed positive
    gives Haar measure on O(d); a negative-determinant draw is mapped into
    SO(d) by negating the last column (right translation by a reflection,
    which preserves Haar measure).
    """
    if d < 2:
        raise InputDomainError(f"haar_sample requires d >= 2, got d={d}")
    gen = as_rng(rng)
    z = gen.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    if np.linalg.det(q) < 0:
        q = q.copy()
        q[:, -1] = -q[:, -1]
    return Rotation(q)


def planar_rotation(d: int, i: int, j: int, angle: float) -> Rotation:
    """Rotation by ``angle`` in the (x_i, x_j) coordinate plane (1-based axes).

    Fixes every other basis vector; maps e_i toward e_j for positive angles.
    """
    if not (1 <= i < j <= d):
        raise InputDomainError(f"axis indices must satisfy 1 <= i < j <= d, got i={i}, j={j}, d={d}")
    m = np.eye(d)
    c, s = np.cos(angle), np.sin(angle)
    m[i - 1, i - 1] = c
    m[j - 1, j - 1] = c
    m[i - 1, j - 1] = -s
    m[j - 1, i - 1] = s
    return Rotation(m)


def fixed_point(rotation: Rotation, *, singular_tol: float = 1e-6, residual_tol: float = 1e-8) -> np.ndarray:
    """A unit vector u with g u = u, via the null space of (g - I).

    Always exists for odd d (an SO(d) matrix then has eigenvalue 1); for even
    d the call succeeds only when an eigenvalue-1 eigenvector exists
    numerically, and raises NoFixedPointError otherwise.  Deterministic
    choice: the null-space direction nearest the lowest-index coordinate
    axis, with the first nonzero coordinate made positive.
    """
    d = rotation.d
    _, svals, vt = np.linalg.svd(rotation.matrix - np.eye(d))
    if svals[-1] > singular_tol:
        raise NoFixedPointError(
            f"smallest singular value of (g - I) is {svals[-1]:.3e} > {singular_tol}; "
            "no fixed point (dimension must be even)"
        )
    null_rows = vt[svals <= singular_tol]
    # columns of null_rows give the coordinates of each axis in the null space
    col_norms = np.linalg.norm(null_rows, axis=0)
    candidates = np.nonzero(col_norms >= 0.5 / np.sqrt(d))[0]
    k = int(candidates[0]) if candidates.size else int(np.argmax(col_norms))
    u = null_rows.T @ null_rows[:, k]
    u = u / np.linalg.norm(u)
    nz = np.nonzero(np.abs(u) > 1e-9)[0]
    if nz.size and u[nz[0]] < 0:
        u = -u
    residual = float(np.linalg.norm(rotation.matrix @ u - u))
    if residual > residual_tol:
        raise NoFixedPointError(f"candidate fixed point has residual {residual:.3e} > {residual_tol}")
    return u
