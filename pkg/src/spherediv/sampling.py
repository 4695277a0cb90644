"""Seeded random sources and uniform sphere sampling.

All randomness in the package flows through numpy's PCG64 generator.  A run is
reproduced by its 64-bit root seed; independent sub-streams (per trial, per
degree, ...) are derived with ``derive_rng(seed, *keys)``, which seeds a fresh
generator from ``SeedSequence(entropy=seed, spawn_key=keys)``.  The derivation
depends only on the integer keys, never on execution order.
"""

from __future__ import annotations

import secrets

import numpy as np

__all__ = ["as_rng", "derive_rng", "fresh_seed", "resolve_seed", "uniform_sphere"]


def fresh_seed() -> int:
    """Draw a new 64-bit seed from OS entropy."""
    return secrets.randbits(63)


def as_rng(rng) -> np.random.Generator:
    """Coerce ``None`` (fresh entropy), an integer seed, or a Generator to a Generator."""
    if rng is None:
        return np.random.default_rng(fresh_seed())
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(int(rng))


def resolve_seed(rng) -> int:
    """Reduce ``None`` / int / Generator to a concrete integer seed.

    Integers pass through, ``None`` draws OS entropy, and a Generator
    contributes one draw from its stream.
    """
    if rng is None:
        return fresh_seed()
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63))
    return int(rng)


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Deterministic child generator for (seed, keys), independent of call order."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(ss)


def uniform_sphere(d: int, size: int, rng) -> np.ndarray:
    """Draw ``size`` points uniformly on the unit sphere in R^d, shape (size, d)."""
    gen = as_rng(rng)
    pts = gen.standard_normal((size, d))
    norms = np.linalg.norm(pts, axis=1)
    # resample the (measure-zero) near-origin draws rather than dividing by ~0
    bad = norms < 1e-12
    while np.any(bad):
        pts[bad] = gen.standard_normal((int(bad.sum()), d))
        norms[bad] = np.linalg.norm(pts[bad], axis=1)
        bad = norms < 1e-12
    return pts / norms[:, None]
