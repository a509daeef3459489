"""Deterministic sample clouds around a base point."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def unit_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` seeded unit vectors in R^n; in one dimension just +1 and -1."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class SampleCloud:
    """Points ``base + t * v`` for radii t (strictly decreasing) and unit directions v."""

    base: np.ndarray
    radii: np.ndarray
    directions: np.ndarray
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float).ravel()
        radii = np.asarray(self.radii, dtype=float).ravel()
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) >= 0):
            raise ValueError("radii must be positive and strictly decreasing")
        if dirs.shape[1] != base.size:
            raise ValueError("directions and base point have different dimensions")
        if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1) > 1e-12):
            raise ValueError("directions must have unit norm")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def default(cls, x0, n_directions: int = 16, seed: int = 0, i_min: int = 4, i_max: int = 24):
        """Radii 2^-i for i = i_min..i_max and seeded random directions."""
        x0 = np.asarray(x0, dtype=float).ravel()
        radii = 2.0 ** -np.arange(i_min, i_max + 1)
        return cls(x0, radii, unit_directions(x0.size, n_directions, seed), seed)

    @classmethod
    def geometric(cls, x0, radius_max: float, radius_min: float, n_radii: int = 21,
                  n_directions: int = 16, seed: int = 0):
        if not 0 < radius_min < radius_max:
            raise ValueError("need 0 < radius_min < radius_max")
        x0 = np.asarray(x0, dtype=float).ravel()
        radii = np.geomspace(radius_max, radius_min, n_radii)
        return cls(x0, radii, unit_directions(x0.size, n_directions, seed), seed)

    @property
    def dim(self) -> int:
        return self.base.size

    def points(self) -> np.ndarray:
        """Array of shape (n_radii, n_directions, n)."""
        return self.base + self.radii[:, None, None] * self.directions[None, :, :]
