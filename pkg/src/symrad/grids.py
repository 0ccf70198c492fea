"""Cell-centered Cartesian grids and sampled fields."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centered grid over [-extent, extent]^dims.

    Grid points per axis are x_j = -L + (j + 1/2) * (2L/N): no sample sits
    exactly at the origin, so symmetric peaks need no special casing.
    """

    dims: int
    extent: float
    samples: int

    def __post_init__(self):
        if self.dims < 2:
            raise ValueError(f"dims must be >= 2, got {self.dims}")
        if self.extent <= 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        if self.samples < 8 or self.samples % 2 != 0:
            raise ValueError(
                f"samples must be even and >= 8, got {self.samples}"
            )

    @property
    def step(self) -> float:
        return 2.0 * self.extent / self.samples

    @property
    def cell_volume(self) -> float:
        return self.step ** self.dims

    def axis(self) -> np.ndarray:
        """Cell-centered sample coordinates along one axis."""
        return -self.extent + (np.arange(self.samples) + 0.5) * self.step

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays for all axes, shape (N,)*dims each."""
        return np.meshgrid(*([self.axis()] * self.dims), indexing="ij")

    def points(self) -> np.ndarray:
        """All grid points as an (N^dims, dims) array, row-major order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)


@dataclass(frozen=True, eq=False)
class Field:
    """Real-valued function sampled on a GridSpec, shape (N,)*dims."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        expected = (self.spec.samples,) * self.spec.dims
        v = np.asarray(self.values, dtype=float)
        if v.shape != expected:
            raise ValueError(
                f"values shape {v.shape} does not match grid {expected}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)


def total_mass(f: Field) -> float:
    """Cell-volume-weighted sum of the field values."""
    return float(f.values.sum() * f.spec.cell_volume)


def require_same_dims(a: int, b: int, what: str = "dims") -> None:
    if a != b:
        raise DimensionMismatch(f"{what} mismatch: {a} != {b}")
