"""Numerical forward transforms.

The line-integral transform is sampled on a uniform (angle x offset) grid by
quadrature along the parametrized line

    X * (cos t, sin t) + s * (-sin t, cos t),  s in [-S, S],

which is the set <omega, x> = X with omega = (cos t, sin t); the Dirac
delta in the defining integral is never discretized.  The
symplectic tomogram at arbitrary (mu, nu) is served from the sinogram via
the degree -1 homogeneity bijection, so no 3-D array is ever stored.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import DimensionMismatch, OutOfSupport, SingularDirection
from .grids import Field
from .phantoms import Phantom, phantom_eval

TWO_PI = 2.0 * np.pi

# Interpolation coordinates within this many index units of a grid node are
# snapped onto it, so on-grid queries reproduce stored entries exactly.
_SNAP = 1e-9


@dataclass(frozen=True)
class SinogramSpec:
    """Uniform angles theta_a = 2 pi a / A, cell-centered offsets in
    [-offset_halfwidth, offset_halfwidth]."""

    n_angles: int
    n_offsets: int
    offset_halfwidth: float

    def __post_init__(self):
        if self.n_angles < 4:
            raise ValueError(f"need at least 4 angles, got {self.n_angles}")
        if self.n_offsets < 8 or self.n_offsets % 2 != 0:
            raise ValueError(
                f"n_offsets must be even and >= 8, got {self.n_offsets}"
            )
        if self.offset_halfwidth <= 0:
            raise ValueError("offset_halfwidth must be positive")

    @property
    def angle_step(self) -> float:
        return TWO_PI / self.n_angles

    @property
    def offset_step(self) -> float:
        return 2.0 * self.offset_halfwidth / self.n_offsets

    def angles(self) -> np.ndarray:
        return np.arange(self.n_angles) * self.angle_step

    def offsets(self) -> np.ndarray:
        return (-self.offset_halfwidth
                + (np.arange(self.n_offsets) + 0.5) * self.offset_step)


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Sampled line-integral transform, values shape (A, M), angle-major."""

    spec: SinogramSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        expected = (self.spec.n_angles, self.spec.n_offsets)
        if v.shape != expected:
            raise ValueError(f"values shape {v.shape}, expected {expected}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class QuadratureSpec:
    """Rule for the 1-D line integral over s in [-s_halfwidth, s_halfwidth]."""

    rule: str = "gauss-legendre"
    n_nodes: int = 64
    s_halfwidth: float = 10.0

    def __post_init__(self):
        if self.rule not in ("midpoint", "gauss-legendre"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.n_nodes < 16:
            raise ValueError(f"need n_nodes >= 16, got {self.n_nodes}")
        if self.s_halfwidth <= 0:
            raise ValueError("s_halfwidth must be positive")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        S = self.s_halfwidth
        if self.rule == "midpoint":
            h = 2.0 * S / self.n_nodes
            s = -S + (np.arange(self.n_nodes) + 0.5) * h
            w = np.full(self.n_nodes, h)
        else:
            s, w = np.polynomial.legendre.leggauss(self.n_nodes)
            s = s * S
            w = w * S
        return s, w


def radon_forward(ph: Phantom, sspec: SinogramSpec,
                  quad: QuadratureSpec) -> Sinogram:
    """Sample the line-integral transform of a 2-D phantom by quadrature."""
    if ph.dims != 2:
        raise DimensionMismatch("radon_forward requires a 2-D phantom")
    s, w = quad.nodes()
    X = sspec.offsets()
    out = np.empty((sspec.n_angles, sspec.n_offsets))
    for a, th in enumerate(sspec.angles()):
        ct, st = np.cos(th), np.sin(th)
        # (M, n_nodes, 2) points along each offset's line
        q = X[:, None] * ct - s[None, :] * st
        p = X[:, None] * st + s[None, :] * ct
        pts = np.stack([q, p], axis=-1)
        out[a] = phantom_eval(ph, pts) @ w
    return Sinogram(spec=sspec, values=out)


def radon_forward_field(f: Field, sspec: SinogramSpec,
                        quad: QuadratureSpec) -> Sinogram:
    """Line integrals of a bilinearly interpolated field (0 outside window)."""
    if f.spec.dims != 2:
        raise DimensionMismatch("radon_forward_field requires a 2-D field")
    s, w = quad.nodes()
    X = sspec.offsets()
    L, h = f.spec.extent, f.spec.step
    out = np.empty((sspec.n_angles, sspec.n_offsets))
    for a, th in enumerate(sspec.angles()):
        ct, st = np.cos(th), np.sin(th)
        q = X[:, None] * ct - s[None, :] * st
        p = X[:, None] * st + s[None, :] * ct
        iq = (q + L) / h - 0.5
        ip = (p + L) / h - 0.5
        vals = map_coordinates(f.values, [iq, ip], order=1,
                               mode="constant", cval=0.0)
        out[a] = vals @ w
    return Sinogram(spec=sspec, values=out)


def _snap(idx: np.ndarray) -> np.ndarray:
    near = np.round(idx)
    return np.where(np.abs(idx - near) < _SNAP, near, idx)


def sinogram_interp(sg: Sinogram, theta, X, extend: str = "error"):
    """Bilinear lookup of f#(theta, X), periodic in the angle.

    extend: "error" raises OutOfSupport for |X| beyond the offset window;
    "zero" treats the transform as 0 there (callers must have checked that
    the stored boundary columns are negligible).
    """
    sp = sg.spec
    theta = np.asarray(theta, dtype=float)
    X = np.asarray(X, dtype=float)
    scalar = theta.ndim == 0 and X.ndim == 0
    theta, X = np.broadcast_arrays(theta, X)

    inside = np.abs(X) <= sp.offset_halfwidth * (1 + 1e-12)
    if extend == "error":
        if not np.all(inside):
            raise OutOfSupport(
                f"offset |X| up to {np.abs(X).max():.4g} exceeds the stored "
                f"window {sp.offset_halfwidth:.4g}"
            )
    elif extend != "zero":
        raise ValueError(f"unknown extend mode {extend!r}")

    ti = _snap(np.mod(theta, TWO_PI) / sp.angle_step)
    a0 = np.floor(ti).astype(int) % sp.n_angles
    a1 = (a0 + 1) % sp.n_angles
    ft = ti - np.floor(ti)

    # Offsets: interpolate between cell centers, clamping in the half-cells
    # at the window edges.
    xi = _snap((X + sp.offset_halfwidth) / sp.offset_step - 0.5)
    xi = np.clip(xi, 0.0, sp.n_offsets - 1.0)
    m0 = np.floor(xi).astype(int)
    m1 = np.minimum(m0 + 1, sp.n_offsets - 1)
    fx = xi - m0

    v = sg.values
    val = ((1 - ft) * ((1 - fx) * v[a0, m0] + fx * v[a0, m1])
           + ft * ((1 - fx) * v[a1, m0] + fx * v[a1, m1]))
    if extend == "zero":
        val = np.where(inside, val, 0.0)
    return float(val) if scalar else val


def m2_evaluate(sg: Sinogram, mu: float, nu: float, X: float) -> float:
    """Symplectic tomogram at (mu, nu, X) via the homogeneity bijection.

    f_M2(mu, nu, X) = (1/r) f#(atan2(nu, mu), X/r) with r = |(mu, nu)|.
    Homogeneity m2_evaluate(l mu, l nu, l X) = m2_evaluate(mu, nu, X)/l is
    definitional in this representation.
    """
    r = float(np.hypot(mu, nu))
    if r == 0.0:
        raise SingularDirection(
            "mu = nu = 0: value is a delta in X; use m2_mass_at_origin"
        )
    # hypot(cos t, sin t) can land 1 ulp off 1.0; snap so the restriction
    # to the unit circle reproduces stored entries exactly
    if abs(r - 1.0) < 1e-12:
        r = 1.0
    theta = np.mod(np.arctan2(nu, mu), TWO_PI)
    return sinogram_interp(sg, theta, X / r, extend="error") / r


def m2_mass_at_origin(ph: Phantom) -> float:
    """Coefficient of delta(X) in the tomogram at mu = 0: the total mass."""
    return ph.mass()


def edge_magnitude(sg: Sinogram) -> float:
    """Largest stored value on the offset-window boundary columns, relative
    to the overall maximum (0 for an all-zero sinogram)."""
    peak = np.abs(sg.values).max()
    if peak == 0:
        return 0.0
    edge = max(np.abs(sg.values[:, 0]).max(), np.abs(sg.values[:, -1]).max())
    return edge / peak
