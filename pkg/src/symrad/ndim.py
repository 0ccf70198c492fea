"""n-dimensional transforms (desk scale: n <= 3, N <= 64).

Hyperplane integrals of Gaussian phantoms have the same closed form in any
dimension: the (n-1)-dimensional orthogonal integral of a normalized
isotropic Gaussian is 1, so each term contributes
(alpha/sqrt(pi)) exp(-alpha^2 (X - <omega, c>)^2).

The only n = 3 inversion implemented is the symplectic one: dilate the
sphere-restricted tomogram by homogeneity and apply the Fourier inversion
formula via gridding of the central slices.  The hyperplane-transform
inversion formula with its fractional Laplacian is deliberately not ported
beyond n = 2, where it is ``invert_helgason``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, OutOfSupport, SingularDirection,
                     Unsupported)
from .forward import TWO_PI, Sinogram, SinogramSpec, _snap
from .grids import Field, GridSpec
from .inversion import SpectralParams, _anchor_mass, invert_m2_fourier
from .phantoms import Phantom, phantom_eval

MAX_DIMS = 3
MAX_SAMPLES_3D = 64


def fibonacci_sphere(count: int) -> np.ndarray:
    """Near-uniform unit vectors on S^2 by the golden-angle spiral."""
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    rho = np.sqrt(np.maximum(1.0 - z**2, 0.0))
    dirs = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Unit direction vectors on S^(dims-1)."""

    dims: int
    directions: np.ndarray
    scheme: str

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 2 or d.shape[1] != self.dims or d.shape[0] == 0:
            raise ValueError("directions must be a non-empty (D, dims) array")
        norms = np.linalg.norm(d, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("all directions must be unit vectors")
        object.__setattr__(self, "directions", d)

    @classmethod
    def circle(cls, n_angles: int) -> "DirectionSet":
        """Uniform angles 2 pi a / A on the unit circle (matches the
        sinogram angle convention)."""
        th = np.arange(n_angles) * (TWO_PI / n_angles)
        dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
        return cls(dims=2, directions=dirs, scheme="uniform-angles")

    @classmethod
    def fibonacci(cls, count: int) -> "DirectionSet":
        return cls(dims=3, directions=fibonacci_sphere(count),
                   scheme="fibonacci-sphere")

    def __len__(self) -> int:
        return len(self.directions)


@dataclass(frozen=True, eq=False)
class TomogramND:
    """Hyperplane-transform samples, values shape (#directions, M)."""

    dirs: DirectionSet
    n_offsets: int
    offset_halfwidth: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.dirs), self.n_offsets):
            raise ValueError(
                f"values shape {v.shape}, expected "
                f"{(len(self.dirs), self.n_offsets)}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("tomogram values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def offset_step(self) -> float:
        return 2.0 * self.offset_halfwidth / self.n_offsets

    def offsets(self) -> np.ndarray:
        return (-self.offset_halfwidth
                + (np.arange(self.n_offsets) + 0.5) * self.offset_step)


def radon_forward_nd(ph: Phantom, dirs: DirectionSet, n_offsets: int,
                     offset_halfwidth: float) -> TomogramND:
    """Closed-form hyperplane transform of a Gaussian phantom."""
    if ph.dims != dirs.dims:
        raise DimensionMismatch(
            f"phantom dims {ph.dims} != direction dims {dirs.dims}"
        )
    X = (-offset_halfwidth
         + (np.arange(n_offsets) + 0.5)
         * (2.0 * offset_halfwidth / n_offsets))
    if ph.n_terms == 0:
        vals = np.zeros((len(dirs), n_offsets))
    else:
        shift = dirs.directions @ ph.centers.T           # (D, K)
        arg = X[None, :, None] - shift[:, None, :]       # (D, M, K)
        vals = np.einsum(
            "k,dmk->dm", ph.weights * ph.alphas / np.sqrt(np.pi),
            np.exp(-ph.alphas**2 * arg**2))
    return TomogramND(dirs=dirs, n_offsets=n_offsets,
                      offset_halfwidth=offset_halfwidth, values=vals)


def plane_quadrature(func, omega: np.ndarray, X: float,
                     s_halfwidth: float = 10.0, n_nodes: int = 96) -> float:
    """Gauss-Legendre quadrature of func over the hyperplane <omega, x> = X
    (dims 2 or 3).  Used as an independent oracle for the closed form."""
    omega = np.asarray(omega, dtype=float)
    omega = omega / np.linalg.norm(omega)
    n = len(omega)
    s, w = np.polynomial.legendre.leggauss(n_nodes)
    s = s * s_halfwidth
    w = w * s_halfwidth
    # Orthonormal basis of the plane from the SVD null space.
    basis = np.linalg.svd(omega[None, :])[2][1:]
    if n == 2:
        pts = X * omega[None, :] + s[:, None] * basis[0]
        return float(func(pts) @ w)
    if n == 3:
        pts = (X * omega[None, None, :]
               + s[:, None, None] * basis[0]
               + s[None, :, None] * basis[1])
        return float(w @ func(pts) @ w)
    raise Unsupported(f"plane_quadrature supports dims 2 and 3, got {n}")


def radon_forward_field_nd(f: Field, dirs: DirectionSet, n_offsets: int,
                           offset_halfwidth: float,
                           n_nodes: int = 64) -> TomogramND:
    """Numerical hyperplane transform of a gridded field (multilinear
    interpolation, zero outside the window)."""
    from scipy.ndimage import map_coordinates

    if f.spec.dims != dirs.dims:
        raise DimensionMismatch(
            f"field dims {f.spec.dims} != direction dims {dirs.dims}"
        )
    if dirs.dims > MAX_DIMS:
        raise Unsupported(f"dims > {MAX_DIMS} not implemented")
    L, h = f.spec.extent, f.spec.step
    S = np.sqrt(dirs.dims) * L
    s, w = np.polynomial.legendre.leggauss(n_nodes)
    s, w = s * S, w * S
    X = (-offset_halfwidth
         + (np.arange(n_offsets) + 0.5)
         * (2.0 * offset_halfwidth / n_offsets))
    out = np.empty((len(dirs), n_offsets))
    for d, omega in enumerate(dirs.directions):
        basis = np.linalg.svd(omega[None, :])[2][1:]
        if dirs.dims == 2:
            pts = (X[:, None, None] * omega
                   + s[None, :, None] * basis[0])        # (M, n, 2)
            idx = [(pts[..., i] + L) / h - 0.5 for i in range(2)]
            vals = map_coordinates(f.values, idx, order=1,
                                   mode="constant", cval=0.0)
            out[d] = vals @ w
        else:
            pts = (X[:, None, None, None] * omega
                   + s[None, :, None, None] * basis[0]
                   + s[None, None, :, None] * basis[1])  # (M, n, n, 3)
            idx = [(pts[..., i] + L) / h - 0.5 for i in range(3)]
            vals = map_coordinates(f.values, idx, order=1,
                                   mode="constant", cval=0.0)
            out[d] = np.einsum("mij,i,j->m", vals, w, w)
    return TomogramND(dirs=dirs, n_offsets=n_offsets,
                      offset_halfwidth=offset_halfwidth, values=out)


def _row_lookup(tg: TomogramND, d0, d1, frac, X):
    """Linear interpolation in the offset on a (blend of) stored rows."""
    xi = _snap((np.asarray(X, dtype=float) + tg.offset_halfwidth)
               / tg.offset_step - 0.5)
    if np.any((xi < -0.5) | (xi > tg.n_offsets - 0.5)):
        raise OutOfSupport(
            f"offset outside the stored window {tg.offset_halfwidth:.4g}"
        )
    xi = np.clip(xi, 0.0, tg.n_offsets - 1.0)
    m0 = np.floor(xi).astype(int)
    m1 = np.minimum(m0 + 1, tg.n_offsets - 1)
    fx = xi - m0
    row = (1 - frac) * tg.values[d0] + frac * tg.values[d1]
    return (1 - fx) * row[m0] + fx * row[m1]


def m2_evaluate_nd(tg: TomogramND, mu: np.ndarray, X):
    """Symplectic tomogram at covector mu via homogeneity:
    (1/|mu|) f#(mu/|mu|, X/|mu|).

    Direction lookup is periodic-linear in the angle for n = 2 and
    nearest-neighbor on the sphere for n = 3; offsets are interpolated
    linearly either way.  Accepts scalar or array X.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (tg.dirs.dims,):
        raise DimensionMismatch(
            f"mu has shape {mu.shape}, expected ({tg.dirs.dims},)"
        )
    r = float(np.linalg.norm(mu))
    if r == 0.0:
        raise SingularDirection(
            "mu = 0: value is a delta in X; only the total mass survives"
        )
    if abs(r - 1.0) < 1e-12:
        r = 1.0
    u = mu / r
    X = np.asarray(X, dtype=float)
    scalar = X.ndim == 0
    if tg.dirs.dims == 2:
        D = len(tg.dirs)
        ti = _snap(np.mod(np.arctan2(u[1], u[0]), TWO_PI) / (TWO_PI / D))
        d0 = int(np.floor(ti)) % D
        d1 = (d0 + 1) % D
        frac = float(ti - np.floor(ti))
    else:
        d0 = d1 = int(np.argmax(tg.dirs.directions @ u))
        frac = 0.0
    val = _row_lookup(tg, d0, d1, frac, X / r) / r
    return float(val) if scalar else val


def invert_m2_fourier_nd(tg: TomogramND, gspec: GridSpec,
                         sp: SpectralParams = SpectralParams()) -> Field:
    """Fourier inversion of an n-dimensional tomogram.

    n = 2 delegates to the 2-D central-slice path.  n = 3 transforms each
    direction row in the offset and scatters the resulting central-slice
    samples onto the Cartesian frequency lattice with trilinear
    (inverse-distance) weights, normalizing by the accumulated weight.
    """
    if gspec.dims != tg.dirs.dims:
        raise DimensionMismatch(
            f"grid dims {gspec.dims} != tomogram dims {tg.dirs.dims}"
        )
    if tg.dirs.dims == 2:
        sspec = SinogramSpec(n_angles=len(tg.dirs), n_offsets=tg.n_offsets,
                             offset_halfwidth=tg.offset_halfwidth)
        if tg.dirs.scheme != "uniform-angles":
            raise Unsupported("n = 2 inversion needs uniform-angle directions")
        return invert_m2_fourier(Sinogram(spec=sspec, values=tg.values),
                                 gspec, sp)
    if tg.dirs.dims != 3:
        raise Unsupported(f"dims {tg.dirs.dims} > {MAX_DIMS} not implemented")
    if gspec.samples > MAX_SAMPLES_3D:
        raise Unsupported(
            f"n = 3 capped at N = {MAX_SAMPLES_3D}, got {gspec.samples}"
        )

    N = gspec.samples
    dX = tg.offset_step
    Mp = sp.pad_factor * tg.n_offsets
    raw = np.fft.fft(tg.values, n=Mp, axis=1)
    k = TWO_PI * np.fft.fftfreq(Mp, d=dX)
    x0 = -tg.offset_halfwidth + dX / 2.0
    slices = raw * (dX * np.exp(-1j * k * x0))           # (D, Mp)

    dk = TWO_PI / (N * gspec.step)
    # Lattice coordinates of every central-slice sample.
    u = (k[None, :, None] * tg.dirs.directions[:, None, :]) / dk
    u = u.reshape(-1, 3)
    vals = slices.ravel()
    keep = np.all(np.abs(u) <= N / 2 - 1, axis=1)
    u, vals = u[keep], vals[keep]

    base = np.floor(u).astype(int)
    frac = u - base
    num = np.zeros((N, N, N), dtype=complex)
    den = np.zeros((N, N, N))
    for corner in range(8):
        off = np.array([(corner >> b) & 1 for b in (2, 1, 0)])
        wgt = np.prod(np.where(off, frac, 1.0 - frac), axis=1)
        idx = (base + off) % N
        flat = np.ravel_multi_index((idx[:, 0], idx[:, 1], idx[:, 2]),
                                    (N, N, N))
        num += (np.bincount(flat, weights=wgt * vals.real, minlength=N**3)
                + 1j * np.bincount(flat, weights=wgt * vals.imag,
                                   minlength=N**3)).reshape(N, N, N)
        den += np.bincount(flat, weights=wgt, minlength=N**3).reshape(N, N, N)

    fhat = np.zeros_like(num)
    filled = den > 0
    fhat[filled] = num[filled] / den[filled]

    kax = TWO_PI * np.fft.fftfreq(N, d=gspec.step)
    xb = -gspec.extent + gspec.step / 2.0
    phase = np.exp(1j * kax * xb)
    fhat *= phase[:, None, None] * phase[None, :, None] * phase[None, None, :]
    values = np.fft.ifftn(fhat).real / gspec.step**3
    mass = float(tg.values.sum(axis=1).mean() * dX)
    values = _anchor_mass(values, gspec, mass)
    return Field(spec=gspec, values=values)
