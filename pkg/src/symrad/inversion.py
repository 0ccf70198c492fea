"""The three reconstruction algorithms.

* ``invert_m2_fourier``: the symplectic route.  The 1-D Fourier transform of
  a sinogram row in the offset equals the 2-D Fourier transform of f along
  that direction (central slice), so reconstruction is one round of FFTs
  plus polar-to-Cartesian frequency interpolation.  A literal quadrature of
  the triple-integral inversion formula is kept as a slow reference path.

* ``invert_radon_circle_mean``: Radon's original formula.  Average f# over
  all lines tangent to the circle of center (q, p) and radius r, then
  compute -(1/pi) int_eps F'(r) dr / r and extrapolate eps -> 0 with the
  a + b sqrt(eps) model that matches the O(sqrt(eps)) remainder.

* ``invert_helgason``: (1/4 pi) (-Lap)^(1/2) applied to the unfiltered
  backprojection, with the fractional Laplacian realized as the spectral
  multiplier |k|.  The non-rotation-invariant multiplier (k1 + k2)^(1/2), as
  printed in one source, is selectable for demonstration and fails badly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import (DimensionMismatch, InsufficientSupport, OutOfSupport,
                     Unsupported)
from .forward import (TWO_PI, Sinogram, SinogramSpec, edge_magnitude,
                      sinogram_interp)
from .grids import Field, GridSpec, total_mass
from .phantoms import Phantom, phantom_to_field

# Sinogram boundary columns below this fraction of the peak may be treated
# as zero when a lookup falls outside the stored offset window.
_NEGLIGIBLE_EDGE = 1e-9


@dataclass(frozen=True)
class SpectralParams:
    """Knobs for the FFT-based paths."""

    pad_factor: int = 2
    slice_interp: str = "linear"

    def __post_init__(self):
        if self.pad_factor not in (1, 2, 4):
            raise ValueError(f"pad_factor must be 1, 2 or 4, got {self.pad_factor}")
        if self.slice_interp not in ("linear", "cubic"):
            raise ValueError(f"slice_interp must be linear or cubic")


@dataclass(frozen=True)
class CircleMeanParams:
    """Knobs for the singular-integral inversion."""

    epsilon_schedule: tuple = (0.16, 0.08, 0.04, 0.02)
    r_max: float = 4.0
    n_r: int = 384
    n_theta: int = 192

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_schedule)
        if len(eps) < 2 or any(e <= 0 for e in eps):
            raise ValueError("epsilon schedule needs >= 2 positive entries")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilon schedule must be strictly decreasing")
        if self.r_max <= eps[0]:
            raise ValueError("r_max must exceed the largest epsilon")
        if self.n_r < 64 or self.n_theta < 64:
            raise ValueError("need n_r >= 64 and n_theta >= 64")
        object.__setattr__(self, "epsilon_schedule", eps)


# ---------------------------------------------------------------------------
# Symplectic / Fourier inversion
# ---------------------------------------------------------------------------

def _row_spectra(sg: Sinogram, pad_factor: int):
    """1-D Fourier transforms of the sinogram rows in the offset variable.

    Returns the nonnegative frequency axis k_j and the complex samples
    F(theta_a, k_j) = int f#(theta_a, X) exp(-i k_j X) dX approximated on
    the offset grid (zero-padded by pad_factor for finer k resolution).
    """
    sp = sg.spec
    dX = sp.offset_step
    Mp = pad_factor * sp.n_offsets
    raw = np.fft.fft(sg.values, n=Mp, axis=1)
    nk = Mp // 2 + 1
    k = np.arange(nk) * (TWO_PI / (Mp * dX))
    x0 = -sp.offset_halfwidth + dX / 2.0
    return k, raw[:, :nk] * (dX * np.exp(-1j * k * x0))


def _invert_cartesian_spectrum(fhat: np.ndarray, gspec: GridSpec) -> np.ndarray:
    """f(x) = (1/(2 pi)^2) int fhat(k) exp(i k.x) d^2 k on the cell-centered
    grid; fhat is given on the fftfreq lattice of the grid."""
    dx = gspec.step
    kax = TWO_PI * np.fft.fftfreq(gspec.samples, d=dx)
    x0 = -gspec.extent + dx / 2.0
    phase = np.exp(1j * kax * x0)
    return np.fft.ifft2(fhat * phase[:, None] * phase[None, :]).real / dx**2


def _sinogram_mass(sg: Sinogram) -> float:
    """Angle-averaged offset integral of the sinogram: the total mass."""
    return float(sg.values.sum(axis=1).mean() * sg.spec.offset_step)


def _anchor_mass(values: np.ndarray, gspec: GridSpec, target: float) -> np.ndarray:
    """Shift by a constant so the cell sum matches the target mass.

    The k = 0 sample is the best-measured datum of the sinogram; anchoring
    it removes the free additive constant of the spectral paths.  The shift
    is linear in the data."""
    window = (2.0 * gspec.extent) ** gspec.dims
    current = values.sum() * gspec.cell_volume
    return values + (target - current) / window


def _central_slice(sg: Sinogram, gspec: GridSpec, sp: SpectralParams) -> np.ndarray:
    k, fpol = _row_spectra(sg, sp.pad_factor)
    A = sg.spec.n_angles
    dth = sg.spec.angle_step
    dk = k[1] - k[0]

    kax = TWO_PI * np.fft.fftfreq(gspec.samples, d=gspec.step)
    K1, K2 = np.meshgrid(kax, kax, indexing="ij")
    kr = np.hypot(K1, K2)
    th = np.mod(np.arctan2(K2, K1), TWO_PI)

    order = 1 if sp.slice_interp == "linear" else 3
    pad = order + 1
    wrapped = np.concatenate([fpol[-pad:], fpol, fpol[:pad]], axis=0)
    coords = [th / dth + pad, kr / dk]
    re = map_coordinates(wrapped.real, coords, order=order, mode="nearest")
    im = map_coordinates(wrapped.imag, coords, order=order, mode="nearest")
    fhat = re + 1j * im
    fhat[kr > k[-1]] = 0.0
    return _invert_cartesian_spectrum(fhat, gspec)


def _direct_quadrature(sg: Sinogram, gspec: GridSpec,
                       n_freq: int = 128, tail_cut: float = 1e-8) -> np.ndarray:
    """Literal quadrature of f(q,p) = (1/(2 pi)^2) intintint f_M2(mu,nu,X)
    exp(i(X - mu q - nu p)) dX dmu dnu.

    The (mu, nu) box is a midpoint grid over [-K, K]^2 with K chosen where
    the row spectra have decayed below tail_cut of their peak.  For each
    (mu, nu) the inner X integral is evaluated on the sinogram's own offset
    grid through the substitution X = r u (r = |(mu, nu)|), which turns it
    into int f#(theta, u) exp(i r u) du.
    """
    spc = sg.spec
    k, fpol = _row_spectra(sg, 1)
    profile = np.abs(fpol).max(axis=0)
    peak = profile.max()
    if peak == 0:
        return np.zeros((gspec.samples,) * 2)
    above = np.nonzero(profile > tail_cut * peak)[0]
    K = k[min(above[-1] + 1, len(k) - 1)]

    h = 2.0 * K / n_freq
    mu = -K + (np.arange(n_freq) + 0.5) * h
    MU, NU = np.meshgrid(mu, mu, indexing="ij")
    r = np.hypot(MU, NU).ravel()
    th = np.mod(np.arctan2(NU, MU), TWO_PI).ravel()

    # Linearly interpolated sinogram row at each direction angle.
    ti = th / spc.angle_step
    a0 = np.floor(ti).astype(int) % spc.n_angles
    a1 = (a0 + 1) % spc.n_angles
    ft = (ti - np.floor(ti))[:, None]
    rows = (1 - ft) * sg.values[a0] + ft * sg.values[a1]

    u = spc.offsets()
    inner = ((rows * np.exp(1j * np.outer(r, u))).sum(axis=1)
             * spc.offset_step).reshape(n_freq, n_freq)

    x = gspec.axis()
    eq = np.exp(-1j * np.outer(mu, x))          # (n_freq, N)
    f = eq.T @ inner @ eq
    return f.real * h**2 / TWO_PI**2


def invert_m2_fourier(sg: Sinogram, gspec: GridSpec,
                      sp: SpectralParams = SpectralParams(),
                      path: str = "central-slice") -> Field:
    """Reconstruct a 2-D field from its sinogram through the symplectic
    Fourier route; ``path="direct-quadrature"`` selects the slow literal
    evaluation of the inversion integral."""
    if gspec.dims != 2:
        raise DimensionMismatch("invert_m2_fourier requires dims == 2")
    needed = np.sqrt(2.0) * gspec.extent
    if sg.spec.offset_halfwidth < needed:
        raise InsufficientSupport(
            f"offset window {sg.spec.offset_halfwidth:.4g} < sqrt(2) * "
            f"extent = {needed:.4g}: grid corners are not covered"
        )
    if path == "central-slice":
        values = _central_slice(sg, gspec, sp)
    elif path == "direct-quadrature":
        values = _direct_quadrature(sg, gspec)
    else:
        raise ValueError(f"unknown path {path!r}")
    values = _anchor_mass(values, gspec, _sinogram_mass(sg))
    return Field(spec=gspec, values=values)


# ---------------------------------------------------------------------------
# Radon's circle-mean inversion
# ---------------------------------------------------------------------------

def circle_mean(sg: Sinogram, q: float, p: float, r: float,
                n_theta: int = 256, extend: str = "error") -> float:
    """Average of f# over all lines tangent to the circle of center (q, p)
    and radius r (trapezoidal rule over the full angle period)."""
    if extend == "error" and np.hypot(q, p) + abs(r) > sg.spec.offset_halfwidth:
        raise OutOfSupport(
            f"circle (|center| + |r|) = {np.hypot(q, p) + abs(r):.4g} "
            f"exceeds the offset window {sg.spec.offset_halfwidth:.4g}"
        )
    th = np.arange(n_theta) * (TWO_PI / n_theta)
    X = q * np.cos(th) + p * np.sin(th) + r
    return float(np.mean(sinogram_interp(sg, th, X, extend=extend)))


def _require_zero_extendable(sg: Sinogram, context: str) -> None:
    if edge_magnitude(sg) > _NEGLIGIBLE_EDGE:
        raise OutOfSupport(
            f"{context} needs offsets beyond the stored window and the "
            f"boundary columns are not negligible "
            f"({edge_magnitude(sg):.2e} of peak); enlarge the offset window"
        )


def circle_mean_estimates(sg: Sinogram, points: np.ndarray,
                          cp: CircleMeanParams,
                          extend: str = "error") -> np.ndarray:
    """Truncated singular integrals -(1/pi) int_eps^r_max F'(r) dr / r for
    every point and every epsilon in the schedule.

    Returns an array of shape (n_points, n_eps).  F is sampled on a
    cell-centered radial grid, differentiated by central differences, and
    integrated by the midpoint rule with a partial first cell so the result
    varies continuously with epsilon.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    sp = sg.spec
    reach = np.hypot(points[:, 0], points[:, 1]).max() + cp.r_max
    if reach > sp.offset_halfwidth:
        if extend == "error":
            raise OutOfSupport(
                f"points need lookups out to {reach:.4g}, beyond the offset "
                f"window {sp.offset_halfwidth:.4g}"
            )
        _require_zero_extendable(sg, "circle-mean inversion")

    dr = cp.r_max / cp.n_r
    r_nodes = (np.arange(cp.n_r) + 0.5) * dr
    th = np.arange(cp.n_theta) * (TWO_PI / cp.n_theta)
    eps = np.asarray(cp.epsilon_schedule)
    # Midpoint weights with a fractional first cell per epsilon.
    w = np.clip((r_nodes[None, :] + dr / 2.0 - eps[:, None]) / dr, 0.0, 1.0)

    out = np.empty((len(points), len(eps)))
    chunk = max(1, int(2e6 / (cp.n_r * cp.n_theta)))
    mode = extend if extend == "zero" else "error"
    for lo in range(0, len(points), chunk):
        pts = points[lo:lo + chunk]
        proj = (pts[:, 0, None] * np.cos(th)
                + pts[:, 1, None] * np.sin(th))          # (P, T)
        X = proj[:, :, None] + r_nodes                    # (P, T, R)
        F = sinogram_interp(sg, th[None, :, None], X, extend=mode).mean(axis=1)
        dF = np.gradient(F, dr, axis=1)
        integrand = dF / r_nodes                          # (P, R)
        out[lo:lo + chunk] = -(integrand @ w.T) * dr / np.pi
    return out


def extrapolate_sqrt_eps(estimates: np.ndarray, schedule) -> np.ndarray:
    """Fit a + b sqrt(eps) through the two smallest-epsilon estimates and
    return the eps -> 0 intercept a (vectorized over leading axes)."""
    eps = np.asarray(schedule, dtype=float)
    s1, s2 = np.sqrt(eps[-1]), np.sqrt(eps[-2])
    i1, i2 = estimates[..., -1], estimates[..., -2]
    return (i1 * s2 - i2 * s1) / (s2 - s1)


def invert_radon_circle_mean(sg: Sinogram, gspec: GridSpec,
                             cp: CircleMeanParams = CircleMeanParams(),
                             extend: str = "error") -> Field:
    """Full-grid reconstruction by Radon's circle-mean formula."""
    if gspec.dims != 2:
        raise DimensionMismatch("invert_radon_circle_mean requires dims == 2")
    pts = gspec.points()
    est = circle_mean_estimates(sg, pts, cp, extend=extend)
    values = extrapolate_sqrt_eps(est, cp.epsilon_schedule)
    return Field(spec=gspec, values=values.reshape((gspec.samples,) * 2))


# ---------------------------------------------------------------------------
# Helgason inversion
# ---------------------------------------------------------------------------

def backproject(sg: Sinogram, gspec: GridSpec,
                extend: str = "error") -> Field:
    """Unfiltered backprojection int_0^2pi f#(theta, q cos theta +
    p sin theta) d theta on the grid (trapezoid over the stored angles)."""
    if gspec.dims != 2:
        raise DimensionMismatch("backproject requires dims == 2")
    x = gspec.axis()
    Q, P = np.meshgrid(x, x, indexing="ij")
    reach = np.hypot(Q, P).max()
    if reach > sg.spec.offset_halfwidth:
        if extend == "error":
            raise OutOfSupport(
                f"grid corners at radius {reach:.4g} exceed the offset "
                f"window {sg.spec.offset_halfwidth:.4g}"
            )
        _require_zero_extendable(sg, "backprojection")
    mode = "zero" if extend == "zero" else "error"
    acc = np.zeros_like(Q)
    for a, th in enumerate(sg.spec.angles()):
        X = Q * np.cos(th) + P * np.sin(th)
        acc += sinogram_interp(sg, th, X, extend=mode)
    return Field(spec=gspec, values=acc * sg.spec.angle_step)


def _multiplier(kax: np.ndarray, order: float, variant: str) -> np.ndarray:
    K1, K2 = np.meshgrid(kax, kax, indexing="ij")
    if variant == "radial":
        mult = (K1**2 + K2**2) ** (order / 2.0)
    elif variant == "printed-sum":
        # (k1 + k2)^(order/2), as printed: not rotation invariant and
        # complex on half the plane.  Kept for the documented failure demo.
        mult = (K1 + K2 + 0j) ** (order / 2.0)
    else:
        raise ValueError(f"unknown multiplier variant {variant!r}")
    mult[0, 0] = 0.0
    return mult


def fractional_laplacian(f: Field, order: float,
                         sp: SpectralParams = SpectralParams(),
                         variant: str = "radial") -> Field:
    """Spectral power of the (negative) Laplacian: multiplier |k|^order
    applied with zero-padding; the zero frequency maps to 0."""
    if order <= 0:
        raise ValueError(f"order must be positive, got {order}")
    N = f.spec.samples
    Np = sp.pad_factor * N
    spec = np.fft.fft2(f.values, s=(Np, Np))
    kax = TWO_PI * np.fft.fftfreq(Np, d=f.spec.step)
    out = np.fft.ifft2(spec * _multiplier(kax, order, variant)).real
    return Field(spec=f.spec, values=out[:N, :N])


def invert_helgason(sg: Sinogram, gspec: GridSpec,
                    sp: SpectralParams = SpectralParams(),
                    variant: str = "radial",
                    extend: str = "zero") -> Field:
    """(1/4 pi) (-Lap)^(1/2) of the backprojection.

    The backprojection decays only like 1/|x|, so it is computed on a
    pad_factor-enlarged window before the multiplier is applied and the
    central block cropped; this keeps the truncation artifacts of the
    nonlocal operator away from the reconstruction window.
    """
    if gspec.dims != 2:
        raise DimensionMismatch("invert_helgason requires dims == 2")
    pad = sp.pad_factor
    big = GridSpec(dims=2, extent=pad * gspec.extent,
                   samples=pad * gspec.samples)
    bp = backproject(sg, big, extend=extend)
    kax = TWO_PI * np.fft.fftfreq(big.samples, d=big.step)
    filt = np.fft.ifft2(np.fft.fft2(bp.values)
                        * _multiplier(kax, 1.0, variant)).real
    lo = (big.samples - gspec.samples) // 2
    values = filt[lo:lo + gspec.samples, lo:lo + gspec.samples] / (4.0 * np.pi)
    values = _anchor_mass(values, gspec, _sinogram_mass(sg))
    return Field(spec=gspec, values=values)


# ---------------------------------------------------------------------------
# Error norms
# ---------------------------------------------------------------------------

def reconstruction_error(f: Field, ref: Phantom, norm: str = "max_abs") -> float:
    """Norm of (field - phantom sampled on the same grid)."""
    if ref.dims != f.spec.dims:
        raise DimensionMismatch(
            f"phantom dims {ref.dims} != field dims {f.spec.dims}"
        )
    import warnings as _warnings
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        truth = phantom_to_field(ref, f.spec).values
    diff = f.values - truth
    if norm == "max_abs":
        return float(np.abs(diff).max())
    if norm == "l2_cellweighted":
        return float(np.sqrt((diff**2).sum() * f.spec.cell_volume))
    raise ValueError(f"unknown norm {norm!r}")
