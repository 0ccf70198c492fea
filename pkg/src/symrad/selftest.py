"""Closed-form oracle self-checks, runnable from the CLI.

Each check compares a numerical operation against an independent analytic
value and reports pass/fail; the suite is fast enough to run routinely.
"""
from __future__ import annotations

import os
import tempfile

import numpy as np

from .fileio import read_field, write_field
from .forward import (QuadratureSpec, SinogramSpec, m2_evaluate,
                      radon_forward)
from .grids import Field, GridSpec, total_mass
from .inversion import SpectralParams, fractional_laplacian
from .phantoms import (Phantom, analytic_m2, analytic_radon, phantom_eval,
                       phantom_to_field)

_CENTERED = Phantom.from_terms([(1.0, (0.0, 0.0), 1.0)])


def _check_closed_forms():
    rng = np.random.default_rng(7)
    th = rng.uniform(0, 2 * np.pi, 20)
    X = rng.uniform(-3, 3, 20)
    want = np.exp(-X**2) / np.sqrt(np.pi)
    err = np.abs(analytic_radon(_CENTERED, th, X) - want).max()
    assert err < 1e-12, f"analytic line transform off by {err:.2e}"
    mu = rng.uniform(-2, 2, 20)
    nu = rng.uniform(-2, 2, 20)
    r2 = mu**2 + nu**2
    want = np.exp(-X**2 / r2) / np.sqrt(np.pi * r2)
    err = np.abs(analytic_m2(_CENTERED, mu, nu, X) - want).max()
    assert err < 1e-12, f"analytic symplectic tomogram off by {err:.2e}"
    v = phantom_eval(_CENTERED, np.zeros(2))
    assert abs(v - 1 / np.pi) < 1e-14, "peak value != 1/pi"


def _check_forward_quadrature():
    sspec = SinogramSpec(n_angles=8, n_offsets=32, offset_halfwidth=6.0)
    sg = radon_forward(_CENTERED, sspec, QuadratureSpec(n_nodes=64))
    want = analytic_radon(_CENTERED, sspec.angles()[:, None],
                          sspec.offsets()[None, :])
    err = np.abs(sg.values - want).max()
    assert err < 1e-8, f"quadrature vs closed form differ by {err:.2e}"


def _check_homogeneity():
    sspec = SinogramSpec(n_angles=16, n_offsets=64, offset_halfwidth=6.0)
    sg = radon_forward(_CENTERED, sspec, QuadratureSpec())
    rng = np.random.default_rng(11)
    for _ in range(100):
        mu, nu = rng.uniform(-2, 2, 2)
        if mu == 0 and nu == 0:
            continue
        r = np.hypot(mu, nu)
        X = rng.uniform(-0.5, 0.5) * r * sspec.offset_halfwidth
        lam = rng.uniform(0.1, 10.0)
        a = m2_evaluate(sg, lam * mu, lam * nu, lam * X) * lam
        b = m2_evaluate(sg, mu, nu, X)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b)), \
            f"homogeneity violated by {abs(a - b):.2e}"


def _check_mass_and_reflection():
    sspec = SinogramSpec(n_angles=16, n_offsets=128, offset_halfwidth=8.0)
    sg = radon_forward(_CENTERED, sspec, QuadratureSpec())
    mass = sg.values.sum(axis=1) * sspec.offset_step
    assert np.abs(mass - 1.0).max() < 1e-4, "per-angle mass drifted"
    A = sspec.n_angles
    flipped = sg.values[np.arange(A // 2) + A // 2, ::-1]
    err = np.abs(sg.values[: A // 2] - flipped).max()
    assert err < 1e-8, f"angle-reflection identity off by {err:.2e}"


def _check_grid_mass():
    gspec = GridSpec(dims=2, extent=5.0, samples=128)
    f = phantom_to_field(_CENTERED, gspec)
    assert abs(total_mass(f) - 1.0) < 1e-6, "grid mass != phantom mass"


def _check_fractional_laplacian():
    gspec = GridSpec(dims=2, extent=5.0, samples=64)
    f = phantom_to_field(_CENTERED, gspec)
    # pad_factor=1: the crop after a padded transform breaks exact
    # multiplier composition.
    sp = SpectralParams(pad_factor=1)
    twice = fractional_laplacian(
        fractional_laplacian(f, 0.5, sp), 0.5, sp)
    once = fractional_laplacian(f, 1.0, sp)
    err = np.abs(twice.values - once.values).max()
    assert err < 1e-8, f"half-order composition off by {err:.2e}"


def _check_file_roundtrip():
    gspec = GridSpec(dims=2, extent=3.0, samples=16)
    rng = np.random.default_rng(3)
    f = Field(spec=gspec, values=rng.normal(size=(16, 16)))
    fd, path = tempfile.mkstemp(suffix=".dat")
    os.close(fd)
    try:
        write_field(f, path)
        g = read_field(path)
        assert np.array_equal(f.values, g.values), "round trip not bitwise"
    finally:
        os.unlink(path)


CHECKS = [
    ("closed-form oracles", _check_closed_forms),
    ("forward quadrature vs closed form", _check_forward_quadrature),
    ("homogeneity of the dilated tomogram", _check_homogeneity),
    ("per-angle mass and reflection identity", _check_mass_and_reflection),
    ("grid mass conservation", _check_grid_mass),
    ("fractional-laplacian composition", _check_fractional_laplacian),
    ("field file round trip", _check_file_roundtrip),
]


def run_selftest(out=print) -> bool:
    ok = True
    for name, fn in CHECKS:
        try:
            fn()
            out(f"PASS {name}")
        except AssertionError as exc:
            ok = False
            out(f"FAIL {name}: {exc}")
    return ok
