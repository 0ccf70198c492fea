import numpy as np
import pytest

from symrad import (DimensionMismatch, GridSpec, OutOfSupport, Phantom,
                    QuadratureSpec, SingularDirection, Sinogram, SinogramSpec,
                    analytic_m2, analytic_radon, edge_magnitude, m2_evaluate,
                    m2_mass_at_origin, phantom_to_field, radon_forward,
                    radon_forward_field, sinogram_interp)


def test_spec_validation():
    with pytest.raises(ValueError):
        SinogramSpec(n_angles=3, n_offsets=64, offset_halfwidth=8.0)
    with pytest.raises(ValueError):
        SinogramSpec(n_angles=8, n_offsets=63, offset_halfwidth=8.0)
    with pytest.raises(ValueError):
        SinogramSpec(n_angles=8, n_offsets=64, offset_halfwidth=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rule="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(n_nodes=8)


def test_grid_conventions():
    sp = SinogramSpec(n_angles=8, n_offsets=16, offset_halfwidth=4.0)
    assert sp.angles()[0] == 0.0
    assert sp.angles()[-1] == pytest.approx(2 * np.pi * 7 / 8)
    X = sp.offsets()
    assert X[0] == pytest.approx(-4.0 + 0.25)
    assert np.all(np.abs(X + X[::-1]) < 1e-14)


def test_forward_matches_closed_form(two_gauss, two_gauss_sinogram,
                                     big_sspec):
    want = analytic_radon(two_gauss,
                          big_sspec.angles()[:, None],
                          big_sspec.offsets()[None, :])
    assert np.abs(two_gauss_sinogram.values - want).max() < 1e-10


def test_forward_midpoint_rule_converges(centered):
    sspec = SinogramSpec(n_angles=8, n_offsets=32, offset_halfwidth=6.0)
    quad = QuadratureSpec(rule="midpoint", n_nodes=400, s_halfwidth=8.0)
    sg = radon_forward(centered, sspec, quad)
    want = analytic_radon(centered, sspec.angles()[:, None],
                          sspec.offsets()[None, :])
    assert np.abs(sg.values - want).max() < 1e-8


def test_forward_linearity(big_sspec, quad64):
    rng = np.random.default_rng(11)
    for _ in range(5):
        t1 = (rng.uniform(0.1, 1), rng.uniform(-2, 2, 2), rng.uniform(0.6, 2))
        t2 = (rng.uniform(0.1, 1), rng.uniform(-2, 2, 2), rng.uniform(0.6, 2))
        a, b = rng.uniform(0.2, 2, 2)
        sg1 = radon_forward(Phantom.from_terms([t1]), big_sspec, quad64)
        sg2 = radon_forward(Phantom.from_terms([t2]), big_sspec, quad64)
        both = Phantom.from_terms([(a * t1[0], t1[1], t1[2]),
                                   (b * t2[0], t2[1], t2[2])])
        sg = radon_forward(both, big_sspec, quad64)
        lin = a * sg1.values + b * sg2.values
        assert np.abs(sg.values - lin).max() < 1e-12


def test_forward_shift_moves_offset():
    # center (1, 0): the theta = 0 row peaks at X = +1
    ph = Phantom.from_terms([(1.0, (1.0, 0.0), 1.0)])
    sspec = SinogramSpec(n_angles=4, n_offsets=64, offset_halfwidth=4.0)
    sg = radon_forward(ph, sspec, QuadratureSpec())
    X = sspec.offsets()
    assert abs(X[sg.values[0].argmax()] - 1.0) <= sspec.offset_step
    # and the theta = pi row at X = -1
    assert abs(X[sg.values[2].argmax()] + 1.0) <= sspec.offset_step


def test_forward_reflection_symmetry(two_gauss_sinogram):
    # f#(theta + pi, X) = f#(theta, -X) on this grid (A even, X symmetric)
    v = two_gauss_sinogram.values
    A = v.shape[0]
    assert np.abs(v - np.roll(v, A // 2, axis=0)[:, ::-1]).max() < 1e-12


def test_forward_mass_per_angle(two_gauss, two_gauss_sinogram, big_sspec):
    masses = two_gauss_sinogram.values.sum(axis=1) * big_sspec.offset_step
    assert np.abs(masses - two_gauss.mass()).max() < 1e-6


def test_forward_rejects_3d():
    ph = Phantom.from_terms([(1.0, (0.0, 0.0, 0.0), 1.0)])
    with pytest.raises(DimensionMismatch):
        radon_forward(ph, SinogramSpec(8, 16, 4.0), QuadratureSpec())


def test_forward_field_matches_phantom_forward(two_gauss, big_sspec):
    with pytest.warns(UserWarning):
        f = phantom_to_field(two_gauss,
                             GridSpec(dims=2, extent=5.0, samples=256))
    quad = QuadratureSpec(rule="gauss-legendre", n_nodes=96, s_halfwidth=8.0)
    sg = radon_forward_field(f, big_sspec, quad)
    want = analytic_radon(two_gauss, big_sspec.angles()[:, None],
                          big_sspec.offsets()[None, :])
    assert np.abs(sg.values - want).max() < 1e-3


def test_sinogram_validation(big_sspec):
    with pytest.raises(ValueError):
        Sinogram(spec=big_sspec, values=np.zeros((3, 3)))
    bad = np.zeros((big_sspec.n_angles, big_sspec.n_offsets))
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        Sinogram(spec=big_sspec, values=bad)


def test_interp_reproduces_nodes_exactly(big_sinogram, big_sspec):
    th = big_sspec.angles()
    X = big_sspec.offsets()
    got = sinogram_interp(big_sinogram, th[:, None], X[None, :])
    assert np.array_equal(got, big_sinogram.values)


def test_interp_periodic_in_angle(big_sinogram):
    a = sinogram_interp(big_sinogram, 0.3, 1.1)
    b = sinogram_interp(big_sinogram, 0.3 + 2 * np.pi, 1.1)
    assert a == pytest.approx(b, abs=1e-12)


def test_interp_accuracy_between_nodes(two_gauss, two_gauss_sinogram):
    rng = np.random.default_rng(2)
    th = rng.uniform(0, 2 * np.pi, 300)
    X = rng.uniform(-4, 4, 300)
    got = sinogram_interp(two_gauss_sinogram, th, X)
    want = analytic_radon(two_gauss, th, X)
    assert np.abs(got - want).max() < 2e-3


def test_interp_out_of_support(big_sinogram):
    with pytest.raises(OutOfSupport):
        sinogram_interp(big_sinogram, 0.0, 9.0)
    assert sinogram_interp(big_sinogram, 0.0, 9.0, extend="zero") == 0.0
    with pytest.raises(ValueError):
        sinogram_interp(big_sinogram, 0.0, 1.0, extend="mirror")


def test_m2_evaluate_restriction(centered, big_sinogram):
    got = m2_evaluate(big_sinogram, np.cos(0.7), np.sin(0.7), 0.5)
    want = analytic_m2(centered, np.cos(0.7), np.sin(0.7), 0.5)
    assert got == pytest.approx(want, abs=5e-4)


def test_m2_evaluate_homogeneity_random(big_sinogram):
    rng = np.random.default_rng(7)
    for _ in range(100):
        mu, nu = rng.uniform(-2, 2, 2)
        if np.hypot(mu, nu) < 0.1:
            continue
        X = rng.uniform(-2, 2)
        lam = rng.uniform(0.3, 3.0)
        a = m2_evaluate(big_sinogram, lam * mu, lam * nu, lam * X)
        b = m2_evaluate(big_sinogram, mu, nu, X) / lam
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


def test_m2_evaluate_singular(big_sinogram, centered):
    with pytest.raises(SingularDirection):
        m2_evaluate(big_sinogram, 0.0, 0.0, 1.0)
    assert m2_mass_at_origin(centered) == pytest.approx(1.0)


def test_m2_evaluate_scaled_direction(two_gauss, two_gauss_sinogram):
    got = m2_evaluate(two_gauss_sinogram, 2.0, 0.0, 1.0)
    want = analytic_m2(two_gauss, 2.0, 0.0, 1.0)
    assert got == pytest.approx(want, abs=1e-4)


def test_edge_magnitude(big_sinogram):
    assert edge_magnitude(big_sinogram) < 1e-9
    sp = big_sinogram.spec
    assert edge_magnitude(Sinogram(
        spec=sp, values=np.zeros((sp.n_angles, sp.n_offsets)))) == 0.0
