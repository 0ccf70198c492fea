import numpy as np
import pytest

from symrad import (DimensionMismatch, GridSpec, Phantom, SingularDirection,
                    analytic_m2, analytic_radon, phantom_eval,
                    phantom_to_field, total_mass)


def test_eval_origin(centered):
    assert phantom_eval(centered, np.zeros(2)) == pytest.approx(1 / np.pi,
                                                                abs=1e-15)


def test_eval_far_away(two_gauss):
    assert phantom_eval(two_gauss, np.array([80.0, -90.0])) == 0.0


def test_eval_two_terms_arbitrary_precision_oracle():
    # oracle: term-by-term scalar evaluation in 50-digit arithmetic
    import mpmath

    mpmath.mp.dps = 50
    ph = Phantom.from_terms([(0.5, (1.0, 0.0), 1.0), (0.5, (-1.0, 0.0), 2.0)])
    want = (mpmath.mpf("0.5") * (1 / mpmath.pi) * mpmath.e**0
            + mpmath.mpf("0.5") * (4 / mpmath.pi) * mpmath.exp(-16))
    got = phantom_eval(ph, np.array([1.0, 0.0]))
    assert got == pytest.approx(float(want), rel=1e-14)


def test_eval_dimension_mismatch(centered):
    with pytest.raises(DimensionMismatch):
        phantom_eval(centered, np.zeros(3))


def test_positivity():
    rng = np.random.default_rng(0)
    ph = Phantom.from_terms([(0.2, (1.0, -1.0), 0.7), (0.8, (0.0, 2.0), 1.5)])
    pts = rng.uniform(-4, 4, size=(200, 2))
    assert np.all(phantom_eval(ph, pts) >= 0)


def test_alpha_must_be_positive():
    with pytest.raises(ValueError):
        Phantom.from_terms([(1.0, (0.0, 0.0), -1.0)])


def test_field_peak_near_origin(centered):
    spec = GridSpec(dims=2, extent=5.0, samples=8)
    f = phantom_to_field(centered, spec)
    i, j = np.unravel_index(f.values.argmax(), f.values.shape)
    assert i in (3, 4) and j in (3, 4)


def test_field_mass(centered):
    spec = GridSpec(dims=2, extent=5.0, samples=128)
    assert total_mass(phantom_to_field(centered, spec)) == pytest.approx(
        1.0, abs=1e-6)


def test_field_mass_weighted():
    ph = Phantom.from_terms([(0.3, (0.5, 0.0), 1.0), (0.7, (0.0, -0.5), 1.5)])
    spec = GridSpec(dims=2, extent=6.0, samples=192)
    assert total_mass(phantom_to_field(ph, spec)) == pytest.approx(1.0,
                                                                   abs=1e-6)
    assert ph.mass() == pytest.approx(1.0)


def test_zero_phantom_field():
    ph = Phantom(dims=2)
    spec = GridSpec(dims=2, extent=5.0, samples=16)
    assert np.all(phantom_to_field(ph, spec).values == 0.0)


def test_truncation_warning():
    ph = Phantom.from_terms([(1.0, (0.0, 0.0), 1.0)])
    with pytest.warns(UserWarning, match="tail"):
        phantom_to_field(ph, GridSpec(dims=2, extent=2.0, samples=16))


def test_radon_closed_form_centered(centered):
    assert analytic_radon(centered, 0.3, 0.0) == pytest.approx(
        1 / np.sqrt(np.pi), abs=1e-15)


def test_radon_angle_independence_is_exact(centered):
    a = analytic_radon(centered, 0.0, 0.7)
    b = analytic_radon(centered, np.pi / 3, 0.7)
    assert a == b


def test_radon_shifted_peak_vs_quadrature_oracle():
    # oracle: 1-D numerical quadrature of the line integral
    from scipy.integrate import quad

    ph = Phantom.from_terms([(1.0, (1.0, 0.0), 1.0)])

    def integrand(s, theta, X):
        q = X * np.cos(theta) - s * np.sin(theta)
        p = X * np.sin(theta) + s * np.cos(theta)
        return phantom_eval(ph, np.array([q, p]))

    for theta, X in [(0.0, 1.0), (0.7, -0.3), (2.1, 0.5)]:
        want, _ = quad(integrand, -12, 12, args=(theta, X), limit=200)
        assert analytic_radon(ph, theta, X) == pytest.approx(want, abs=1e-10)
    assert analytic_radon(ph, 0.0, 1.0) == pytest.approx(1 / np.sqrt(np.pi))


def test_m2_closed_form(centered):
    assert analytic_m2(centered, 1.0, 0.0, 0.0) == pytest.approx(
        1 / np.sqrt(np.pi), abs=1e-15)
    assert analytic_m2(centered, 3.0, 4.0, 0.0) == pytest.approx(
        1 / (5 * np.sqrt(np.pi)), abs=1e-15)


def test_m2_homogeneity_matches_radon(centered):
    got = analytic_m2(centered, 2.0, 0.0, 2.0)
    want = 0.5 * analytic_radon(centered, 0.0, 1.0)
    assert got == pytest.approx(want, rel=1e-14)


def test_m2_restriction_consistency(two_gauss):
    rng = np.random.default_rng(5)
    th = rng.uniform(0, 2 * np.pi, 50)
    X = rng.uniform(-4, 4, 50)
    a = analytic_m2(two_gauss, np.cos(th), np.sin(th), X)
    b = analytic_radon(two_gauss, th, X)
    assert np.abs(a - b).max() < 1e-14


def test_m2_singular_direction(centered):
    with pytest.raises(SingularDirection):
        analytic_m2(centered, 0.0, 0.0, 1.0)
