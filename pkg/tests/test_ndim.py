import numpy as np
import pytest

from symrad import (DimensionMismatch, DirectionSet, GridSpec, OutOfSupport,
                    Phantom, SingularDirection, SinogramSpec, TomogramND,
                    Unsupported, fibonacci_sphere, invert_m2_fourier,
                    invert_m2_fourier_nd, m2_evaluate_nd, phantom_eval,
                    phantom_to_field, plane_quadrature, radon_forward,
                    radon_forward_field_nd, radon_forward_nd,
                    reconstruction_error)


@pytest.fixture(scope="module")
def ball3():
    return Phantom.from_terms([(1.0, (0.3, -0.2, 0.1), 1.0)])


@pytest.fixture(scope="module")
def tomo3(ball3):
    dirs = DirectionSet.fibonacci(400)
    return radon_forward_nd(ball3, dirs, n_offsets=128, offset_halfwidth=8.0)


def test_fibonacci_sphere_unit_and_spread():
    d = fibonacci_sphere(500)
    assert np.abs(np.linalg.norm(d, axis=1) - 1.0).max() < 1e-12
    # near-uniform: the mean direction of a symmetric cover is close to 0
    assert np.linalg.norm(d.mean(axis=0)) < 5e-3


def test_direction_set_validation():
    with pytest.raises(ValueError):
        DirectionSet(dims=3, directions=np.zeros((0, 3)), scheme="x")
    with pytest.raises(ValueError):
        DirectionSet(dims=3, directions=np.ones((4, 3)), scheme="x")
    circ = DirectionSet.circle(12)
    assert len(circ) == 12 and circ.dims == 2


def test_tomogram_validation():
    dirs = DirectionSet.circle(8)
    with pytest.raises(ValueError):
        TomogramND(dirs=dirs, n_offsets=16, offset_halfwidth=4.0,
                   values=np.zeros((8, 10)))


def test_forward_nd_matches_2d_sinogram(two_gauss, big_sspec, quad64):
    sg = radon_forward(two_gauss, big_sspec, quad64)
    dirs = DirectionSet.circle(big_sspec.n_angles)
    tg = radon_forward_nd(two_gauss, dirs, big_sspec.n_offsets,
                          big_sspec.offset_halfwidth)
    assert np.abs(tg.values - sg.values).max() < 1e-10


def test_forward_nd_against_plane_quadrature_oracle(ball3):
    dirs = DirectionSet.fibonacci(8)
    tg = radon_forward_nd(ball3, dirs, n_offsets=32, offset_halfwidth=6.0)
    X = tg.offsets()
    for d in (0, 3, 7):
        for m in (10, 16, 22):
            want = plane_quadrature(lambda pts: phantom_eval(ball3, pts),
                                    dirs.directions[d], X[m])
            assert tg.values[d, m] == pytest.approx(want, abs=1e-10)


def test_forward_nd_mass_per_direction(ball3, tomo3):
    masses = tomo3.values.sum(axis=1) * tomo3.offset_step
    assert np.abs(masses - ball3.mass()).max() < 1e-10


def test_forward_nd_dimension_mismatch(two_gauss):
    with pytest.raises(DimensionMismatch):
        radon_forward_nd(two_gauss, DirectionSet.fibonacci(8), 16, 4.0)


def test_forward_field_nd_matches_closed_form(ball3):
    gspec = GridSpec(dims=3, extent=5.0, samples=64)
    f = phantom_to_field(ball3, gspec)
    dirs = DirectionSet.fibonacci(6)
    tg = radon_forward_field_nd(f, dirs, n_offsets=32, offset_halfwidth=6.0)
    ref = radon_forward_nd(ball3, dirs, n_offsets=32, offset_halfwidth=6.0)
    assert np.abs(tg.values - ref.values).max() < 5e-3


def test_m2_evaluate_nd_closed_form(ball3, tomo3):
    # centered slice through mu = (3, 0, 0): value 1/(3 sqrt(pi)) at the
    # projection of the center
    got = m2_evaluate_nd(tomo3, np.array([3.0, 0.0, 0.0]), 3 * 0.3)
    assert got == pytest.approx(1.0 / (3 * np.sqrt(np.pi)), abs=5e-3)


def test_m2_evaluate_nd_homogeneity(tomo3):
    rng = np.random.default_rng(13)
    for _ in range(50):
        mu = rng.uniform(-2, 2, 3)
        if np.linalg.norm(mu) < 0.2:
            continue
        X = rng.uniform(-1, 1)
        lam = rng.uniform(0.4, 2.5)
        a = m2_evaluate_nd(tomo3, lam * mu, lam * X)
        b = m2_evaluate_nd(tomo3, mu, X) / lam
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


def test_m2_evaluate_nd_errors(tomo3):
    with pytest.raises(SingularDirection):
        m2_evaluate_nd(tomo3, np.zeros(3), 1.0)
    with pytest.raises(DimensionMismatch):
        m2_evaluate_nd(tomo3, np.array([1.0, 0.0]), 0.0)
    with pytest.raises(OutOfSupport):
        m2_evaluate_nd(tomo3, np.array([1.0, 0.0, 0.0]), 20.0)


def test_invert_nd_2d_delegates_bitwise(two_gauss, big_sspec, quad64,
                                        grid128):
    sg = radon_forward(two_gauss, big_sspec, quad64)
    dirs = DirectionSet.circle(big_sspec.n_angles)
    tg = TomogramND(dirs=dirs, n_offsets=big_sspec.n_offsets,
                    offset_halfwidth=big_sspec.offset_halfwidth,
                    values=sg.values)
    f2 = invert_m2_fourier(sg, grid128)
    fn = invert_m2_fourier_nd(tg, grid128)
    assert np.array_equal(f2.values, fn.values)


def test_invert_nd_2d_needs_uniform_angles(two_gauss, grid128):
    dirs = DirectionSet(dims=2,
                        directions=fibonacci_sphere(16)[:, :2]
                        / np.linalg.norm(fibonacci_sphere(16)[:, :2],
                                         axis=1, keepdims=True),
                        scheme="ad-hoc")
    tg = radon_forward_nd(two_gauss, dirs, 128, 8.0)
    with pytest.raises(Unsupported):
        invert_m2_fourier_nd(tg, grid128)


def test_invert_nd_3d_accuracy(ball3, tomo3):
    gspec = GridSpec(dims=3, extent=4.0, samples=48)
    f = invert_m2_fourier_nd(tomo3, gspec)
    assert reconstruction_error(f, ball3, "max_abs") < 3e-2


def test_invert_nd_3d_size_cap(tomo3):
    with pytest.raises(Unsupported):
        invert_m2_fourier_nd(tomo3, GridSpec(dims=3, extent=4.0, samples=96))


def test_invert_nd_grid_dims_must_match(tomo3, grid128):
    with pytest.raises(DimensionMismatch):
        invert_m2_fourier_nd(tomo3, grid128)
