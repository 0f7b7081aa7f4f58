import numpy as np
import pytest

from app.classical import PhasePoint
from app.husimi import (atomic_projection, bosonic_projection, build_projection_grid, husimi,
                        husimi_values, projection_heatmap, projection_on_grid, save_heatmap)
from app.model import FockBasisSpec
from app.states import (EnsembleState, PureState, TimeAveragedState, coherent_fock_coefficients,
                        coherent_overlap_squared, eigen_coefficients)
from app.utils.errors import ConfigError, ResolutionError, TruncationError

J = 3.0
X = PhasePoint(0.5, 0.2, 0.3, -0.4)
Y = PhasePoint(-0.3, 0.1, 1.0, 0.5)


@pytest.fixture(scope="module")
def basis():
    return FockBasisSpec(J, 40)


@pytest.fixture(scope="module")
def mixture(basis):
    a = PureState(coherent_fock_coefficients(X, basis), basis=basis)
    b = PureState(coherent_fock_coefficients(Y, basis), basis=basis)
    return EnsembleState([(0.3, a), (0.7, b)])


def random_disk_points(rng, n):
    Z = 2 * np.sqrt(rng.random(n))
    phi = 2 * np.pi * rng.random(n)
    return Z * np.cos(phi), Z * np.sin(phi)


def test_coherent_husimi_peaks_at_centre(basis):
    state = PureState(coherent_fock_coefficients(X, basis), basis=basis)
    assert husimi(state, X) == pytest.approx(1.0, abs=1e-10)
    assert husimi(state, Y) == pytest.approx(coherent_overlap_squared(X, Y, J), abs=1e-10)


def test_husimi_values_bounded(mixture, rng):
    Q, P = random_disk_points(rng, 500)
    points = np.column_stack([rng.normal(0, 1, 500), rng.normal(0, 1, 500), Q, P])
    values = husimi_values(mixture, points, workers=2)
    assert np.all(values >= -1e-14)
    assert np.all(values <= 1 + 1e-12)


def test_husimi_rejects_bad_points(mixture):
    with pytest.raises(ConfigError):
        husimi_values(mixture, np.zeros((3, 3)))
    with pytest.raises(TruncationError):
        husimi(mixture, PhasePoint(9.0, 0.0, 0.0, 0.0), tail_tolerance=1e-10)


def test_time_averaged_husimi_matches_density_matrix(spectrum, fock_basis, rng):
    c = eigen_coefficients(X, spectrum)
    averaged = TimeAveragedState(c, spectrum, 3.0)
    Q, P = random_disk_points(rng, 20)
    points = np.column_stack([rng.normal(0, 0.7, 20), rng.normal(0, 0.7, 20), Q, P])
    direct = []
    rho = averaged.density_matrix()
    for row in points:
        v = coherent_fock_coefficients(PhasePoint.from_array(row), fock_basis)
        direct.append(np.real(np.vdot(v, rho @ v)))
    np.testing.assert_allclose(husimi_values(averaged, points), direct, atol=1e-9)


def test_atomic_projection_matches_bosonic_quadrature(mixture, rng):
    plane = build_projection_grid("bosonic", 8, J)
    Q, P = random_disk_points(rng, 5)
    for Qi, Pi in zip(Q, P):
        points = np.column_stack([plane.nodes, np.full(plane.size, Qi), np.full(plane.size, Pi)])
        direct = J / (2 * np.pi) * plane.integrate(husimi_values(mixture, points))
        assert atomic_projection(mixture, Qi, Pi) == pytest.approx(direct, abs=1e-6)


def test_bosonic_projection_matches_atomic_quadrature(mixture, rng):
    disk = build_projection_grid("atomic", 8, J)
    for q, p in rng.normal(0, 0.8, (5, 2)):
        points = np.column_stack([np.full(disk.size, q), np.full(disk.size, p), disk.nodes])
        direct = (2 * J + 1) / (4 * np.pi) * disk.integrate(husimi_values(mixture, points))
        assert bosonic_projection(mixture, q, p) == pytest.approx(direct, abs=1e-6)


def test_projection_masses(mixture):
    disk = build_projection_grid("atomic", 8, J)
    box = build_projection_grid("bosonic", 8, J)
    assert disk.area == pytest.approx(4 * np.pi)
    assert disk.integrate(projection_on_grid(mixture, disk)) == pytest.approx(4 * np.pi / (2 * J + 1))
    assert box.integrate(projection_on_grid(mixture, box)) == pytest.approx(2 * np.pi / J, rel=1e-8)


def test_grid_validation():
    with pytest.raises(ResolutionError):
        build_projection_grid("atomic", 4, J)
    with pytest.raises(ConfigError):
        build_projection_grid("spin", 8, J)
    with pytest.raises(ConfigError):
        build_projection_grid("bosonic", 8, J, extent=-1.0)


def test_heatmap_export(tmp_path, mixture):
    frame = projection_heatmap(mixture, "atomic", n=21)
    assert len(frame) == 21 * 21
    outside = frame["Q"] ** 2 + frame["P"] ** 2 > 4
    assert frame.loc[outside, "value"].isna().all()
    assert frame.loc[~outside, "value"].notna().all()
    path = save_heatmap(frame, tmp_path / "atomic", {"plane": "atomic"})
    assert path.exists() and (tmp_path / "atomic.json").exists()


def test_origin_coherent_husimi_closed_form(basis, rng):
    # |n = 0> x |j, -j>
    state = PureState(coherent_fock_coefficients(PhasePoint(), basis), basis=basis)
    Q, P = random_disk_points(rng, 1000)
    q, p = rng.normal(0, 1, 1000), rng.normal(0, 1, 1000)
    values = husimi_values(state, np.column_stack([q, p, Q, P]), workers=2)
    expected = np.exp(-J * (q * q + p * p) / 2) * (1 - (Q * Q + P * P) / 4) ** (2 * J)
    np.testing.assert_allclose(values, expected, atol=1e-10)
