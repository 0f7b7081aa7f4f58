import numpy as np
import pytest
from scipy.integrate import simpson

from app.classical import PhasePoint, branch_root, ground_state_energy, h_cl
from app.model import FockBasisSpec, ModelParams, build_fock_hamiltonian
from app.states import (EnsembleState, PureState, TimeAveragedState, bloch_amplitudes,
                        coherent_fock_coefficients, coherent_overlap_squared, eigen_coefficients,
                        energy_moments, evolve, evolve_series, phase_space_distance,
                        saturate_bloch, separation_family, sunflower_lattice,
                        survival_probability, time_average_weights)
from app.states.mixtures import _inner_anchor, _place_on_shell
from app.utils.errors import (BlochConstraintError, ConfigError, NormalizationError,
                              ShellEdgeError, TruncationError)

X = PhasePoint(0.5, 0.2, 0.3, -0.4)
Y = PhasePoint(-0.3, 0.1, 1.0, 0.5)


def test_coherent_state_normalized(fock_basis):
    psi = coherent_fock_coefficients(X, fock_basis)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)


def test_coherent_overlap_matches_closed_form(fock_basis):
    a = coherent_fock_coefficients(X, fock_basis)
    b = coherent_fock_coefficients(Y, fock_basis)
    assert abs(np.vdot(a, b)) ** 2 == pytest.approx(coherent_overlap_squared(X, Y, 3.0), abs=1e-10)


def test_bloch_amplitudes_on_boundary():
    amps = bloch_amplitudes(0.0, 2.0, 2.0)
    # Z^2 = 4 puts all weight on m_z = +j
    np.testing.assert_allclose(np.abs(amps), [0, 0, 0, 0, 1], atol=1e-12)
    assert np.sum(np.abs(bloch_amplitudes(1.2, -0.7, 2.0)) ** 2) == pytest.approx(1.0)


def test_coherent_state_errors():
    with pytest.raises(BlochConstraintError):
        coherent_fock_coefficients(PhasePoint(0, 0, 2.0, 1.0), FockBasisSpec(3.0, 20))
    with pytest.raises(TruncationError):
        coherent_fock_coefficients(PhasePoint(4.0, 0, 0, 0), FockBasisSpec(3.0, 5))


def test_coherent_energy_equals_classical_energy(params, fock_basis):
    H = build_fock_hamiltonian(params, fock_basis)
    state = PureState(coherent_fock_coefficients(X, fock_basis), basis=fock_basis)
    mean, sigma = energy_moments(state, H)
    assert mean == pytest.approx(h_cl(X, params), abs=1e-9)
    assert sigma > 0


def test_pure_state_validation(fock_basis):
    with pytest.raises(NormalizationError):
        PureState(np.ones(fock_basis.dim), basis=fock_basis)
    with pytest.raises(ConfigError):
        PureState(np.ones(3) / np.sqrt(3), basis=fock_basis)


def test_ensemble_weights_validation(fock_basis):
    a = PureState(coherent_fock_coefficients(X, fock_basis), basis=fock_basis)
    b = PureState(coherent_fock_coefficients(Y, fock_basis), basis=fock_basis)
    with pytest.raises(NormalizationError):
        EnsembleState([(0.7, a), (0.7, b)])
    mixture = EnsembleState.equal_weights([a, b])
    rho = mixture.density_matrix()
    assert np.trace(rho).real == pytest.approx(1.0)


def test_eigen_coefficients_reconstruct_coherent_state(spectrum, fock_basis):
    c = eigen_coefficients(X, spectrum)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    psi = coherent_fock_coefficients(X, fock_basis)
    assert abs(np.vdot(psi, spectrum.eigenvectors @ c)) ** 2 == pytest.approx(1.0, abs=1e-6)


def test_energy_moments_from_spectrum_match_matrix(params, spectrum, fock_basis):
    H = build_fock_hamiltonian(params, fock_basis)
    state = evolve(X, spectrum, 0.0)
    fock = PureState(state.fock_vector(), basis=fock_basis)
    np.testing.assert_allclose(energy_moments(state, spectrum), energy_moments(fock, H), atol=1e-6)


def test_evolution_conserves_energy_distribution(spectrum):
    states = evolve_series(X, spectrum, [0.0, 1.5, 7.0], workers=2)
    first = np.abs(states[0].coefficients) ** 2
    for state in states[1:]:
        np.testing.assert_allclose(np.abs(state.coefficients) ** 2, first, atol=1e-14)
    assert survival_probability(states[0], states[0]) == pytest.approx(1.0)
    assert survival_probability(states[0], states[2]) < 1.0


def test_time_average_kernel_limits():
    energies = np.array([0.0, 1.0, 2.5])
    np.testing.assert_allclose(time_average_weights(energies, 0.0), np.ones((3, 3)))
    W = time_average_weights(energies, 1e6)
    np.testing.assert_allclose(np.diag(W), 1.0)
    assert np.max(np.abs(W - np.diag(np.diag(W)))) < 1e-5


def test_time_averaged_state_is_density_matrix(spectrum):
    c = eigen_coefficients(X, spectrum)
    averaged = TimeAveragedState(c, spectrum, 5.0)
    weights, vectors = averaged.fock_decomposition()
    assert np.all(weights > 0)
    assert weights.sum() == pytest.approx(1.0)
    rho = averaged.density_matrix()
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    with pytest.raises(ConfigError):
        TimeAveragedState(c, spectrum, -1.0)


def test_time_average_at_zero_is_initial_state(spectrum):
    c = eigen_coefficients(X, spectrum)
    averaged = TimeAveragedState(c, spectrum, 0.0)
    psi = spectrum.eigenvectors @ c
    np.testing.assert_allclose(averaged.density_matrix(), np.outer(psi, psi.conj()), atol=1e-6)


def test_phase_space_distance():
    assert phase_space_distance(X, X) == pytest.approx(0.0, abs=1e-12)
    shifted = X.replace(p=X.p + 0.7)
    assert phase_space_distance(X, shifted) == pytest.approx(0.7)
    # antipodal Bloch points are pi apart on the sphere
    assert phase_space_distance(PhasePoint(), PhasePoint(0, 0, 2.0, 0.0)) == pytest.approx(np.pi)


def test_separation_family_bosonic(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    eps = h_cl(x, params)
    family = separation_family(x, "bosonic", eps, [0.0, 0.2, 0.4], params, fock_basis)
    assert [m.target for m in family] == [0.0, 0.2, 0.4]
    for member in family:
        assert member.distance == pytest.approx(member.target, abs=1e-8)
        assert member.energy == pytest.approx(eps, abs=1e-9)
        assert member.y.Q == x.Q and member.y.P == x.P


def test_separation_family_errors(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    eps = h_cl(x, params)
    with pytest.raises(ConfigError):
        separation_family(x, "diagonal", eps, [0.5], params, fock_basis)
    with pytest.raises(ShellEdgeError):
        separation_family(x, "atomic", eps, [50.0], params, fock_basis)


def test_sunflower_lattice_fills_disk():
    points = sunflower_lattice(200, 2.0)
    radii = np.hypot(points[:, 0], points[:, 1])
    assert radii.max() <= 2.0
    # equal-area rings hold equal point counts
    assert np.count_nonzero(radii <= np.sqrt(2.0)) == 100


def test_saturate_bloch_centroids_on_shell(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    eps = h_cl(x, params)
    saturation = saturate_bloch(4, eps, params, fock_basis, seed=1)
    assert len(saturation.centroids) == 4
    for point in saturation.centroids:
        assert point.p == 0.0
        assert h_cl(point, params) == pytest.approx(eps, abs=1e-8)
    np.testing.assert_allclose(saturation.state.weights, 0.25)
    with pytest.raises(ConfigError):
        saturate_bloch(0, eps, params, fock_basis)


def test_short_time_survival_is_quadratic(spectrum):
    initial = evolve(X, spectrum, 0.0)
    _, sigma = energy_moments(initial, spectrum)
    width = initial.j * sigma
    for t in (1e-3, 2e-3):
        survival = survival_probability(initial, evolve(X, spectrum, t))
        assert survival == pytest.approx(1 - (width * t) ** 2, abs=1e-8)


def test_two_level_time_average_matches_quadrature(spectrum):
    support = [0, 4]
    c = np.zeros(spectrum.size, dtype=complex)
    c[support] = 1 / np.sqrt(2)
    T = 2.0
    averaged = TimeAveragedState(c, spectrum, T)
    np.testing.assert_array_equal(averaged.support, support)

    times = np.linspace(0.0, T, 1001)
    phases = np.exp(-1j * np.outer(times, spectrum.eigenvalues[support])) / np.sqrt(2)
    rho_t = phases[:, :, None] * phases[:, None, :].conj()
    rho = simpson(rho_t, x=times, axis=0) / T
    np.testing.assert_allclose(averaged.eigen_density(), rho, atol=1e-6)


def test_ensemble_energy_is_linear(params, spectrum, fock_basis):
    first, second = evolve(X, spectrum, 0.0), evolve(X.replace(q=0.2), spectrum, 0.0)
    mixture = EnsembleState([(0.3, first), (0.7, second)])
    expected = 0.3 * energy_moments(first, spectrum)[0] + 0.7 * energy_moments(second, spectrum)[0]
    assert energy_moments(mixture, spectrum)[0] == pytest.approx(expected, abs=1e-12)

    H = build_fock_hamiltonian(params, fock_basis)
    fock = [PureState(s.fock_vector(), basis=fock_basis) for s in (first, second)]
    in_fock = EnsembleState([(0.3, fock[0]), (0.7, fock[1])])
    expected = 0.3 * energy_moments(fock[0], H)[0] + 0.7 * energy_moments(fock[1], H)[0]
    assert energy_moments(in_fock, H)[0] == pytest.approx(expected, abs=1e-12)


def test_inner_anchor_switches_below_disk_centre():
    params = ModelParams(j=2.0)
    assert _inner_anchor(0.5, params) == (0.0, 0.0)
    _, minimizer = ground_state_energy(params)
    assert _inner_anchor(-1.5, params) == (minimizer.Q, minimizer.P)


def test_place_on_shell_moves_radially_to_the_edge():
    params = ModelParams(j=2.0)
    # Q = 0: the shell at 0.5 ends at Z^2 = 3
    point, moved = _place_on_shell(0.0, 1.99, (0.0, 0.0), 0.5, params, 1.0)
    assert moved
    assert point.Q == 0.0
    assert point.P == pytest.approx(np.sqrt(3.0), abs=1e-9)
    assert h_cl(point, params) == pytest.approx(0.5, abs=1e-9)

    point, moved = _place_on_shell(1.2, 1.5, (0.0, 0.0), 0.5, params, 1.0)
    assert moved
    assert point.P / point.Q == pytest.approx(1.25, rel=1e-12)
    assert h_cl(point, params) == pytest.approx(0.5, abs=1e-9)
    assert branch_root(0.0, point.Q * (1 + 1e-6), point.P * (1 + 1e-6), 0.5, params, 1.0) is None


def test_place_on_shell_keeps_feasible_points(params):
    point, moved = _place_on_shell(0.3, 0.0, (0.0, 0.0), 0.5, params, 1.0)
    assert not moved
    assert (point.Q, point.P) == (0.3, 0.0)
    assert h_cl(point, params) == pytest.approx(0.5, abs=1e-9)
