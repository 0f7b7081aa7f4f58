import numpy as np
import pytest
import scipy.sparse as sparse

from app.model import (EfficientBasisSpec, FockBasisSpec, ModelParams, Spectrum,
                       build_efficient_hamiltonian, build_fock_hamiltonian, build_hamiltonian,
                       convergence_filter, diagonalize, displaced_fock_overlaps, load_spectrum,
                       parity_diagonal, save_spectrum)
from app.utils.errors import ConfigError, EigensolverError


def lowest_converged(spectrum, n):
    return spectrum.eigenvalues[spectrum.converged][:n]


def test_model_params_validation():
    with pytest.raises(ConfigError):
        ModelParams(j=0.3)
    with pytest.raises(ConfigError):
        ModelParams(omega=0.0)
    params = ModelParams(omega=1.0, omega0=1.0, gamma=1.0, j=10.0)
    assert params.gamma_c == pytest.approx(0.5)
    assert params.hbar_eff == pytest.approx(0.1)
    assert params.phase_space_norm == pytest.approx((2 * np.pi / 10) * (4 * np.pi / 21))


def test_fock_index_layout():
    basis = FockBasisSpec(1.5, 4)
    assert basis.dim == 5 * 4
    assert basis.index(2, 0.5) == 2 * 4 + 2
    assert basis.quantum_numbers(basis.index(3, -1.5)) == (3, -1.5)
    with pytest.raises(ConfigError):
        basis.index(5, 0.5)


def test_uncoupled_spectrum_is_ladder():
    params = ModelParams(gamma=0.0, j=1.0)
    basis = FockBasisSpec(1.0, 3)
    spectrum = diagonalize(build_fock_hamiltonian(params, basis), params=params, basis=basis)
    expected = np.sort([n + m for n in range(4) for m in (-1, 0, 1)])
    np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-12)


def test_hamiltonian_rejects_mismatched_basis(params):
    with pytest.raises(ConfigError):
        build_fock_hamiltonian(params, FockBasisSpec(2.0, 10))


def test_nonsymmetric_matrix_rejected():
    with pytest.raises(EigensolverError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_fock_hamiltonian_symmetric(params, fock_basis):
    H = build_fock_hamiltonian(params, fock_basis)
    assert H.shape == (fock_basis.dim, fock_basis.dim)
    assert abs(H - H.T).max() == 0


def test_displaced_overlaps_unitary_block():
    d = displaced_fock_overlaps(0.7, 60)
    # low block of a unitary: columns far from the cut are normalized
    np.testing.assert_allclose(np.sum(d[:, :10] ** 2, axis=0), 1.0, atol=1e-12)
    assert d[0, 0] == pytest.approx(np.exp(-0.7 ** 2 / 2))


def test_ground_energy_scale(spectrum, params):
    # variational bound from coherent states
    assert spectrum.scaled_energies[0] <= -2.125 + 1e-9
    assert spectrum.scaled_energies[0] > -2.125 - 1.0


def test_convergence_flags_mark_truncation_tail(params):
    basis = FockBasisSpec(params.j, 12)
    spectrum = diagonalize(build_fock_hamiltonian(params, basis), params=params, basis=basis)
    assert spectrum.converged[0]
    assert not spectrum.converged.all()


def test_parity_blocks_give_same_levels(params):
    basis = FockBasisSpec(params.j, 30)
    H = build_fock_hamiltonian(params, basis)
    plain = diagonalize(H, params=params, basis=basis)
    blocked = diagonalize(H, params=params, basis=basis, use_parity=True)
    np.testing.assert_allclose(blocked.eigenvalues, plain.eigenvalues, atol=1e-9)


def test_fock_and_efficient_bases_agree():
    params = ModelParams(j=2.0)
    fock = FockBasisSpec(2.0, 60)
    efficient = EfficientBasisSpec(2.0, 30)
    a = diagonalize(build_hamiltonian(params, fock), params=params, basis=fock)
    b = diagonalize(build_hamiltonian(params, efficient), params=params, basis=efficient)
    np.testing.assert_allclose(lowest_converged(b, 20), lowest_converged(a, 20), atol=1e-8)


@pytest.mark.slow
def test_fock_and_efficient_bases_agree_lowest_150():
    params = ModelParams(j=5.0)
    fock = FockBasisSpec(5.0, 120)
    efficient = EfficientBasisSpec(5.0, 60)
    a = diagonalize(build_fock_hamiltonian(params, fock), params=params, basis=fock)
    b = diagonalize(build_efficient_hamiltonian(params, efficient), params=params, basis=efficient)
    np.testing.assert_allclose(b.eigenvalues[:150], a.eigenvalues[:150], atol=1e-8)


def test_spectrum_persistence(tmp_path, spectrum):
    path = save_spectrum(spectrum, tmp_path / "spectrum")
    assert path.suffix == ".npz"
    assert (tmp_path / "spectrum.json").exists()
    loaded = load_spectrum(tmp_path / "spectrum")
    assert loaded.params == spectrum.params
    assert loaded.basis == spectrum.basis
    np.testing.assert_array_equal(loaded.eigenvalues, spectrum.eigenvalues)
    np.testing.assert_array_equal(loaded.converged, spectrum.converged)


def test_load_missing_spectrum(tmp_path):
    with pytest.raises(ConfigError):
        load_spectrum(tmp_path / "absent")


def test_half_spin_two_level_oracle():
    params = ModelParams(omega=1.3, omega0=0.7, gamma=0.4, j=0.5)
    basis = FockBasisSpec(0.5, 1)
    H = build_fock_hamiltonian(params, basis).toarray()
    # |n, m_z>: (0,-1/2), (0,+1/2), (1,-1/2), (1,+1/2)
    w, w0, g = params.omega, params.omega0, params.gamma
    expected = np.array([
        [-w0 / 2, 0.0, 0.0, g],
        [0.0, w0 / 2, g, 0.0],
        [0.0, g, w - w0 / 2, 0.0],
        [g, 0.0, 0.0, w + w0 / 2],
    ])
    np.testing.assert_allclose(H, expected, atol=1e-12)

    spectrum = diagonalize(H, params=params, basis=basis)
    levels = []
    for a, b in ((-w0 / 2, w + w0 / 2), (w0 / 2, w - w0 / 2)):
        mean, half = (a + b) / 2, np.hypot((b - a) / 2, g)
        levels += [mean - half, mean + half]
    np.testing.assert_allclose(spectrum.eigenvalues, np.sort(levels), atol=1e-12)


def test_hamiltonian_commutes_with_parity(params):
    basis = FockBasisSpec(params.j, 40)
    H = build_fock_hamiltonian(params, basis).tocoo()
    parity = parity_diagonal(basis)
    commutator = H.data * (parity[H.col] - parity[H.row])
    assert np.max(np.abs(commutator)) < 1e-10


def test_ground_energy_decreases_with_truncation(params):
    energies = []
    for n_max in (10, 20, 40, 80):
        basis = FockBasisSpec(params.j, n_max)
        spectrum = diagonalize(build_fock_hamiltonian(params, basis), params=params, basis=basis)
        energies.append(spectrum.eigenvalues[0])
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_converged_count_grows_with_truncation(params):
    counts = []
    for n_max in (20, 40, 80):
        basis = FockBasisSpec(params.j, n_max)
        spectrum = diagonalize(build_fock_hamiltonian(params, basis), params=params, basis=basis)
        counts.append(spectrum.converged_count)
    assert counts == sorted(counts)
    assert counts[-1] > counts[0]


def test_production_basis_dimensions():
    assert FockBasisSpec(30.0, 420).dim == 25681
    assert EfficientBasisSpec(30.0, 200).dim == 12261


def test_efficient_hamiltonian_near_zero_omega0():
    params = ModelParams(omega=1.2, omega0=1e-9, gamma=0.8, j=2.0)
    basis = EfficientBasisSpec(2.0, 10)
    H = build_efficient_hamiltonian(params, basis)
    N = np.repeat(np.arange(basis.levels), basis.spin_dim)
    m_x = np.tile(np.arange(basis.spin_dim) - basis.j, basis.levels)
    expected = params.omega * N - 2 * params.gamma ** 2 * m_x ** 2 / (params.omega * basis.j)
    np.testing.assert_allclose(H.diagonal(), expected, atol=1e-12)
    off_diagonal = H - sparse.diags(H.diagonal())
    assert abs(off_diagonal).max() < 1e-8


def test_convergence_filter_uncoupled_guard_band():
    # gamma = 0: eigenvectors are Fock states |n, m_z>
    params = ModelParams(omega0=0.37, gamma=0.0, j=1.0)
    basis = FockBasisSpec(1.0, 20)
    spectrum = diagonalize(build_fock_hamiltonian(params, basis), params=params, basis=basis)
    n = np.array([basis.quantum_numbers(np.argmax(np.abs(v)))[0] for v in spectrum.eigenvectors.T])
    np.testing.assert_array_equal(spectrum.converged, n <= basis.n_max * (1 - 0.1))
    assert not spectrum.converged[n >= 19].any()


def make_tail_spectrum(basis, weights):
    vectors = np.zeros((basis.dim, len(weights)))
    for col, (index, weight) in enumerate(weights):
        vectors[0, col] = np.sqrt(1 - weight)
        vectors[index, col] = np.sqrt(weight)
    values = np.arange(len(weights), dtype=float)
    return Spectrum(None, basis, values, vectors, np.ones(len(weights), dtype=bool))


def test_convergence_filter_threshold_on_tail():
    basis = FockBasisSpec(0.5, 9)
    top, below = basis.index(9, 0.5), basis.index(8, -0.5)
    spectrum = make_tail_spectrum(basis, [(top, 1e-9), (top, 1e-7), (below, 0.5)])
    np.testing.assert_array_equal(convergence_filter(spectrum), [True, False, True])
    np.testing.assert_array_equal(convergence_filter(spectrum, threshold=1e-6), [True, True, True])
    # a wider band reaches level 8
    np.testing.assert_array_equal(convergence_filter(spectrum, guard_fraction=0.25),
                                  [True, False, False])


def test_convergence_filter_rejects_bad_arguments():
    spectrum = make_tail_spectrum(FockBasisSpec(0.5, 9), [(19, 0.1)])
    with pytest.raises(ConfigError):
        convergence_filter(spectrum, guard_fraction=1.0)
    with pytest.raises(ConfigError):
        convergence_filter(spectrum, threshold=0.0)
