import numpy as np
import pytest

from app.classical import MonteCarloConfig, PhasePoint, h_cl, sample_shell
from app.husimi import build_projection_grid
from app.model import FockBasisSpec, ModelParams
from app.renyi import (OccupationResult, bosonic_radius, coherent_lower_bound, coherent_volume,
                       energy_profile, occupation_atomic, occupation_shell, photon_distribution,
                       renyi_volume, renyi_volume_discrete, renyi_volume_phase_space,
                       save_occupations)
from app.states import PureState, coherent_fock_coefficients, energy_moments
from app.model import build_fock_hamiltonian
from app.utils.errors import ConfigError, NormalizationError, ZeroVolumeError

ALPHAS = [0.5, 1.0, 2.0, 3.0]


@pytest.mark.parametrize("alpha", [0.0] + ALPHAS)
def test_uniform_distribution_volume_is_size(alpha):
    assert renyi_volume_discrete(np.full(40, 1 / 40), alpha) == pytest.approx(40)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_delta_distribution_volume_is_one(alpha):
    assert renyi_volume_discrete(np.eye(10)[3], alpha) == pytest.approx(1.0)


def test_discrete_volume_normalization():
    with pytest.raises(NormalizationError):
        renyi_volume_discrete(np.full(10, 0.09), 2.0)
    with pytest.raises(ConfigError):
        renyi_volume_discrete(np.full(10, 0.1), -1.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_scaling_homogeneity(alpha, rng):
    for _ in range(1000):
        probs = rng.random(50)
        probs /= probs.sum()
        k = rng.uniform(0.1, 10.0)
        base = renyi_volume(probs, 1.0, alpha)
        assert renyi_volume(probs / k, k, alpha) == pytest.approx(k * base, rel=1e-12)


def test_volume_decreases_with_alpha_and_stays_below_size(rng):
    probs = rng.random(30) ** 3
    probs /= probs.sum()
    volumes = [renyi_volume_discrete(probs, a) for a in [0.0] + ALPHAS]
    assert volumes[0] == pytest.approx(30)
    assert all(a >= b - 1e-12 for a, b in zip(volumes, volumes[1:]))


def test_coherent_volume_closed_form():
    assert coherent_volume(2.0, 1 / 30) == pytest.approx(0.171188, rel=1e-3)
    # alpha = 1 is the continuous limit of the alpha != 1 expression
    assert coherent_volume(1.0, 1 / 30) == pytest.approx(0.31362, rel=1e-4)
    assert coherent_volume(1.0 + 1e-6, 1 / 30) == pytest.approx(coherent_volume(1.0, 1 / 30), rel=1e-5)
    # leading order (2 pi hbar)^2 * 4 at alpha = 2
    assert coherent_volume(2.0, 1 / 30) == pytest.approx((2 * np.pi / 30) ** 2 * 4, rel=0.03)


def test_coherent_lower_bound_floor():
    assert coherent_lower_bound(2.0, 1 / 30) == coherent_volume(2.0, 1 / 30)
    with pytest.raises(ConfigError):
        coherent_lower_bound(2.0, 1 / 5)


def test_bosonic_radius_vacuum():
    basis = FockBasisSpec(2.0, 20)
    state = PureState(coherent_fock_coefficients(PhasePoint(), basis), basis=basis)
    probs = photon_distribution(state)
    assert probs[0] == pytest.approx(1.0)
    # vacuum mass inside radius R is 1 - exp(-j R^2 / 2)
    assert bosonic_radius(state, 1e-6) == pytest.approx(np.sqrt(2 * np.log(1e6) / 2.0), rel=1e-8)


def test_phase_space_volume_of_coherent_state():
    params = ModelParams(j=2.0)
    basis = FockBasisSpec(2.0, 30)
    state = PureState(coherent_fock_coefficients(PhasePoint(), basis), basis=basis)
    mc = MonteCarloConfig(n_samples=200_000, seed=3)
    for alpha in (1.0, 2.0):
        result = renyi_volume_phase_space(state, alpha, mc, params)
        exact = coherent_volume(alpha, params.hbar_eff)
        assert abs(result.value - exact) <= 4 * result.stderr + 0.01 * exact
        assert not result.bounded
        assert result.config["captured_mass"] == pytest.approx(1.0, abs=0.05)


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_phase_space_volume_of_coherent_state_full_scale(alpha):
    params = ModelParams(j=30.0)
    basis = FockBasisSpec(30.0, 40)
    state = PureState(coherent_fock_coefficients(PhasePoint(), basis), basis=basis)
    result = renyi_volume_phase_space(state, alpha, MonteCarloConfig(n_samples=2_000_000, workers=4),
                                      params)
    assert result.value == pytest.approx(coherent_volume(alpha, 1 / 30), rel=0.02)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_uniform_atomic_distribution_occupies_disk(params, alpha):
    grid = build_projection_grid("atomic", 8, params.j)
    result = occupation_atomic(np.ones(grid.size), alpha, grid, params)
    assert result.value == pytest.approx(1.0, abs=1e-3)
    assert result.reference_volume == pytest.approx(4 * np.pi)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_uniform_shell_distribution_occupies_shell(params, alpha):
    shell = sample_shell(0.0, 20_000, 5, params)
    nu = shell.volume().value / (4 * np.pi ** 2)
    result = occupation_shell(np.ones(shell.size), 0.0, alpha, shell, nu, params)
    assert result.value == pytest.approx(1.0, abs=1e-9)
    assert result.within_bounds()


def test_coherent_state_occupations_bounded(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    state = PureState(coherent_fock_coefficients(x, fock_basis), basis=fock_basis)
    grid = build_projection_grid("atomic", 8, params.j)
    eps = h_cl(x, params)
    shell = sample_shell(eps, 40_000, 1, params)
    nu = shell.volume().value / (4 * np.pi ** 2)
    for alpha in ALPHAS:
        atomic = occupation_atomic(state, alpha, grid, params)
        assert 0 < atomic.value <= 1
        on_shell = occupation_shell(state, eps, alpha, shell, nu, params)
        assert on_shell.within_bounds()


def test_shell_occupation_errors(params):
    shell = sample_shell(0.0, 5000, 0, params)
    with pytest.raises(ZeroVolumeError):
        occupation_shell(np.zeros(shell.size), 0.0, 2.0, shell, 1.0, params)
    with pytest.raises(ConfigError):
        occupation_shell(np.ones(shell.size), 0.5, 2.0, shell, 1.0, params)


def test_coherent_energy_profile_peaks_near_centre(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    state = PureState(coherent_fock_coefficients(x, fock_basis), basis=fock_basis)
    mean, sigma = energy_moments(state, build_fock_hamiltonian(params, fock_basis))
    grid = np.linspace(mean - 3 * sigma, mean + 3 * sigma, 13)
    grid = grid[grid > -2.1]
    shells = [sample_shell(e, 20_000, 2, params) for e in grid]
    profile = energy_profile(state, grid, shells, workers=2)
    assert (profile["c_eps"] >= 0).all()
    peak = profile.loc[profile["c_eps"].idxmax(), "epsilon"]
    assert abs(peak - mean) <= 2 * sigma


def test_occupation_result_records(tmp_path):
    bounded = OccupationResult(value=0.4, alpha=2.0, reference_volume=4 * np.pi,
                               normalization=0.1, stderr=0.01)
    unbounded = OccupationResult(value=0.2, alpha=2.0, reference_volume=float("inf"),
                                 normalization=0.1)
    assert bounded.bounded and bounded.within_bounds()
    assert not OccupationResult(1.2, 2.0, 1.0, 1.0, stderr=0.01).within_bounds()
    assert unbounded.to_record()["reference_volume"] is None
    path = save_occupations([bounded, unbounded], tmp_path / "occupations.csv",
                            [{"state": "a"}, {"state": "b"}])
    assert path.exists()


def test_atomic_occupation_ignores_bosonic_centroid(params, fock_basis):
    grid = build_projection_grid("atomic", 8, params.j)
    values = []
    for q, p in ((0.0, 0.0), (1.0, -0.5), (-0.8, 0.9)):
        x = PhasePoint(q, p, 0.3, -0.4)
        state = PureState(coherent_fock_coefficients(x, fock_basis), basis=fock_basis)
        values.append(occupation_atomic(state, 2.0, grid, params).value)
    np.testing.assert_allclose(values, values[0], atol=1e-6)


def test_energy_profile_reports_shell_occupations(params, fock_basis):
    x = PhasePoint(-0.2, 0.0, 0.3, 0.0)
    state = PureState(coherent_fock_coefficients(x, fock_basis), basis=fock_basis)
    eps = h_cl(x, params)
    grid = [eps - 0.3, eps, eps + 0.3]
    shells = [sample_shell(e, 20_000, 2, params) for e in grid]
    densities = [s.volume().value / (4 * np.pi ** 2) for s in shells]
    profile = energy_profile(state, grid, shells, alphas=[2.0], densities=densities, params=params)
    assert {"l_2", "l_2_stderr"} <= set(profile.columns)
    centre = profile.loc[1]
    assert 0 < centre["l_2"] <= 1 + 3 * centre["l_2_stderr"]

    direct = occupation_shell(state, eps, 2.0, shells[1], densities[1], params)
    assert centre["l_2"] == pytest.approx(direct.value, rel=1e-12)
    records = profile.attrs["occupations"]
    assert len(records) == int(profile["l_2"].notna().sum())
    assert all(isinstance(r, OccupationResult) for _, r in records)


def test_energy_profile_occupations_need_densities(params, fock_basis):
    state = PureState(coherent_fock_coefficients(PhasePoint(), fock_basis), basis=fock_basis)
    shells = [sample_shell(0.0, 2000, 0, params)]
    with pytest.raises(ConfigError):
        energy_profile(state, [0.0], shells, alphas=[2.0])
