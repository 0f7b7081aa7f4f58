from .occupations import energy_profile, occupation_atomic, occupation_shell, save_occupations
from .results import OccupationResult
from .volumes import (bosonic_radius, coherent_lower_bound, coherent_volume, moment_integrand,
                      photon_distribution, renyi_volume, renyi_volume_discrete,
                      renyi_volume_phase_space, volume_from_moments)

__all__ = [
    "energy_profile", "occupation_atomic", "occupation_shell", "save_occupations",
    "OccupationResult", "bosonic_radius", "coherent_lower_bound", "coherent_volume",
    "moment_integrand", "photon_distribution", "renyi_volume", "renyi_volume_discrete",
    "renyi_volume_phase_space", "volume_from_moments",
]
