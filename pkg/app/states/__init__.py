from .coherent import (bloch_amplitudes, coherent_fock_coefficients, coherent_overlap_squared,
                       glauber_amplitudes, glauber_tail)
from .dynamics import (energy_moments, eigen_coefficients, evolve, evolve_series,
                       survival_probability, time_average_kernel)
from .mixtures import (BlochSaturation, PairMixture, phase_space_distance, saturate_bloch,
                       separation_family, sunflower_lattice)
from .state import (EnsembleState, PureState, QuantumState, TimeAveragedState,
                    time_average_weights)

__all__ = [
    "bloch_amplitudes", "coherent_fock_coefficients", "coherent_overlap_squared",
    "glauber_amplitudes", "glauber_tail", "energy_moments", "eigen_coefficients", "evolve",
    "evolve_series", "survival_probability", "time_average_kernel", "BlochSaturation",
    "PairMixture", "phase_space_distance", "saturate_bloch", "separation_family",
    "sunflower_lattice", "EnsembleState", "PureState", "QuantumState", "TimeAveragedState",
    "time_average_weights",
]
