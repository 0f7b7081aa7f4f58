from .config import MonteCarloConfig
from .phase_space import (PhasePoint, bloch_angles, check_bloch, coupling_coefficient, energy,
                          ground_state_energy, h_cl)
from .sampling import Estimate, batch_estimates, batch_means, block_generator, map_blocks
from .shell import (ShellSample, bounding_box, branch_of, branch_root, density_of_states,
                    finite_difference_density, p_bound, phase_space_volume_below, sample_shell,
                    save_shell_sample, shell_roots_q, weyl_count)

__all__ = [
    "MonteCarloConfig", "PhasePoint", "bloch_angles", "check_bloch", "coupling_coefficient",
    "energy", "ground_state_energy", "h_cl", "Estimate", "batch_estimates", "batch_means",
    "block_generator", "map_blocks", "ShellSample", "bounding_box", "branch_of", "branch_root",
    "density_of_states", "finite_difference_density", "p_bound", "phase_space_volume_below",
    "sample_shell", "save_shell_sample", "shell_roots_q", "weyl_count",
]
