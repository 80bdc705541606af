"""Dense state/operator algebra, propagators, thermal states, and counting."""

from .channels import (Channel, amplitude_damping_channel, compose,
                       dephasing_channel, depolarizing_channel,
                       random_channel, unitary_channel)
from .counting import OccupancyResult, boltzmann_occupancy, multiplicity
from .evolution import (IntegrationFailure, LindbladPath, evolve_state,
                        lindblad_evolve, lindblad_rhs, propagate_unitary)
from .gibbs import (GibbsResult, entropies, gibbs_state, mutual_information,
                    relative_entropy, vn_entropy)
from .operators import (DensityState, InvalidInputError, Operator,
                        SpectralDecomposition, degenerate_blocks, density,
                        eig_herm, embed, expm_herm_factor, funm_herm,
                        hermitian_op, identity, kron, ladder_ops, max_abs,
                        maximally_mixed, number_op, partial_trace,
                        position_momentum, pure_state, sigma_minus, sigma_plus,
                        sigma_x, sigma_y, sigma_z, spectral)
from .schedule import Schedule

__all__ = [
    "Channel", "DensityState", "GibbsResult", "IntegrationFailure",
    "InvalidInputError", "LindbladPath", "OccupancyResult", "Operator",
    "Schedule", "SpectralDecomposition", "amplitude_damping_channel",
    "boltzmann_occupancy", "compose", "degenerate_blocks", "density",
    "dephasing_channel", "depolarizing_channel", "eig_herm", "embed",
    "entropies", "evolve_state", "expm_herm_factor", "funm_herm",
    "gibbs_state", "hermitian_op", "identity", "kron", "ladder_ops",
    "lindblad_evolve", "lindblad_rhs", "max_abs", "maximally_mixed",
    "multiplicity", "mutual_information", "number_op", "partial_trace",
    "position_momentum", "propagate_unitary", "pure_state", "random_channel",
    "relative_entropy", "sigma_minus", "sigma_plus", "sigma_x", "sigma_y",
    "sigma_z", "spectral", "unitary_channel", "vn_entropy",
]
