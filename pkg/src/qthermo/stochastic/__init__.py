"""Classical stochastic thermodynamics and the phase-space entropy FT."""

from ._streams import chunked, normal_block, trajectory_rng
from .crooks import (CrooksReport, MarkovChainSpec, crooks_markov,
                     exact_work_distribution, two_state_spec)
from .hamiltonian_je import (HamiltonianJeResult, hamiltonian_jarzynski,
                             sudden_quench_lhs_closed_form)
from .langevin import (FdtReport, LangevinParams, Potential,
                       StochasticInstability, TrajectoryEnsemble, fdt_check,
                       langevin_simulate)
from .wigner import (DraggedOscillatorParams, RegimeError, WignerFtResult,
                     wigner_entropy_ft)

__all__ = [
    "CrooksReport", "DraggedOscillatorParams", "FdtReport",
    "HamiltonianJeResult", "LangevinParams", "MarkovChainSpec", "Potential",
    "RegimeError", "StochasticInstability", "TrajectoryEnsemble", "chunked",
    "crooks_markov", "exact_work_distribution", "fdt_check",
    "hamiltonian_jarzynski", "langevin_simulate", "normal_block",
    "sudden_quench_lhs_closed_form", "trajectory_rng", "two_state_spec",
    "wigner_entropy_ft",
]
