"""Entanglement-witness game simulator.

Build witnesses for two- and three-qubit states, play the referee/player
payoff game with honest (quantum) or cheating (classical) strategies,
estimate the average payoff -Tr(rho W) by Monte Carlo, reconstruct the shared
state by linear-inversion tomography, and export the correlation-space
geometry of the standard figures.
"""

from .backends import ACTIVE_BACKEND, resolve_backend
from .game import (
    ChshReport,
    GameConfig,
    RoundRecord,
    Strategy,
    Transcript,
    chsh_value,
    classical_cheat_strategy,
    empirical_payoff,
    exact_average_payoff,
    honest_strategy,
    outcome_distribution,
    run_game,
)
from .geometry import (
    FigureData,
    Projection,
    RangeModel,
    export_figure_data,
    project,
    range_model,
    werner_line_intersection,
)
from .multiparty import expected_payoff3, ghz_state, ghz_witness, honest_strategy3, run_game3
from .qcore import (
    CorrelationTable,
    DensityMatrix,
    bell_psi_plus,
    from_pauli_coefficients,
    hermitian_eigensystem,
    make_werner,
    maximally_mixed,
    partial_transpose,
    pauli_coefficients,
    pauli_string,
    random_density_matrix,
    trace_distance,
)
from .tomography import (
    Estimate,
    IncompleteTomographyError,
    Moments,
    accumulate,
    linear_inversion,
    project_psd,
    reconstruct,
    reconstruction_error,
)
from .witness import (
    CheckReport,
    PauliWeights,
    PPTStateError,
    Witness,
    check_witness,
    chsh_witness,
    expected_payoff,
    fixed_chsh_witness,
    ppt_witness,
    random_separable,
    strengthened_chsh_witness,
    werner_witness,
    xz_chsh_observables,
)

__version__ = "0.1.0"
