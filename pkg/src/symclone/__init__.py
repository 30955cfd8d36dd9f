"""symclone: optimal quantum cloning of photonic qudits by beam-splitter
symmetrization, with an exact few-photon engine and a Monte Carlo bench.
"""

from .hilbert import (
    DensityMatrix,
    LabeledBasis,
    PureState,
    basis_adapted_to,
    basis_computational,
    basis_four,
    basis_logical,
    basis_state,
    fidelity_pure,
    inner,
    maximally_mixed,
    unbiasedness_check,
)
from .bosonic import (
    DistinguishabilityModel,
    FockState,
    ModeIndex,
    add_photon,
    beam_splitter,
    coalescence_enhancement,
    hom_curve,
    identical_photons,
    postselect_same_port,
    reduced_single_photon,
    single_photon,
)
from .cloning import (
    CloningOutcome,
    CloningSpec,
    cascade_clone,
    clone_analytic,
    clone_oracle,
    f_clon,
    f_est,
)
from .experiment import (
    CountsTable,
    EstimationResult,
    ExperimentConfig,
    FidelityTable,
    apply_infidelity,
    estimate_probabilities,
    randomize_ancilla,
    replicate_table,
    run_cloning_experiment,
    write_counts_csv,
)

__version__ = "0.1.0"
