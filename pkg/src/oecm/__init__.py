"""Observable equilibration complexity for quenched spin-1/2 chains."""

from ._kernels import BACKEND
from .complexity import (
    BoundReport,
    ComplexityRecord,
    asymptotic_bound,
    classical_complexity,
    l1_distance,
    mean_oecm_series,
    oecm,
    oecm_of_mean_series,
    shannon_entropy,
    theorem1_bound,
)
from .config import ExperimentConfig, TypicalityConfig, load_config, validate
from .dynamics import (
    EnergyBasisState,
    EquilibriumState,
    TimeGrid,
    dephase,
    effective_dimension,
    evolve,
    exact_time_averaged_probabilities,
    prepare,
    probability_series,
    running_average,
    time_average,
)
from .errors import ConfigError, DomainError, NumericalError
from .experiment import RunSummary, run
from .hamiltonian import (
    SpectralDecomposition,
    SpectralStatistics,
    SpinChainSpec,
    build_ising,
    diagonalize,
    gap_count,
    spectral_factor,
    spectral_statistics,
)
from .hilbert import PureState, embed_single_site, pauli, product_state
from .observables import (
    ObservableDecomposition,
    decompose_observable,
    equilibrium_probabilities,
    expectation,
    magnetization_observable,
    outcome_probabilities,
)
from .typicality import TypicalityReport, deviation_experiment, haar_random_state

__version__ = "0.1.0"
