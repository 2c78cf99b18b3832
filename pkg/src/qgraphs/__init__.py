"""Quantum (metric) graph spectra and eigenfunction entropy diagnostics."""

from .errors import (
    BoundViolationError,
    DegenerateCaseError,
    GenerationError,
    NumericalError,
    QGraphError,
    SchemaError,
)
from .graphs import (
    BondIndex,
    EdgeLengths,
    Graph,
    UniformLengths,
    adjacency_spectral_gap,
    complete_graph,
    count_nonbacktracking_paths,
    cycle_graph,
    girth,
    graph_from_edges,
    nonbacktracking_transition_matrix,
    random_regular_graph,
    sample_lengths,
    star_graph,
)
from .scattering import (
    VertexSMatrix,
    custom_smatrix,
    equitransmitting_smatrix,
    legendre_symbol,
    neumann_smatrix,
)
from .quantum import (
    BondMatrix,
    EigenpairRecord,
    QuantumGraph,
    bond_scattering_matrix,
    count_eigenvalues,
    eigenphase_velocities,
    eigenphases,
    equitransmitting_smatrices,
    find_eigenvalues,
    make_quantum_graph,
    markov_eigenvalue_gap,
    markov_matrix,
    markov_spectral_gap,
    monte_carlo_ut_moments,
    neumann_smatrices,
    orbit_sum_entry,
    secular_function,
)
from .entropy import (
    EntropyReport,
    entropy,
    maassen_uffink_bound,
    normalized_entropy,
    quantum_ergodicity_functional,
    variance,
    verify_bounds,
    weighted_length,
)
from .star import (
    AverageEntropyResult,
    StarSpectrumRecord,
    average_entropy_experiment,
    c_neumann_constant,
    equitransmitting_star,
    limit_density_P,
    localization_heuristic_check,
    neumann_star,
    sigma_k_matrix,
    star_amplitudes,
    star_bond_vector,
    star_secular_roots_neumann,
    star_spectrum_records,
)
from .experiments import ExperimentSpec, ExperimentResult, run

__version__ = "0.1.0"
