"""Density-matrix evaluation of Leggett's inequalities for entangled pairs."""
from .canonical import (
    CanonicalState,
    joint_probability,
    make_density,
    make_state,
    paper_pair_correlation,
    singlet_correlation,
)
from .errors import DomainError, KindError, LeggettError, NormalizationError, StructureError
from .hvt import (
    DiscreteModel,
    EstimateReport,
    SubensembleModel,
    exact_averages,
    malus_product_model,
    mc_averages,
    model_leggett_check,
)
from .inequality import (
    AverageTriple,
    InequalityReport,
    SweepRow,
    leggett_bounds,
    leggett_check,
    pm_identity_check,
    quadratic_form_check,
    quantum_sweep,
)
from .qcore import (
    EPS,
    DensityOperator,
    Ket,
    MeasurementSetting,
    Observable,
    density_from_pure,
    expectation,
    joint_expectation,
    kron,
    partial_trace,
    photon_observable,
    purity,
    spin_observable,
)

__version__ = "0.1.0"
