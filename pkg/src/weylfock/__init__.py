"""Phase-space harmonic analysis on a truncated Hermite basis.

Unitary phase-space translations as displacement matrices, the trace pairing
and operator quadrature between operators and phase-space functions, Schatten
spectral diagnostics, quantum-translate independence margins, and the
surface-measure operator sitting exactly at the p = 4 decay threshold.
"""

from .counterexample import (
    CounterexampleReport,
    LevelCurve,
    RayDecayFit,
    build_counterexample,
    char_poly_surface,
    curvature_profile,
    fourier_decay_probe,
    trace_zero_component,
)
from .fock_rep import (
    FockConfig,
    FockOperator,
    hermite_basis_samples,
    hermite_basis_table,
    load_operator,
    rho_adjoint,
    rho_matrix,
    save_operator,
)
from .phase_space import PhasePoint, cocycle, symplectic_form
from .qtranslate import (
    DifferenceSpec,
    characteristic_poly,
    difference_apply,
    gram_matrix,
    independence_margin,
    lattice_difference_spec,
    translate,
)
from .schatten import (
    SpectrumProfile,
    decay_exponent,
    schatten_norm,
    singular_values,
)
from .transforms import (
    WEYL_PLANCHEREL_CONSTANT,
    PhaseFunction,
    PhaseGrid,
    SurfaceMeasure,
    beta_damp,
    fourier_wigner,
    fourier_wigner_at,
    inverse_ordinary_fourier,
    ordinary_fourier,
    symplectic_fourier,
    weyl_correspondence,
    weyl_of_measure,
    weyl_transform,
)

__version__ = "0.1.0"
