"""tracelab: a numerical laboratory for trace identities.

Discretize symmetric integral kernels on [0,1], compute their spectra,
and verify at desk scale that the sum of eigenvalues equals the integral
of the kernel diagonal — then push the same idea through the Basel sum,
uniform kernel reconstruction, the heat-trace/theta identity, and the
wave-trace/billiard-length correspondence on rectangles.
"""

from .billiard import (
    ClosedOrbit,
    LengthSpectrum,
    Table,
    Trajectory,
    disc,
    is_closed,
    length_spectrum,
    rectangle,
    simulate,
)
from .heat import (
    HeatTraceReport,
    ThetaEvaluation,
    heat_evolve,
    heat_trace_check,
    theta,
    theta_transform_residual,
)
from .kernels import (
    KernelSpec,
    apply_kernel,
    diagonal_trace,
    eval_green,
    eval_heat,
    eval_heat_periodic,
    green_dirichlet,
    heat_circle,
    heat_line,
    tabulated,
)
from .linalg import (
    EigenDecomposition,
    NumericalError,
    SymMatrix,
    eigh_eigen,
    jacobi_eigen,
    matrix_trace_identity,
    spectral_outer_reconstruction,
)
from .mercer import (
    BaselReport,
    MercerReport,
    basel_via_trace,
    mercer_reconstruct,
    trace_chain_check,
)
from .nystrom import (
    OperatorSpectrum,
    TraceFormulaReport,
    discretize,
    operator_spectrum,
    trace_formula_check,
)
from .quadrature import MIDPOINT, TRAPEZOID, Grid, inner_product, integrate, make_grid
from .sturm import (
    DIRICHLET_BASIS,
    PERIODIC_BASIS,
    SpectralBasis,
    residual_check,
    solve_direct,
    solve_spectral,
)
from .wavetrace import (
    LaplaceSpectrum,
    LengthMatchReport,
    TraceSignal,
    compare_lengths,
    detect_peaks,
    rectangle_spectrum,
    smoothed_wave_trace,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedOrbit", "LengthSpectrum", "Table", "Trajectory", "disc",
    "is_closed", "length_spectrum", "rectangle", "simulate",
    "HeatTraceReport", "ThetaEvaluation", "heat_evolve", "heat_trace_check",
    "theta", "theta_transform_residual",
    "KernelSpec", "apply_kernel", "diagonal_trace", "eval_green", "eval_heat",
    "eval_heat_periodic", "green_dirichlet", "heat_circle", "heat_line",
    "tabulated",
    "EigenDecomposition", "NumericalError", "SymMatrix", "eigh_eigen",
    "jacobi_eigen", "matrix_trace_identity", "spectral_outer_reconstruction",
    "BaselReport", "MercerReport", "basel_via_trace", "mercer_reconstruct",
    "trace_chain_check",
    "OperatorSpectrum", "TraceFormulaReport", "discretize",
    "operator_spectrum", "trace_formula_check",
    "MIDPOINT", "TRAPEZOID", "Grid", "inner_product", "integrate", "make_grid",
    "DIRICHLET_BASIS", "PERIODIC_BASIS", "SpectralBasis", "residual_check",
    "solve_direct", "solve_spectral",
    "LaplaceSpectrum", "LengthMatchReport", "TraceSignal", "compare_lengths",
    "detect_peaks", "rectangle_spectrum", "smoothed_wave_trace",
]
