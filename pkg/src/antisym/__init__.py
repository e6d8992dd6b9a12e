"""Antiunitary symmetry analysis of gain/loss lattice Hamiltonians."""

__version__ = "0.1.0"

from .eigen import (
    ConvergenceError,
    RealityReport,
    SolverError,
    Spectrum,
    classify_reality,
    eigenvalues,
    symmetric_eigensystem,
)
from .groups import GroupInfo, SitePermutation, build_group, identify_group, irrep_dimensions
from .lattice import (
    HamiltonianFamily,
    LatticeError,
    LatticeFormatError,
    SiteGraph,
    build_chain,
    build_ho2,
    build_ring,
    dump_graph,
    hamiltonian_at,
    load_graph,
)
from .perturbation import PerturbationReport, degenerate_clusters, first_order_corrections
from .sweep import ExceptionalPoint, SweepResult, figure_data, find_exceptional_points, sweep
from .symmetry import SymmetryReport, classify_symmetries, enumerate_automorphisms, find_relabeling
