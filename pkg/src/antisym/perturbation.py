"""First-order degenerate perturbation theory in the gain/loss strength.

``H(gamma) = H(0) + gamma * W`` with ``W = i*diag(s)``.  Inside each
degenerate level of the real symmetric ``H(0)`` the first-order shifts are
the eigenvalues of ``V_c^T W V_c``, an anti-Hermitian matrix, so they are
purely imaginary.  A nonzero shift means the level splits into a complex
conjugate pair for arbitrarily small ``gamma``: the antiunitary symmetry is
predicted to be extremely broken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import symmetric_eigensystem
from .lattice import HamiltonianFamily, hamiltonian_at

__all__ = [
    "Cluster",
    "PerturbationReport",
    "degenerate_clusters",
    "first_order_corrections",
    "CLUSTER_TOL",
    "BROKEN_THRESHOLD",
]

CLUSTER_TOL = 1e-8
BROKEN_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Cluster:
    energy: float
    multiplicity: int
    start: int


@dataclass(frozen=True)
class PerturbationReport:
    clusters: tuple[Cluster, ...]
    corrections: tuple[tuple[complex, ...], ...]
    extremely_broken: bool

    def flat_corrections(self) -> list[complex]:
        return [c for group in self.corrections for c in group]

    def first_order_levels(self, gamma: float) -> list[complex]:
        """``E0 + gamma * lambda1`` for every level, cluster by cluster."""
        out = []
        for cl, group in zip(self.clusters, self.corrections):
            out.extend(cl.energy + gamma * c for c in group)
        return out


def degenerate_clusters(eigs, tol: float = CLUSTER_TOL) -> list[Cluster]:
    """Merge runs of ascending eigenvalues whose consecutive gaps are at most ``tol * scale``."""
    eigs = np.asarray(eigs, dtype=float)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if eigs.size == 0:
        return []
    if np.any(np.diff(eigs) < 0):
        raise ValueError("eigenvalues must be ascending")
    thr = tol * max(1.0, float(np.max(np.abs(eigs))))
    clusters = []
    start = 0
    for k in range(1, eigs.size + 1):
        if k == eigs.size or eigs[k] - eigs[k - 1] > thr:
            clusters.append(Cluster(float(np.mean(eigs[start:k])), k - start, start))
            start = k
    return clusters


def first_order_corrections(f: HamiltonianFamily, tol: float = CLUSTER_TOL) -> PerturbationReport:
    h0 = hamiltonian_at(f, 0.0).real
    energies, vectors = symmetric_eigensystem(h0)
    w = 1j * np.diag(f.graph.signature_array())

    clusters = degenerate_clusters(energies, tol)
    corrections = []
    for cl in clusters:
        basis = vectors[:, cl.start : cl.start + cl.multiplicity]
        projected = basis.T @ w @ basis
        # anti-Hermitian: eigenvalues of the Hermitian -i*M, times i
        shifts = 1j * np.linalg.eigvalsh(-1j * projected)
        corrections.append(tuple(complex(0.0, z.imag) for z in shifts))

    broken = any(abs(c.imag) > BROKEN_THRESHOLD for group in corrections for c in group)
    return PerturbationReport(tuple(clusters), tuple(corrections), broken)
