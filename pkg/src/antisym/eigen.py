"""Dense eigenvalue routines with residual verification.

Eigenvalues come from LAPACK (balanced Hessenberg reduction followed by
shifted QR).  Every returned value is then checked against the matrix:
the smallest singular value of ``M - lam*I`` is the exact residual of the
best unit vector for ``lam``, and it must not exceed ``1e-10 * ||M||_F``.

Eigenvalues belonging to a nearly defective cluster (an exceptional point
or its immediate vicinity) are only accurate to about ``sqrt(eps)`` in
double precision.  Those spectra are recomputed with mpmath at higher
working precision before the residual check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

__all__ = [
    "SolverError",
    "ConvergenceError",
    "Spectrum",
    "RealityReport",
    "eigenvalues",
    "symmetric_eigensystem",
    "classify_reality",
    "canonical_order",
    "condition_numbers",
    "DEFAULT_REALITY_TOL",
    "RESIDUAL_TOL",
    "MAX_DIM",
]

log = logging.getLogger(__name__)

MAX_DIM = 64
RESIDUAL_TOL = 1e-10
DEFAULT_REALITY_TOL = 1e-9

# eigenvalue condition number above which double precision is not trusted
ILL_CONDITIONED = 1e4
# extended-precision refinement is cubic in mpmath; keep it to desk scale
_REFINE_MAX_DIM = 24
_REFINE_DPS = 40
# parts this small relative to ||M||_F are rounding noise
_SNAP = 1e-14


class SolverError(RuntimeError):
    """Raised when an eigen-decomposition cannot be trusted."""


class ConvergenceError(SolverError):
    def __init__(self, message: str, worst_residual: float):
        self.worst_residual = worst_residual
        super().__init__(f"{message} (worst residual {worst_residual:.3e})")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in canonical order plus the worst verified residual."""

    values: tuple[complex, ...]
    residual_bound: float

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


@dataclass(frozen=True)
class RealityReport:
    real_count: int
    pair_count: int
    unpaired: tuple[complex, ...]
    tol: float

    @property
    def unbroken(self) -> bool:
        return self.pair_count == 0 and not self.unpaired


def _spectral_scale(values) -> float:
    values = np.asarray(values)
    if values.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(values))))


def canonical_order(values, tol: float = DEFAULT_REALITY_TOL) -> np.ndarray:
    """Sort ascending by real part, breaking ties by imaginary part.

    Real parts closer than ``tol * scale`` count as tied, otherwise rounding
    noise in the real part of a conjugate pair would decide its order.
    """
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return values
    thr = tol * _spectral_scale(values)
    by_re = values[np.lexsort((values.imag, values.real))]
    out = []
    run = [by_re[0]]
    for v in by_re[1:]:
        if v.real - run[-1].real <= thr:
            run.append(v)
        else:
            out.extend(sorted(run, key=lambda z: z.imag))
            run = [v]
    out.extend(sorted(run, key=lambda z: z.imag))
    return np.array(out, dtype=complex)


def _snap(values: np.ndarray, norm: float) -> np.ndarray:
    # relative to ||M||_F so the snap never threatens the residual bound
    thr = _SNAP * norm
    re = np.where(np.abs(values.real) <= thr, 0.0, values.real)
    im = np.where(np.abs(values.imag) <= thr, 0.0, values.imag)
    return re + 1j * im


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def condition_numbers(m) -> np.ndarray:
    """Eigenvalue condition numbers ``1/|y^H x|`` for unit left/right eigenvectors.

    Close to 1 for normal matrices, unbounded near a defective eigenvalue.
    """
    m = _as_square(m)
    _, left, right = scipy.linalg.eig(m, left=True, right=True)
    overlap = np.abs(np.einsum("ij,ij->j", left.conj(), right))
    with np.errstate(divide="ignore"):
        return 1.0 / overlap


def _needs_refinement(m: np.ndarray) -> bool:
    return bool(np.any(condition_numbers(m) > ILL_CONDITIONED))


def _refined_eigenvalues(m: np.ndarray) -> np.ndarray:
    with mpmath.workdps(_REFINE_DPS):
        mp = mpmath.matrix(m.tolist())
        ev = mpmath.eig(mp, left=False, right=False)
        return np.array([complex(z) for z in ev], dtype=complex)


def frobenius(m: np.ndarray) -> float:
    """Frobenius norm without underflow for matrices with subnormal-scale entries."""
    peak = float(np.max(np.abs(m), initial=0.0))
    if peak == 0.0:
        return 0.0
    return peak * float(np.linalg.norm(m / peak))


def _worst_residual(m: np.ndarray, values: np.ndarray) -> float:
    eye = np.eye(m.shape[0])
    worst = 0.0
    for lam in values:
        sigma = np.linalg.svd(m - lam * eye, compute_uv=False)[-1]
        worst = max(worst, float(sigma))
    return worst


def eigenvalues(m) -> Spectrum:
    """All eigenvalues of a small dense matrix, verified and canonically ordered."""
    m = _as_square(m).astype(complex)
    n = m.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"matrix dimension {n} exceeds the supported maximum {MAX_DIM}")
    if n == 0:
        return Spectrum((), 0.0)

    vals = np.linalg.eigvals(m)
    if n <= _REFINE_MAX_DIM and _needs_refinement(m):
        log.debug("ill-conditioned eigenvalues, refining at %d digits", _REFINE_DPS)
        vals = _refined_eigenvalues(m)

    norm = frobenius(m)
    vals = canonical_order(_snap(vals, norm))
    worst = _worst_residual(m, vals)
    bound = RESIDUAL_TOL * norm
    if worst > bound:
        raise ConvergenceError("eigenvalue residual check failed", worst)
    return Spectrum(tuple(complex(v) for v in vals), worst)


def symmetric_eigensystem(m) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns of a real symmetric matrix."""
    m = _as_square(m)
    if np.iscomplexobj(m):
        if np.any(m.imag != 0):
            raise ValueError("symmetric_eigensystem needs a real matrix")
        m = m.real
    m = m.astype(float)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")

    w, v = np.linalg.eigh(m)
    norm = float(np.linalg.norm(m))
    res = float(np.linalg.norm(m @ v - v * w))
    if res > RESIDUAL_TOL * max(norm, 1.0):
        raise ConvergenceError("symmetric eigen-decomposition residual too large", res)
    orth = float(np.max(np.abs(v.T @ v - np.eye(m.shape[0])), initial=0.0))
    if orth > 1e-10:
        raise ConvergenceError("eigenvectors are not orthonormal", orth)
    return w, v


def classify_reality(spectrum, tol: float = DEFAULT_REALITY_TOL) -> RealityReport:
    """Count real eigenvalues and complex-conjugate pairs.

    A value is real when ``|Im| <= tol * scale`` with ``scale = max(1, max|lam|)``.
    The rest are matched greedily, closest ``|lam_i - conj(lam_j)|`` first.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    values = np.asarray(list(spectrum), dtype=complex)
    thr = tol * _spectral_scale(values)
    real_mask = np.abs(values.imag) <= thr
    rest = values[~real_mask]

    candidates = []
    for a in range(len(rest)):
        for b in range(a + 1, len(rest)):
            d = abs(rest[a] - np.conj(rest[b]))
            if d <= thr:
                candidates.append((d, a, b))
    candidates.sort()
    used = set()
    pairs = 0
    for _, a, b in candidates:
        if a in used or b in used:
            continue
        used.update((a, b))
        pairs += 1
    unpaired = tuple(complex(rest[k]) for k in range(len(rest)) if k not in used)
    return RealityReport(int(real_mask.sum()), pairs, unpaired, tol)
