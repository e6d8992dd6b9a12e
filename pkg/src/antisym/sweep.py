"""Spectra across the gain/loss parameter, phase labels and exceptional points."""

from __future__ import annotations

import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .eigen import (
    DEFAULT_REALITY_TOL,
    SolverError,
    Spectrum,
    classify_reality,
    condition_numbers,
    eigenvalues,
)
from .lattice import HamiltonianFamily, build_chain, build_ring, hamiltonian_at

__all__ = [
    "UNBROKEN",
    "BROKEN",
    "SweepResult",
    "ExceptionalPoint",
    "SweepError",
    "EPDiagnosticWarning",
    "sweep",
    "find_exceptional_points",
    "figure_data",
    "format_table",
    "min_gap",
    "FIGURES",
]

log = logging.getLogger(__name__)

UNBROKEN = "Unbroken"
BROKEN = "Broken"

BRACKET_WIDTH = 1e-10
MAX_EP_GAP = 1e-4
# a coalescence with well-conditioned eigenvalues is a diagonalizable crossing
MIN_EP_CONDITION = 1e3
DEDUP_TOL = 1e-9

FIGURES = {"fig2": "ring4", "fig4": "chain4"}
FIGURE_RANGE = (0.0, 2.0)
FIGURE_POINTS = 201


class SweepError(RuntimeError):
    def __init__(self, gamma: float, cause: Exception):
        self.gamma = gamma
        super().__init__(f"eigensolver failed at gamma = {gamma!r}: {cause}")


class EPDiagnosticWarning(RuntimeWarning):
    """A real-count change that did not bisect to an eigenvalue coalescence."""


@dataclass(frozen=True)
class SweepResult:
    gammas: tuple[float, ...]
    spectra: tuple[Spectrum, ...]
    phases: tuple[str, ...]
    real_counts: tuple[int, ...]


@dataclass(frozen=True)
class ExceptionalPoint:
    gamma: float
    bracket_width: float
    min_gap: float


def _workers() -> int:
    raw = os.environ.get("ANTISYM_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        log.warning("ignoring non-integer ANTISYM_THREADS=%r", raw)
        return 1


def _solve(f: HamiltonianFamily, gamma: float) -> Spectrum:
    try:
        return eigenvalues(hamiltonian_at(f, gamma))
    except SolverError as exc:
        raise SweepError(gamma, exc) from exc


def _real_count(f: HamiltonianFamily, gamma: float, tol: float) -> int:
    return classify_reality(_solve(f, gamma), tol).real_count


def sweep(
    f: HamiltonianFamily,
    lo: float,
    hi: float,
    steps: int,
    tol: float = DEFAULT_REALITY_TOL,
) -> SweepResult:
    """Solve ``H(gamma)`` on ``steps`` uniform points from ``lo`` to ``hi`` inclusive."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got {lo}, {hi}")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    gammas = [float(g) for g in np.linspace(lo, hi, steps)]

    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(lambda g: _solve(f, g), gammas))
    else:
        spectra = [_solve(f, g) for g in gammas]

    counts = [classify_reality(s, tol).real_count for s in spectra]
    phases = [UNBROKEN if c == f.n else BROKEN for c in counts]
    return SweepResult(tuple(gammas), tuple(spectra), tuple(phases), tuple(counts))


def min_gap(spectrum: Spectrum) -> float:
    v = spectrum.as_array()
    if v.size < 2:
        return float("inf")
    d = np.abs(v[:, None] - v[None, :])
    d[np.diag_indices(v.size)] = np.inf
    return float(d.min())


def find_exceptional_points(
    f: HamiltonianFamily,
    lo: float,
    hi: float,
    grid: int = 64,
    tol: float = DEFAULT_REALITY_TOL,
    diagnostics: list | None = None,
) -> list[ExceptionalPoint]:
    """Bracket every change of the real-eigenvalue count on a uniform grid.

    Each changing grid cell is bisected on the count until the bracket is no
    wider than 1e-10; the midpoint is reported.  A bracket whose midpoint
    shows no eigenvalue coalescence (smallest gap above 1e-4), or only a
    diagonalizable one (all eigenvalues well conditioned, as at the
    degenerate Hermitian limit of the ring), is not an exceptional point;
    it is reported through ``diagnostics`` and a warning.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got {lo}, {hi}")
    if grid < 16:
        raise ValueError("grid must be at least 16")

    coarse = sweep(f, lo, hi, grid, tol)
    found: list[ExceptionalPoint] = []
    for k in range(grid - 1):
        c_left, c_right = coarse.real_counts[k], coarse.real_counts[k + 1]
        if c_left == c_right:
            continue
        a, b = coarse.gammas[k], coarse.gammas[k + 1]
        while b - a > BRACKET_WIDTH:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if _real_count(f, mid, tol) != c_left:
                b = mid
            else:
                a = mid
        width = b - a
        center = 0.5 * (a + b)
        gap = min_gap(_solve(f, center))
        cond = float(np.max(condition_numbers(hamiltonian_at(f, center))))
        if width > BRACKET_WIDTH or gap > MAX_EP_GAP or cond < MIN_EP_CONDITION:
            message = (
                f"real count changes {c_left} -> {c_right} in [{a!r}, {b!r}] "
                f"without an exceptional point: smallest eigenvalue gap {gap:.3e}, "
                f"largest eigenvalue condition number {cond:.3e}"
            )
            if diagnostics is not None:
                diagnostics.append(message)
            warnings.warn(message, EPDiagnosticWarning, stacklevel=2)
            continue
        if found and abs(center - found[-1].gamma) <= DEDUP_TOL:
            continue
        found.append(ExceptionalPoint(center, width, gap))
    return found


_FIGURE_MODELS = {"ring4": lambda: build_ring(4), "chain4": lambda: build_chain(4)}


def figure_data(fig: str, model: str | None = None) -> list[tuple[float, ...]]:
    """Rows ``(gamma, Re l_1..l_n, Im l_1..l_n)`` on 201 points of [0, 2].

    ``fig2`` is drawn from ``ring4`` and ``fig4`` from ``chain4`` unless
    ``model`` names the other built-in.
    """
    if fig not in FIGURES:
        raise KeyError(f"unknown figure {fig!r}; choose from {sorted(FIGURES)}")
    model = FIGURES[fig] if model is None else model
    if model not in _FIGURE_MODELS:
        raise KeyError(f"unknown figure model {model!r}; choose from {sorted(_FIGURE_MODELS)}")
    result = sweep(_FIGURE_MODELS[model](), *FIGURE_RANGE, FIGURE_POINTS)
    rows = []
    for gamma, spec in zip(result.gammas, result.spectra):
        v = spec.as_array()
        rows.append((gamma, *v.real.tolist(), *v.imag.tolist()))
    return rows


def _fmt(x: float, digits: int) -> str:
    text = f"{x:.{digits}g}"
    return "0" if text in ("0", "-0") else text


def format_table(rows: Sequence[Sequence[float]], n: int, digits: int = 9) -> str:
    header = ["gamma"] + [f"re_{k}" for k in range(1, n + 1)] + [f"im_{k}" for k in range(1, n + 1)]
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x, digits) for x in row) for row in rows)
    return "\n".join(lines) + "\n"
