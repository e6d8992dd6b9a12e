"""Permutation symmetries of gain/loss Hamiltonians.

A site permutation ``P`` that is an automorphism of the coupling graph either
keeps the signature (``P^-1 H P = H``, an ordinary unitary symmetry), flips it
(``P^-1 H P = H*``, so ``P`` times complex conjugation is an antiunitary
symmetry), or does neither.  Conjugating permutations of order two are the
generalized-parity candidates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .groups import GroupInfo, SitePermutation, build_group
from .lattice import HamiltonianFamily, SiteGraph, hamiltonian_at

__all__ = [
    "SizeLimitError",
    "SymmetryReport",
    "enumerate_automorphisms",
    "classify_symmetries",
    "find_relabeling",
    "EXHAUSTIVE_MAX_N",
    "BACKTRACK_MAX_N",
]

EXHAUSTIVE_MAX_N = 10
BACKTRACK_MAX_N = 24
RELABEL_MAX_N = 10
MAX_AUTOMORPHISMS = 100_000


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetryReport:
    commuting: tuple[SitePermutation, ...]
    conjugating: tuple[SitePermutation, ...]
    parities: tuple[SitePermutation, ...]
    group0: GroupInfo


def _row_keys(m: np.ndarray) -> list[tuple]:
    # cheap vertex invariant: diagonal entry plus the sorted off-diagonal row
    keys = []
    for i in range(m.shape[0]):
        off = sorted((z.real, z.imag) for k, z in enumerate(m[i]) if k != i)
        keys.append(((m[i, i].real, m[i, i].imag), tuple(off)))
    return keys


def _isomorphisms(a: np.ndarray, b: np.ndarray) -> Iterator[tuple[int, ...]]:
    """Permutations ``p`` with ``b[p[i], p[j]] == a[i, j]`` for all ``i, j``, in lexicographic order."""
    n = a.shape[0]
    a = a.astype(complex)
    b = b.astype(complex)
    keys_a = _row_keys(a)
    keys_b = _row_keys(b)
    perm = [-1] * n
    used = [False] * n

    def extend(k: int):
        if k == n:
            yield tuple(perm)
            return
        for v in range(n):
            if used[v] or keys_b[v] != keys_a[k]:
                continue
            if all(b[v, perm[l]] == a[k, l] and b[perm[l], v] == a[l, k] for l in range(k)):
                perm[k] = v
                used[v] = True
                yield from extend(k + 1)
                used[v] = False
        perm[k] = -1

    yield from extend(0)


def _preserves_weights(w: np.ndarray, p: tuple[int, ...]) -> bool:
    idx = np.asarray(p)
    return bool(np.array_equal(w[np.ix_(idx, idx)], w))


def enumerate_automorphisms(g: SiteGraph, mode: str = "backtrack") -> list[SitePermutation]:
    """All site permutations preserving every coupling exactly, sorted lexicographically.

    ``mode="exhaustive"`` filters all ``n!`` permutations (``n <= 10``);
    ``mode="backtrack"`` extends partial maps site by site (``n <= 24``).
    """
    w = g.coupling_matrix()
    if mode == "exhaustive":
        if g.n > EXHAUSTIVE_MAX_N:
            raise SizeLimitError(f"exhaustive mode supports n <= {EXHAUSTIVE_MAX_N}, got {g.n}")
        found = (p for p in itertools.permutations(range(g.n)) if _preserves_weights(w, p))
    elif mode == "backtrack":
        if g.n > BACKTRACK_MAX_N:
            raise SizeLimitError(f"backtracking mode supports n <= {BACKTRACK_MAX_N}, got {g.n}")
        found = _isomorphisms(w, w)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    result = []
    for p in found:
        result.append(SitePermutation(p))
        if len(result) > MAX_AUTOMORPHISMS:
            raise SizeLimitError(f"more than {MAX_AUTOMORPHISMS} automorphisms")
    return result


def classify_symmetries(f: HamiltonianFamily) -> SymmetryReport:
    """Split graph automorphisms by how they act on the signature."""
    s = f.graph.signature
    commuting = []
    conjugating = []
    for p in enumerate_automorphisms(f.graph):
        image = [s[p.perm[j]] for j in range(f.n)]
        if all(x == y for x, y in zip(image, s)):
            commuting.append(p)
        if all(x == -y for x, y in zip(image, s)):
            conjugating.append(p)
    parities = [p for p in conjugating if p.order() == 2]
    group0 = build_group(set(commuting) | set(conjugating))
    return SymmetryReport(tuple(commuting), tuple(conjugating), tuple(parities), group0)


def find_relabeling(a: HamiltonianFamily, b: HamiltonianFamily) -> SitePermutation | None:
    """Lexicographically first ``P`` with ``P H_a(gamma) P^-1 = H_b(gamma)``, or ``None``."""
    if a.n != b.n:
        raise ValueError(f"families have different site counts ({a.n} vs {b.n})")
    if a.n > RELABEL_MAX_N:
        raise SizeLimitError(f"relabeling search supports n <= {RELABEL_MAX_N}, got {a.n}")
    if len(a.graph.edges) != len(b.graph.edges):
        return None
    # H(1) carries the couplings in its real part and the signature on its
    # imaginary diagonal, so matching it matches the whole family
    for p in _isomorphisms(hamiltonian_at(a, 1.0), hamiltonian_at(b, 1.0)):
        u = SitePermutation(p).matrix()
        if all(
            np.array_equal(u @ hamiltonian_at(a, gamma) @ u.T, hamiltonian_at(b, gamma))
            for gamma in (0.0, 1.0)
        ):
            return SitePermutation(p)
    return None
