"""Signed lattice graphs and the gain/loss Hamiltonian family.

A lattice is a set of ``n`` sites joined by real couplings, plus a real
gain/loss weight per site.  The family built on it is

    H(gamma) = A + 1j * gamma * diag(signature)

with ``A`` the real symmetric coupling matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from numbers import Real

import numpy as np

__all__ = [
    "LatticeError",
    "LatticeFormatError",
    "SiteGraph",
    "HamiltonianFamily",
    "build_ring",
    "build_chain",
    "build_ho2",
    "hamiltonian_at",
    "load_graph",
    "dump_graph",
]


class LatticeError(ValueError):
    """Invalid lattice definition."""


class LatticeFormatError(LatticeError):
    """Serialized lattice could not be parsed; ``location`` points at the culprit."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _is_real_number(x) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool)


@dataclass(frozen=True)
class SiteGraph:
    """Sites ``0..n-1``, weighted edges ``(i, j, w)`` with ``i < j``, per-site signature."""

    n: int
    edges: tuple[tuple[int, int, float], ...]
    signature: tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise LatticeError(f"site count must be a positive integer, got {self.n!r}")
        canon = []
        seen = set()
        for k, edge in enumerate(self.edges):
            if len(edge) != 3:
                raise LatticeError(f"edge {k} must be an (i, j, w) triple")
            i, j, w = edge
            if not _is_real_number(w):
                raise LatticeError(f"edge {k}: coupling must be real, got {w!r}")
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise LatticeError(f"edge {k}: self-loop on site {i}")
            if i > j:
                i, j = j, i
            if i < 0 or j >= self.n:
                raise LatticeError(f"edge {k}: site index out of range 0..{self.n - 1}")
            if not math.isfinite(w) or w == 0.0:
                raise LatticeError(f"edge {k}: coupling must be finite and nonzero")
            if (i, j) in seen:
                raise LatticeError(f"edge {k}: duplicate edge ({i}, {j})")
            seen.add((i, j))
            canon.append((i, j, w))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))

        if len(self.signature) != self.n:
            raise LatticeError(
                f"signature has length {len(self.signature)}, expected n = {self.n}"
            )
        sig = []
        for k, s in enumerate(self.signature):
            if not _is_real_number(s) or not math.isfinite(s):
                raise LatticeError(f"signature[{k}] must be a finite real, got {s!r}")
            sig.append(float(s))
        object.__setattr__(self, "signature", tuple(sig))

    def coupling_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            a[i, j] = a[j, i] = w
        return a

    def signature_array(self) -> np.ndarray:
        return np.asarray(self.signature, dtype=float)


@dataclass(frozen=True)
class HamiltonianFamily:
    """The one-parameter family ``H(gamma) = A + i*gamma*diag(s)`` on a graph."""

    graph: SiteGraph
    name: str = field(default="custom", compare=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def hamiltonian_at(self, gamma: float) -> np.ndarray:
        return hamiltonian_at(self, gamma)


def hamiltonian_at(family: HamiltonianFamily, gamma: float) -> np.ndarray:
    """Dense complex matrix of ``family`` at gain/loss strength ``gamma``."""
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma}")
    g = family.graph
    h = g.coupling_matrix().astype(complex)
    h[np.diag_indices(g.n)] = 1j * gamma * g.signature_array()
    return h


def _alternating(n: int) -> tuple[float, ...]:
    return tuple(1.0 if k % 2 == 0 else -1.0 for k in range(n))


def build_ring(n: int = 4) -> HamiltonianFamily:
    """Periodic ring of ``n`` sites with alternating gain and loss."""
    if not isinstance(n, int) or n < 4 or n % 2:
        raise LatticeError(f"ring needs an even site count n >= 4, got {n!r}")
    edges = [(k, k + 1, 1.0) for k in range(n - 1)] + [(0, n - 1, 1.0)]
    return HamiltonianFamily(SiteGraph(n, tuple(edges), _alternating(n)), name=f"ring{n}")


def build_chain(n: int = 4) -> HamiltonianFamily:
    """Open chain of ``n`` sites, alternating signature starting with gain."""
    if not isinstance(n, int) or n < 2:
        raise LatticeError(f"chain needs n >= 2 sites, got {n!r}")
    edges = tuple((k, k + 1, 1.0) for k in range(n - 1))
    return HamiltonianFamily(SiteGraph(n, edges, _alternating(n)), name=f"chain{n}")


def build_ho2() -> HamiltonianFamily:
    """The 4-chain with sites 1 and 2 swapped: gain on 0, 1 and loss on 2, 3."""
    graph = SiteGraph(
        4,
        ((0, 2, 1.0), (1, 2, 1.0), (1, 3, 1.0)),
        (1.0, 1.0, -1.0, -1.0),
    )
    return HamiltonianFamily(graph, name="ho2")


def dump_graph(graph: SiteGraph) -> str:
    """Canonical text form; ``load_graph(dump_graph(g)) == g``."""
    payload = {
        "n": graph.n,
        "edges": [[i, j, w] for i, j, w in graph.edges],
        "signature": list(graph.signature),
    }
    return json.dumps(payload, indent=None, separators=(", ", ": ")) + "\n"


def load_graph(text: str) -> SiteGraph:
    """Parse the lattice file format (a JSON object with n, edges, signature)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise LatticeFormatError("top level must be an object", "$")
    for key in ("n", "edges", "signature"):
        if key not in data:
            raise LatticeFormatError(f"missing field '{key}'", "$")
    extra = sorted(set(data) - {"n", "edges", "signature"})
    if extra:
        raise LatticeFormatError(f"unknown field '{extra[0]}'", "$")

    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise LatticeFormatError("must be a positive integer", "$.n")

    edges = data["edges"]
    if not isinstance(edges, list):
        raise LatticeFormatError("must be an array of [i, j, w] triples", "$.edges")
    seen = set()
    parsed = []
    for k, edge in enumerate(edges):
        loc = f"$.edges[{k}]"
        if not isinstance(edge, list) or len(edge) != 3:
            raise LatticeFormatError("must be an [i, j, w] triple", loc)
        i, j, w = edge
        for name, idx in (("i", i), ("j", j)):
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise LatticeFormatError(f"site index {name} must be an integer", loc)
            if not 0 <= idx < n:
                raise LatticeFormatError(f"site index {idx} out of range 0..{n - 1}", loc)
        if i == j:
            raise LatticeFormatError(f"self-loop on site {i}", loc)
        if not _is_real_number(w):
            raise LatticeFormatError("coupling must be a real number", loc)
        if not math.isfinite(w) or w == 0:
            raise LatticeFormatError("coupling must be finite and nonzero", loc)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise LatticeFormatError(f"duplicate edge {key}", loc)
        seen.add(key)
        parsed.append((key[0], key[1], float(w)))

    sig = data["signature"]
    if not isinstance(sig, list):
        raise LatticeFormatError("must be an array of reals", "$.signature")
    if len(sig) != n:
        raise LatticeFormatError(f"length {len(sig)} does not match n = {n}", "$.signature")
    for k, s in enumerate(sig):
        if not _is_real_number(s) or not math.isfinite(s):
            raise LatticeFormatError("must be a finite real", f"$.signature[{k}]")

    return SiteGraph(n, tuple(parsed), tuple(float(s) for s in sig))
