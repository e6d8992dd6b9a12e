"""Shared fixtures and independent oracles for the test-suite."""

import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from antisym.lattice import HamiltonianFamily, SiteGraph, build_chain, build_ho2, build_ring


@pytest.fixture
def ring4():
    return build_ring(4)


@pytest.fixture
def chain4():
    return build_chain(4)


@pytest.fixture
def ho2():
    return build_ho2()


def ring_closed_form(gamma):
    """Ring eigenvalues: -+sqrt(4 - gamma^2) and -+i*gamma."""
    r = np.sqrt(complex(4 - gamma**2))
    return np.array([-r, r, -1j * gamma, 1j * gamma])


def chain_closed_form(gamma):
    """Open-chain eigenvalues, with the square roots continued past the EPs."""
    a = np.sqrt(complex(-2 * gamma**2 + math.sqrt(5) + 3)) / math.sqrt(2)
    b = np.sqrt(complex(-2 * gamma**2 - math.sqrt(5) + 3)) / math.sqrt(2)
    return np.array([-a, a, -b, b])


def multiset_distance(a, b):
    """Largest deviation under the optimal one-to-one matching of two complex multisets."""
    a = np.asarray(list(a), dtype=complex)
    b = np.asarray(list(b), dtype=complex)
    assert a.shape == b.shape
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if a.size else 0.0


def cofactor_det(m):
    """Determinant by Laplace expansion along the first row (exact arithmetic path)."""
    m = [list(r) for r in m]
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def brute_force_automorphisms(graph):
    w = graph.coupling_matrix()
    n = graph.n
    out = []
    for p in itertools.permutations(range(n)):
        if all(w[p[i], p[j]] == w[i, j] for i in range(n) for j in range(n)):
            out.append(p)
    return out


def random_graph(rng, n, p=0.5, weights=(1.0,), signature=None):
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, float(rng.choice(weights))))
    if signature is None:
        signature = [float(s) for s in rng.choice([-1.0, 0.0, 1.0], size=n)]
    return SiteGraph(n, tuple(edges), tuple(signature))


def random_pt_lattice(rng, n, p=0.5):
    """A lattice with a conjugating permutation built in.

    Pick a permutation whose cycles all have even length, make the edge set
    and weights invariant under it, and alternate the signature sign along
    each cycle.
    """
    sites = list(rng.permutation(n))
    cycles = []
    while len(sites) >= 2:
        length = 2 * int(rng.integers(1, len(sites) // 2 + 1))
        cycles.append(sites[:length])
        sites = sites[length:]
    perm = list(range(n))
    signature = [0.0] * n
    for cyc in cycles:
        mag = float(rng.choice([0.5, 1.0, 2.0]))
        for k, site in enumerate(cyc):
            perm[site] = cyc[(k + 1) % len(cyc)]
            signature[site] = mag if k % 2 == 0 else -mag
    # a leftover odd site is fixed by perm and must carry zero signature

    def image(i, j):
        a, b = perm[i], perm[j]
        return (min(a, b), max(a, b))

    weights = {}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in weights or rng.random() >= p:
                continue
            w = float(rng.choice([1.0, 1.5, -0.5]))
            orbit = [(i, j)]
            while True:
                nxt = image(*orbit[-1])
                if nxt == orbit[0]:
                    break
                orbit.append(nxt)
            for e in orbit:
                weights[e] = w
    edges = tuple((i, j, w) for (i, j), w in sorted(weights.items()))
    return HamiltonianFamily(SiteGraph(n, edges, tuple(signature))), tuple(perm)


AUDIT = {"calls": 0}


def audit_trace_det(m, spectrum):
    m = np.asarray(m, dtype=complex)
    vals = spectrum.as_array()
    norm = float(np.linalg.norm(m))
    assert abs(vals.sum() - np.trace(m)) <= 1e-9 * norm + 1e-300, "trace identity violated"
    if 0 < m.shape[0] <= 8:
        det = complex(cofactor_det(m.tolist()))
        assert abs(np.prod(vals) - det) <= 1e-8 * max(1.0, abs(det)), "determinant identity violated"
    AUDIT["calls"] += 1


@pytest.fixture(autouse=True)
def audited_eigensolver(monkeypatch, request):
    """Check trace and determinant identities on every eigensolver call in the suite."""
    import importlib

    mods = [importlib.import_module(f"antisym.{name}") for name in ("eigen", "sweep", "cli")]
    original = mods[0].eigenvalues

    def wrapped(m):
        spec = original(m)
        audit_trace_det(m, spec)
        return spec

    test_module = request.module
    if getattr(test_module, "eigenvalues", None) is original:
        mods.append(test_module)
    for mod in mods:
        monkeypatch.setattr(mod, "eigenvalues", wrapped)
    yield


SUITE_BUDGET = 60.0
_SESSION = {}


def pytest_sessionstart(session):
    import time

    _SESSION["start"] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    import time

    elapsed = time.perf_counter() - _SESSION["start"]
    _SESSION["elapsed"] = elapsed
    if elapsed >= SUITE_BUDGET and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = list(getattr(mod, "RESULTS", []))
    if not lines:
        return
    elapsed = _SESSION.get("elapsed", 0.0)
    ok = elapsed < SUITE_BUDGET
    lines.append(f"[{'PASS' if ok else 'FAIL'}] total suite runtime: {elapsed:.1f} s (< {SUITE_BUDGET:.0f} s)")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
