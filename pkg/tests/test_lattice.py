import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antisym.lattice import (
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

I = 1j

# written out by hand from the matrices printed for the ring and the chain
RING4_G1 = np.array(
    [[I, 1, 0, 1], [1, -I, 1, 0], [0, 1, I, 1], [1, 0, 1, -I]],
)
CHAIN4_G1 = np.array(
    [[I, 1, 0, 0], [1, -I, 1, 0], [0, 1, I, 1], [0, 0, 1, -I]],
)
HO2_G1 = np.array(
    [[I, 0, 1, 0], [0, I, 1, 1], [1, 1, -I, 0], [0, 1, 0, -I]],
)


def test_ring4_matches_printed_matrix():
    np.testing.assert_array_equal(hamiltonian_at(build_ring(4), 1.0), RING4_G1)


def test_chain4_matches_printed_matrix():
    np.testing.assert_array_equal(hamiltonian_at(build_chain(4), 1.0), CHAIN4_G1)


def test_ho2_matches_printed_matrix():
    h = hamiltonian_at(build_ho2(), 1.0)
    np.testing.assert_array_equal(h, HO2_G1)
    assert h[0, 2] == 1


@pytest.mark.parametrize("gamma", [-1.3, 0.25, 0.618, 2.0, 7.5])
def test_builtins_reproduce_printed_matrices_at_any_gamma(gamma):
    for family, printed in [(build_ring(4), RING4_G1), (build_chain(4), CHAIN4_G1)]:
        expected = printed.real + 1j * gamma * printed.imag
        np.testing.assert_array_equal(hamiltonian_at(family, gamma), expected)


def test_hermitian_limits_are_real_adjacency():
    ring = hamiltonian_at(build_ring(4), 0.0)
    assert np.all(ring.imag == 0)
    np.testing.assert_array_equal(ring.real, RING4_G1.real)
    np.testing.assert_array_equal(hamiltonian_at(build_chain(2), 0.0), [[0, 1], [1, 0]])
    ho2 = hamiltonian_at(build_ho2(), 0.0)
    assert np.all(ho2.imag == 0) and np.array_equal(ho2.real, ho2.real.T)
    assert ho2.real.sum() == 6  # three unit edges, counted twice


def test_ring6_assembly():
    h = hamiltonian_at(build_ring(6), 0.5)
    expected = np.zeros((6, 6), dtype=complex)
    for k in range(6):
        expected[k, (k + 1) % 6] = expected[(k + 1) % 6, k] = 1
        expected[k, k] = 0.5j * (1 if k % 2 == 0 else -1)
    np.testing.assert_array_equal(h, expected)
    assert np.trace(h) == 0


def test_chain3_assembly():
    h = hamiltonian_at(build_chain(3), 2.0)
    np.testing.assert_array_equal(np.diag(h), [2j, -2j, 2j])
    np.testing.assert_array_equal(h - np.diag(np.diag(h)), [[0, 1, 0], [1, 0, 1], [0, 1, 0]])


def test_chain4_golden_ratio_point():
    h = hamiltonian_at(build_chain(4), 0.618)
    assert np.trace(h) == 0
    np.testing.assert_array_equal(np.diag(h), [0.618j, -0.618j, 0.618j, -0.618j])
    assert np.all(np.diag(h).real == 0)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7])
def test_ring_rejects_bad_sizes(n):
    with pytest.raises(LatticeError, match="even"):
        build_ring(n)


@pytest.mark.parametrize("n", [0, 1])
def test_chain_rejects_short(n):
    with pytest.raises(LatticeError, match="n >= 2"):
        build_chain(n)


def test_sitegraph_canonicalizes_edges():
    g = SiteGraph(3, ((2, 0, 1.0), (1, 0, 2.0)), (1, 0, -1))
    assert g.edges == ((0, 1, 2.0), (0, 2, 1.0))
    assert g.signature == (1.0, 0.0, -1.0)


@pytest.mark.parametrize(
    "edges, signature, match",
    [
        (((0, 0, 1.0),), (1, 1), "self-loop"),
        (((0, 2, 1.0),), (1, 1), "out of range"),
        (((0, 1, 1.0), (1, 0, 1.0)), (1, 1), "duplicate"),
        (((0, 1, 0.0),), (1, 1), "nonzero"),
        (((0, 1, math.inf),), (1, 1), "finite"),
        (((0, 1, 1j),), (1, 1), "real"),
        (((0, 1, 1.0),), (1,), "length"),
        (((0, 1, 1.0),), (1, math.nan), "finite"),
    ],
)
def test_sitegraph_validation(edges, signature, match):
    with pytest.raises(LatticeError, match=match):
        SiteGraph(2, edges, signature)


@settings(max_examples=50, deadline=None)
@given(gamma=st.floats(-50, 50, allow_nan=False), which=st.sampled_from(["ring4", "ring6", "chain5", "ho2"]))
def test_family_invariants(gamma, which):
    family = {
        "ring4": build_ring(4),
        "ring6": build_ring(6),
        "chain5": build_chain(5),
        "ho2": build_ho2(),
    }[which]
    h = hamiltonian_at(family, gamma)
    h0 = hamiltonian_at(family, 0.0)
    s = family.graph.signature_array()
    np.testing.assert_array_equal(h, h.T)
    assert np.all(h0.imag == 0)
    np.testing.assert_allclose(h - h0, 1j * gamma * np.diag(s), atol=0)
    assert abs(np.trace(h) - 1j * gamma * s.sum()) <= 1e-12
    np.testing.assert_array_equal(h.conj(), hamiltonian_at(family, -gamma))


def test_gamma_must_be_finite(ring4):
    with pytest.raises(ValueError):
        hamiltonian_at(ring4, math.inf)


def test_roundtrip_ring4(ring4):
    text = dump_graph(ring4.graph)
    g = load_graph(text)
    assert g == ring4.graph
    assert len(g.edges) == 4
    assert g.signature == (1, -1, 1, -1)
    assert dump_graph(g) == text


def test_roundtrip_sorts_edges():
    text = '{"n": 3, "edges": [[2, 1, 0.5], [0, 1, 1]], "signature": [1, -1, 0]}'
    g = load_graph(text)
    assert g.edges == ((0, 1, 1.0), (1, 2, 0.5))
    canon = dump_graph(g)
    assert dump_graph(load_graph(canon)) == canon


@pytest.mark.parametrize(
    "text, location, match",
    [
        ('{"n": 4, "edges": [[3, 3, 1]], "signature": [1, -1, 1, -1]}', "$.edges[0]", "self-loop"),
        ('{"n": 4, "edges": [[0, 1, 1]], "signature": [1, -1, 1]}', "$.signature", "length"),
        ('{"n": 4, "edges": [[0, 4, 1]], "signature": [1, -1, 1, -1]}', "$.edges[0]", "out of range"),
        ('{"n": 3, "edges": [[0, 1, 1], [1, 0, 2]], "signature": [1, -1, 1]}', "$.edges[1]", "duplicate"),
        ('{"n": 2, "edges": [[0, 1, [1, 2]]], "signature": [1, -1]}', "$.edges[0]", "real"),
        ('{"n": 2, "edges": [[0, 1]], "signature": [1, -1]}', "$.edges[0]", "triple"),
        ('{"n": 2, "edges": [[0, 1, "1"]], "signature": [1, -1]}', "$.edges[0]", "real"),
        ('{"n": 0, "edges": [], "signature": []}', "$.n", "positive"),
        ('{"n": 2, "edges": []}', "$", "signature"),
        ('{"n": 2, "edges": [], "signature": [1, "x"]}', "$.signature[1]", "finite real"),
        ('[1, 2]', "$", "object"),
        ('{"n": 2, "edges": [], "signature": [1, 1], "extra": 1}', "$", "unknown"),
        ('{"n": 2,\n "edges": [,]}', "line 2", "Expecting value"),
    ],
)
def test_load_errors_carry_location(text, location, match):
    with pytest.raises(LatticeFormatError, match=match) as info:
        load_graph(text)
    assert info.value.location.startswith(location)


def test_family_name_does_not_affect_equality(ring4):
    assert HamiltonianFamily(ring4.graph, name="other") == ring4
