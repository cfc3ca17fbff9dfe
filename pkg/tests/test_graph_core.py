import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundgrow.graph import (
    DuplicateEdgeError,
    MissingEdgeError,
    NetworkModel,
    SelfLoopError,
    UnknownVertexError,
)


def model_with(n, edges, bound=()):
    m = NetworkModel()
    m.add_vertices(n)
    for u, v in edges:
        m.add_edge(u, v, bound=(u, v) in bound or (v, u) in bound)
    return m


def test_add_edge_smallest_case():
    m = NetworkModel()
    m.add_vertices(2)
    m.add_edge(0, 1, bound=True)
    assert m.n_edges == 1
    assert m.n_bound_edges == 1
    assert m.has_edge(0, 1) and m.has_edge(1, 0)


def test_add_edge_rejects_self_loop():
    m = model_with(2, [])
    with pytest.raises(SelfLoopError):
        m.add_edge(0, 0)


def test_add_edge_rejects_duplicate():
    m = model_with(2, [(0, 1)])
    with pytest.raises(DuplicateEdgeError):
        m.add_edge(1, 0)


def test_add_edge_unknown_vertex():
    m = model_with(2, [])
    with pytest.raises(UnknownVertexError):
        m.add_edge(0, 5)


def test_remove_edge_keeps_endpoints():
    m = model_with(3, [(0, 1), (0, 2), (1, 2)])
    m.remove_edge(0, 1)
    assert m.n_vertices == 3
    assert m.n_edges == 2
    assert not m.has_edge(0, 1)
    assert m.degree(0) == 1 and m.degree(1) == 1 and m.degree(2) == 2


def test_remove_only_edge_leaves_isolated_vertices():
    m = model_with(2, [(0, 1)])
    m.remove_edge(0, 1)
    assert m.n_vertices == 2
    assert m.n_edges == 0
    assert m.degree(0) == 0


def test_remove_edge_twice_errors():
    m = model_with(3, [(0, 1)])
    m.remove_edge(0, 1)
    with pytest.raises(MissingEdgeError):
        m.remove_edge(0, 1)


def test_remove_bound_edge_clears_bound_status():
    m = model_with(2, [(0, 1)], bound=[(0, 1)])
    m.remove_edge(0, 1)
    assert m.n_bound_edges == 0
    m.assert_simple()


def test_degree_cases():
    tri = model_with(3, [(0, 1), (0, 2), (1, 2)])
    assert tri.degree(0) == 2
    lonely = model_with(1, [])
    assert lonely.degree(0) == 0
    star = model_with(6, [(0, i) for i in range(1, 6)])
    assert star.degree(0) == 5
    with pytest.raises(UnknownVertexError):
        star.degree(17)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_diameter_cases(backend):
    tri = model_with(3, [(0, 1), (0, 2), (1, 2)])
    assert tri.diameter(backend=backend) == 1
    p4 = model_with(4, [(0, 1), (1, 2), (2, 3)])
    assert p4.diameter(backend=backend) == 3
    two = model_with(4, [(0, 1), (2, 3)])
    assert math.isinf(two.diameter(backend=backend))


def test_diameter_trivial_sizes():
    assert NetworkModel().diameter() == 0
    single = model_with(1, [])
    assert single.diameter() == 0


def test_remove_then_add_restores_adjacency():
    m = model_with(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    before = sorted(m.edge_keys().tolist())
    m.remove_edge(1, 2)
    m.add_edge(1, 2)
    assert sorted(m.edge_keys().tolist()) == before
    m.assert_simple()


def test_bulk_block_append_and_remove():
    m = NetworkModel()
    m.add_vertices(6)
    m.add_edge_block(np.array([0, 1, 2]), np.array([3, 4, 5]))
    m.set_bound_edges(np.array([0]), np.array([3]))
    m.assert_simple()
    m.remove_edges_at(np.array([1]))
    assert m.n_edges == 2
    assert m.degree(1) == 0 and m.degree(4) == 0
    # single-edge ops still work after bulk ops invalidated the index
    assert m.has_edge(0, 3) and not m.has_edge(1, 4)
    m.add_edge(1, 4)
    m.assert_simple()


def test_edge_list_export_golden(tmp_path):
    m = model_with(4, [(2, 3), (0, 1), (1, 2)], bound=[(1, 2)])
    edges = tmp_path / "edges.txt"
    bounds = tmp_path / "bound.txt"
    m.write_edge_list(edges)
    m.write_bound_edge_list(bounds)
    assert edges.read_bytes() == b"0 1\n1 2\n2 3\n"
    assert bounds.read_bytes() == b"1 2\n"


@st.composite
def edge_ops(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    ops = draw(
        st.lists(
            st.tuples(
                st.sampled_from(["add", "remove"]),
                st.integers(0, n - 1),
                st.integers(0, n - 1),
            ),
            max_size=30,
        )
    )
    return n, ops


@given(edge_ops())
@settings(max_examples=60, deadline=None)
def test_random_op_sequences_keep_graph_simple(case):
    n, ops = case
    m = NetworkModel()
    m.add_vertices(n)
    vertices_before = m.n_vertices
    for op, u, v in ops:
        try:
            if op == "add":
                m.add_edge(u, v)
            else:
                m.remove_edge(u, v)
        except (SelfLoopError, DuplicateEdgeError, MissingEdgeError):
            pass
        m.assert_simple()
    assert m.n_vertices == vertices_before  # vertex count never decreases
