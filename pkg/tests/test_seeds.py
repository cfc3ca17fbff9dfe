import numpy as np
import pytest

from boundgrow.seeds import (
    SeedError,
    SeedSet,
    load_seed_set,
    make_seed,
    parse_seed,
    select_bound_vertices,
)


def test_parse_path4_document():
    seed = parse_seed({"m_v": 4, "edges": [[0, 1], [1, 2], [2, 3]]})
    assert seed.m_v == 4
    assert seed.m_e == 3
    assert seed.bound_order == (0, 1, 2, 3)


def test_single_vertex_seed_is_valid():
    seed = parse_seed({"m_v": 1, "edges": []})
    assert seed.m_v == 1 and seed.m_e == 0


def test_disconnected_seed_rejected():
    with pytest.raises(SeedError, match="connected"):
        make_seed(4, [[0, 1], [2, 3]])


def test_duplicate_edge_rejected():
    with pytest.raises(SeedError, match="duplicate"):
        make_seed(3, [[0, 1], [1, 0], [1, 2]])


def test_self_loop_rejected():
    with pytest.raises(SeedError, match="self-loop"):
        make_seed(3, [[1, 1], [0, 1], [1, 2]])


def test_bad_bound_order_rejected():
    with pytest.raises(SeedError, match="bound_order"):
        make_seed(3, [[0, 1], [1, 2]], bound_order=[0, 1, 1])


def test_out_of_range_vertex_rejected():
    with pytest.raises(SeedError, match="outside"):
        make_seed(3, [[0, 5]])


def test_unknown_field_rejected():
    with pytest.raises(SeedError, match="unknown"):
        parse_seed({"m_v": 2, "edges": [[0, 1]], "color": "red"})


def test_load_seed_set_and_policies():
    seed_set = load_seed_set([{"m_v": 2, "edges": [[0, 1]]}, {"m_v": 1, "edges": []}])
    assert len(seed_set.seeds) == 2
    assert not seed_set.homogeneous
    assert seed_set.min_m_v == 1
    with pytest.raises(SeedError, match="assignment_policy"):
        SeedSet(seed_set.seeds, assignment_policy="alphabetical")
    with pytest.raises(SeedError, match="at least one"):
        SeedSet(())


def test_descending_degree_selection_on_path4(path4):
    # degrees are 1,2,2,1: the interior vertices win, ties break by index
    sel = select_bound_vertices(path4, 2, "by_descending_degree")
    assert sel.tolist() == [1, 2]
    assert path4.top_degree_sum(2) == 4
    assert path4.max_degree() == 2


def test_select_all_vertices_when_r_equals_m_v(path4):
    for policy in ("by_bound_order", "by_descending_degree"):
        sel = select_bound_vertices(path4, 4, policy)
        assert sorted(sel.tolist()) == [0, 1, 2, 3]
    sel = select_bound_vertices(path4, 4, "uniform_random", np.random.default_rng(0))
    assert sorted(sel.tolist()) == [0, 1, 2, 3]


def test_bound_order_selection_uses_prefix():
    seed = make_seed(3, [[0, 1], [1, 2]], bound_order=[2, 0, 1])
    assert select_bound_vertices(seed, 2, "by_bound_order").tolist() == [2, 0]


def test_uniform_random_selection_reproducible(path4):
    a = select_bound_vertices(path4, 2, "uniform_random", np.random.default_rng(123))
    b = select_bound_vertices(path4, 2, "uniform_random", np.random.default_rng(123))
    assert a.tolist() == b.tolist()
    assert len(set(a.tolist())) == 2


def test_selection_errors(path4):
    with pytest.raises(SeedError):
        select_bound_vertices(path4, 5, "by_bound_order")
    with pytest.raises(SeedError):
        select_bound_vertices(path4, 2, "by_popularity")
    with pytest.raises(ValueError, match="rng"):
        select_bound_vertices(path4, 2, "uniform_random")


def test_selection_policies_are_pure(path4):
    first = select_bound_vertices(path4, 3, "by_descending_degree")
    second = select_bound_vertices(path4, 3, "by_descending_degree")
    assert first.tolist() == second.tolist() == [1, 2, 0]
