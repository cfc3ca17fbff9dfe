from fractions import Fraction

import numpy as np
import pytest

from boundgrow.engine import (
    ConfigError,
    GenerationError,
    GrowthConfig,
    StepTrace,
    grow_step,
    half_up,
    init_model,
    parse_probability,
    run,
)
from boundgrow.predictor import ModelParams, counts_deterministic
from boundgrow.seeds import SeedSet, make_seed


def test_half_up_rounding():
    assert half_up(17.5) == 18
    assert half_up(Fraction(35, 2)) == 18
    assert half_up(11.999999999999998) == 12
    assert half_up(0.49) == 0
    assert half_up(Fraction(1, 2)) == 1


def test_parse_probability():
    assert parse_probability("1/3", "p") == Fraction(1, 3)
    assert parse_probability(0.25, "p") == 0.25
    assert parse_probability(None, "p") is None
    with pytest.raises(ConfigError):
        parse_probability(1.5, "p")
    with pytest.raises(ConfigError):
        parse_probability("zero", "p")


def test_init_model_counts(reference_config):
    model, trace = init_model(reference_config(steps=0))
    assert (trace.n_v[0], trace.n_e[0], trace.n_be[0]) == (3, 3, 3)
    assert model.bound_end.all()
    assert model.birth_step.tolist() == [0, 0, 0]
    assert model.seed_degree.tolist() == [2, 2, 2]


def test_init_model_k2(k2, path4):
    cfg = GrowthConfig(initial=k2, seed_set=SeedSet((path4,)), r=2, steps=0)
    _, trace = init_model(cfg)
    assert (trace.n_v[0], trace.n_e[0], trace.n_be[0]) == (2, 1, 1)


def test_initial_with_one_vertex_rejected(dot, path4):
    cfg = GrowthConfig(initial=dot, seed_set=SeedSet((path4,)), r=2, steps=1)
    with pytest.raises(ConfigError, match="initial"):
        cfg.validate()


def test_one_step_reference_counts(reference_config):
    model, trace = run(reference_config(steps=1))
    assert (trace.n_v[1], trace.n_e[1], trace.n_be[1]) == (15, 36, 12)
    model.assert_simple()


def test_two_step_reference_counts(reference_config):
    model, trace = run(reference_config(steps=2))
    assert (trace.n_v[2], trace.n_e[2], trace.n_be[2]) == (63, 168, 48)
    assert trace.x_size[2] == 48 and trace.y_size[2] == 132


def test_k2_with_single_vertex_seed_builds_triangle(k2, dot):
    cfg = GrowthConfig(initial=k2, seed_set=SeedSet((dot,)), r=1, steps=1)
    model, trace = run(cfg)
    assert (trace.n_v[1], trace.n_e[1], trace.n_be[1]) == (3, 3, 2)
    assert model.has_edge(0, 2) and model.has_edge(1, 2) and model.has_edge(0, 1)


def test_deterministic_mode_is_nested(reference_config):
    model1, _ = run(reference_config(steps=1))
    model3, _ = run(reference_config(steps=3))
    keys1 = set(model1.edge_keys().tolist())
    keys3 = set(model3.edge_keys().tolist())
    assert keys1 <= keys3


def test_grid_counts_match_closed_forms(triangle, path4, k2, dot):
    seeds = {"path4": path4, "triangle": triangle, "dot": dot}
    initials = {"triangle": triangle, "k2": k2}
    for r in (1, 2, 3):
        for seed in seeds.values():
            if seed.m_v < r:
                continue
            for initial in initials.values():
                cfg = GrowthConfig(initial=initial, seed_set=SeedSet((seed,)), r=r, steps=4)
                _, trace = run(cfg)
                params = ModelParams(initial.m_v, initial.m_e, seed.m_v, seed.m_e, r)
                for t in range(5):
                    assert (
                        trace.n_v[t],
                        trace.n_e[t],
                        trace.n_be[t],
                    ) == counts_deterministic(params, t)


def test_churn_reference_counts(reference_config):
    for p_r, p_a, removed, added, total in (
        (Fraction(1, 2), Fraction(1, 2), 18, 9, 159),
        (Fraction(1, 3), Fraction(2, 3), 12, 16, 172),
    ):
        cfg = reference_config(mode="randomized", steps=2, p_r=p_r, p_a=p_a, rng_seed=123)
        model, trace = run(cfg)
        assert trace.removed[2] == removed
        assert trace.added[2] == added
        assert trace.n_e[2] == total
        model.assert_simple()


def test_churn_only_starts_at_step_two(reference_config):
    cfg = reference_config(mode="randomized", steps=1, p_r=0.5, p_a=0.5)
    _, trace = run(cfg)
    assert trace.removed[1] == 0 and trace.added[1] == 0
    assert trace.n_e[1] == 36


def test_trace_bookkeeping_identity(reference_config):
    cfg = reference_config(mode="randomized", steps=5, p_r=0.4, p_a=0.6, rng_seed=5)
    _, trace = run(cfg)
    for s in range(1, 6):
        assert trace.n_e[s] == trace.y_size[s] + (
            trace.n_e[s - 1] - trace.removed[s] + trace.added[s]
        )
        assert trace.n_be[s] == 4**s * 3


def test_bound_edges_survive_churn(reference_config):
    cfg = reference_config(mode="randomized", steps=4, p_r=0.7, p_a=0.4, rng_seed=9)
    model, trace = run(cfg)
    model.assert_simple()  # covers bound subset-of-adjacency
    assert model.n_bound_edges == 4**4 * 3


def test_added_edges_connect_only_old_vertices(reference_config):
    cfg = reference_config(mode="randomized", steps=3, p_r=0.5, p_a=0.5, rng_seed=11)
    model, trace = run(cfg)
    # vertices born at the last step may appear only in growth edges, which
    # always pair a new vertex with (old, new): count degrees of newcomers
    newcomers = model.birth_step == 3
    deg_expected = model.seed_degree[newcomers] + 2
    assert np.array_equal(model.degrees()[newcomers], deg_expected)


def test_rewire_reference_churn(reference_config):
    cfg = reference_config(mode="rewire", steps=2, p_w=Fraction(1, 4), rng_seed=3)
    model, trace = run(cfg)
    assert trace.removed[2] == 9 and trace.added[2] == 9
    assert trace.n_e[2] == 168
    model.assert_simple()


def test_rewire_preserves_deterministic_counts(reference_config):
    det = run(reference_config(steps=5))[1]
    rew = run(reference_config(mode="rewire", steps=5, p_w=0.3, rng_seed=21))[1]
    assert det.n_e == rew.n_e
    assert det.n_v == rew.n_v
    assert det.n_be == rew.n_be


def test_rewire_fraction_rounding_to_zero_is_identity(reference_config):
    base = run(reference_config(steps=2))[0]
    rew = run(reference_config(mode="rewire", steps=2, p_w=0.001, rng_seed=2))[0]
    assert sorted(base.edge_keys().tolist()) == sorted(rew.edge_keys().tolist())


def test_bit_reproducibility_same_seed(reference_config):
    cfg = dict(mode="randomized", steps=4, p_r=0.45, p_a=0.55, rng_seed=77)
    a_model, a_trace = run(reference_config(**cfg))
    b_model, b_trace = run(reference_config(**cfg))
    assert a_trace.n_e == b_trace.n_e
    assert np.array_equal(a_model.edge_keys(), b_model.edge_keys())
    c_model, _ = run(reference_config(**{**cfg, "rng_seed": 78}))
    assert sorted(a_model.edge_keys().tolist()) != sorted(c_model.edge_keys().tolist())


def test_uniform_policies_reproducible(reference_config):
    cfg = dict(steps=3, selection_policy="uniform_random", rng_seed=31)
    a, _ = run(reference_config(**cfg))
    b, _ = run(reference_config(**cfg))
    assert np.array_equal(a.bound_edge_arrays()[0], b.bound_edge_arrays()[0])
    assert np.array_equal(a.bound_edge_arrays()[1], b.bound_edge_arrays()[1])


def test_existence_constraint_warns(reference_config):
    cfg = reference_config(mode="randomized", steps=2, p_r=0.6, p_a=0.2)
    with pytest.warns(UserWarning, match="net edge loss"):
        cfg.validate()


def test_degenerate_dense_remainder_raises(k2, dot):
    cfg = GrowthConfig(
        initial=k2,
        seed_set=SeedSet((dot,)),
        r=1,
        mode="randomized",
        steps=2,
        p_r=0.1,
        p_a=0.9,
        rng_seed=1,
    )
    with pytest.raises(GenerationError, match="non-adjacent"):
        run(cfg)


def test_heterogeneous_seeds_generate_cleanly(triangle, path4, dot):
    star4 = make_seed(4, [[0, 1], [0, 2], [0, 3]], name="star4")
    cfg = GrowthConfig(
        initial=triangle, seed_set=SeedSet((path4, star4)), r=2, steps=3, rng_seed=5
    )
    model, trace = run(cfg)
    model.assert_simple()
    assert trace.n_be[3] == 4**3 * 3
    # round_robin alternates seeds over the canonical bound-edge order, so
    # star centres (seed degree 3) must be present among step-1 vertices
    step1 = model.birth_step == 1
    assert model.seed_degree[step1].max() == 3
    # same (m_v, m_e) for both seeds keeps the closed-form counts valid
    params = ModelParams(3, 3, 4, 3, 2)
    assert (trace.n_v[3], trace.n_e[3], trace.n_be[3]) == counts_deterministic(params, 3)


def test_mixed_size_seed_set_traces_actual_growth(triangle, k2, dot):
    cfg = GrowthConfig(
        initial=triangle, seed_set=SeedSet((k2, dot)), r=1, steps=3, rng_seed=5
    )
    model, trace = run(cfg)
    model.assert_simple()
    for s in range(1, 4):
        assert trace.n_be[s] == 2**s * 3
        assert trace.n_v[s] - trace.n_v[s - 1] == trace.x_size[s]
        assert trace.n_e[s] - trace.n_e[s - 1] == trace.y_size[s]


def test_step_cap_guard(reference_config):
    cfg = reference_config(steps=40)
    with pytest.raises(ConfigError, match="cap"):
        cfg.validate()


def test_trace_csv_round_trip(tmp_path, reference_config):
    _, trace = run(reference_config(steps=3))
    path = tmp_path / "trace.csv"
    trace.write_csv(path)
    again = StepTrace.read_csv(path)
    assert again.n_v == trace.n_v
    assert again.row(2) == trace.row(2)


def test_config_from_dict_validation(triangle, path4):
    doc = {
        "initial": {"m_v": 3, "edges": [[0, 1], [0, 2], [1, 2]]},
        "seeds": [{"m_v": 4, "edges": [[0, 1], [1, 2], [2, 3]]}],
        "r": 2,
        "steps": 2,
    }
    cfg = GrowthConfig.from_dict(doc)
    cfg.validate()
    assert cfg.effective_selection_policy == "by_descending_degree"
    with pytest.raises(ConfigError, match="unknown"):
        GrowthConfig.from_dict({**doc, "colour": 1})
    with pytest.raises(ConfigError, match="r: missing"):
        GrowthConfig.from_dict({k: v for k, v in doc.items() if k != "r"})
    with pytest.raises(ConfigError, match="m_v >= r"):
        GrowthConfig.from_dict({**doc, "r": 5}).validate()
    with pytest.raises(ConfigError, match="p_r"):
        GrowthConfig.from_dict({**doc, "mode": "randomized"}).validate()
    with pytest.raises(ConfigError, match="p_w"):
        GrowthConfig.from_dict({**doc, "mode": "rewire"}).validate()
    with pytest.raises(ConfigError, match="mode"):
        GrowthConfig.from_dict({**doc, "mode": "chaotic"}).validate()
