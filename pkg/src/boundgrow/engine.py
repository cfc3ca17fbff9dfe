"""Growth engines: deterministic seed attachment plus the churned variants.

One step of every mode attaches a seed copy to each bound edge {u, v} of the
previous model (joining every seed vertex to both u and v and re-issuing 2r
bound edges through r selected seed vertices). The modes differ afterwards:

* deterministic: nothing else happens; the old model stays a subgraph.
* randomized: from step 2 on, round(p_r * pool) of the pre-growth edges are
  removed (uniformly, without replacement), then round(p_a * remaining) new
  edges are added between old vertices (uniform non-adjacent pairs).
* rewire: removals and additions are forced equal (round(p_w * pool)), so
  edge counts match the deterministic model exactly.

Churn counts use half-up rounding. The removal pool is exactly the
pre-growth edge set: freshly issued bound edges are never removable, keeping
n_be(s) = (2r)^s * n_e0 in every mode. Added edges connect only vertices
that existed before the step's growth and are never bound.

Bound edges are processed in canonical (sorted endpoint) order, so
deterministic runs need no RNG at all and randomized runs are bit
reproducible from rng_seed alone.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import predictor
from .graph import NetworkModel, decode_pairs, encode_pairs
from .seeds import (
    ASSIGNMENT_POLICIES,
    SELECTION_POLICIES,
    SeedError,
    SeedGraph,
    SeedSet,
    load_seed_set,
    parse_seed,
    select_bound_vertices,
)

MODES = ("deterministic", "randomized", "rewire")

_CONFIG_KEYS = {
    "initial",
    "seeds",
    "r",
    "mode",
    "steps",
    "rng_seed",
    "p_r",
    "p_a",
    "p_w",
    "selection_policy",
    "assignment_policy",
}


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


class GenerationError(RuntimeError):
    """Generation cannot proceed (e.g. no non-adjacent pairs left to add)."""


def half_up(x) -> int:
    """round(x) with ties going up; exact for Fraction inputs."""
    if isinstance(x, Fraction):
        return int(math.floor(x + Fraction(1, 2)))
    return int(math.floor(x + 0.5))


def parse_probability(value, name: str):
    """Accept a float in (0,1) or a string like '1/3' (kept exact as Fraction)."""
    if value is None:
        return None
    if isinstance(value, str):
        try:
            prob = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{name}: cannot parse {value!r} as a probability") from exc
    elif isinstance(value, (int, float, Fraction)):
        prob = value if isinstance(value, Fraction) else float(value)
    else:
        raise ConfigError(f"{name}: expected number or 'a/b' string, got {type(value).__name__}")
    if not 0 < prob < 1:
        raise ConfigError(f"{name}: must lie strictly between 0 and 1, got {prob}")
    return prob


@dataclass
class StepTrace:
    """Per-step counts: row s describes the model after step s completed."""

    n_v: list = field(default_factory=list)
    n_e: list = field(default_factory=list)
    n_be: list = field(default_factory=list)
    removed: list = field(default_factory=list)
    added: list = field(default_factory=list)
    x_size: list = field(default_factory=list)
    y_size: list = field(default_factory=list)

    COLUMNS = ("step", "n_v", "n_e", "n_be", "removed", "added", "x_size", "y_size")

    def append(self, n_v, n_e, n_be, removed, added, x_size, y_size) -> None:
        self.n_v.append(int(n_v))
        self.n_e.append(int(n_e))
        self.n_be.append(int(n_be))
        self.removed.append(int(removed))
        self.added.append(int(added))
        self.x_size.append(int(x_size))
        self.y_size.append(int(y_size))

    def __len__(self) -> int:
        return len(self.n_v)

    @property
    def last_step(self) -> int:
        return len(self) - 1

    def row(self, s: int) -> tuple:
        return (
            s,
            self.n_v[s],
            self.n_e[s],
            self.n_be[s],
            self.removed[s],
            self.added[s],
            self.x_size[s],
            self.y_size[s],
        )

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for s in range(len(self)):
                fh.write(",".join(str(x) for x in self.row(s)) + "\n")

    @classmethod
    def read_csv(cls, path) -> "StepTrace":
        trace = cls()
        with open(path) as fh:
            header = fh.readline().strip()
            if header != ",".join(cls.COLUMNS):
                raise ConfigError(f"trace file {path}: unexpected header {header!r}")
            for lineno, line in enumerate(fh, start=2):
                parts = line.strip().split(",")
                if len(parts) != len(cls.COLUMNS):
                    raise ConfigError(f"trace file {path}: line {lineno}: expected 8 columns")
                vals = [int(x) for x in parts]
                trace.append(*vals[1:])
        return trace


@dataclass
class GrowthConfig:
    initial: SeedGraph
    seed_set: SeedSet
    r: int
    mode: str = "deterministic"
    steps: int = 0
    rng_seed: int = 0
    p_r: object = None
    p_a: object = None
    p_w: object = None
    selection_policy: str | None = None
    allow_big: bool = False

    @property
    def effective_selection_policy(self) -> str:
        if self.selection_policy is not None:
            return self.selection_policy
        return "uniform_random" if self.mode == "randomized" else "by_descending_degree"

    def validate(self) -> None:
        if self.initial.m_v < 2:
            raise ConfigError("initial: needs at least 2 vertices")
        if self.initial.m_e < 1:
            raise ConfigError("initial: needs at least 1 edge")
        if not isinstance(self.r, int) or self.r < 1:
            raise ConfigError(f"r: must be an integer >= 1, got {self.r!r}")
        for seed in self.seed_set.seeds:
            if seed.m_v < self.r:
                raise ConfigError(
                    f"seeds: seed with m_v={seed.m_v} violates m_v >= r (r={self.r})"
                )
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {MODES}, got {self.mode!r}")
        if self.steps < 0:
            raise ConfigError(f"steps: must be >= 0, got {self.steps}")
        if self.mode == "randomized":
            if self.p_r is None or self.p_a is None:
                raise ConfigError("p_r/p_a: required in randomized mode")
            if self.p_a < self.p_r / (1 - self.p_r):
                warnings.warn(
                    f"p_a={self.p_a} < p_r/(1-p_r)={self.p_r / (1 - self.p_r)}: "
                    "sustained net edge loss; the model may degenerate",
                    UserWarning,
                    stacklevel=2,
                )
        if self.mode == "rewire" and self.p_w is None:
            raise ConfigError("p_w: required in rewire mode")
        if self.selection_policy is not None and self.selection_policy not in SELECTION_POLICIES:
            raise ConfigError(
                f"selection_policy: must be one of {SELECTION_POLICIES}, got {self.selection_policy!r}"
            )
        bound = self._size_bound_params()
        ok, why = predictor.generation_feasible(bound, self.steps, self.allow_big)
        if not ok:
            raise ConfigError(f"steps: {why}")

    def _size_bound_params(self) -> predictor.ModelParams:
        m_v = max(s.m_v for s in self.seed_set.seeds)
        m_e = max(s.m_e for s in self.seed_set.seeds)
        return predictor.ModelParams(
            n_v0=self.initial.m_v,
            n_e0=self.initial.m_e,
            m_v=max(m_v, self.r),
            m_e=m_e,
            r=self.r,
        )

    @classmethod
    def from_dict(cls, doc: dict, allow_big: bool = False) -> "GrowthConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for fld in ("initial", "seeds", "r"):
            if fld not in doc:
                raise ConfigError(f"{fld}: missing required field")
        initial = parse_seed(doc["initial"], name="initial")
        assignment = doc.get("assignment_policy", "round_robin")
        seed_set = load_seed_set(doc["seeds"], assignment_policy=assignment)
        steps = doc.get("steps", 0)
        if not isinstance(steps, int):
            raise ConfigError(f"steps: must be an integer, got {steps!r}")
        rng_seed = doc.get("rng_seed", 0)
        if not isinstance(rng_seed, int):
            raise ConfigError(f"rng_seed: must be an integer, got {rng_seed!r}")
        return cls(
            initial=initial,
            seed_set=seed_set,
            r=doc["r"],
            mode=doc.get("mode", "deterministic"),
            steps=steps,
            rng_seed=rng_seed,
            p_r=parse_probability(doc.get("p_r"), "p_r"),
            p_a=parse_probability(doc.get("p_a"), "p_a"),
            p_w=parse_probability(doc.get("p_w"), "p_w"),
            selection_policy=doc.get("selection_policy"),
            allow_big=allow_big,
        )

    @classmethod
    def from_file(cls, path, allow_big: bool = False) -> "GrowthConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc, allow_big=allow_big)

    def to_dict(self) -> dict:
        def prob(x):
            if x is None:
                return None
            return str(x) if isinstance(x, Fraction) else x

        return {
            "initial": {
                "m_v": self.initial.m_v,
                "edges": [list(e) for e in self.initial.edges],
                "bound_order": list(self.initial.bound_order),
            },
            "seeds": [
                {
                    "m_v": s.m_v,
                    "edges": [list(e) for e in s.edges],
                    "bound_order": list(s.bound_order),
                }
                for s in self.seed_set.seeds
            ],
            "r": self.r,
            "mode": self.mode,
            "steps": self.steps,
            "rng_seed": self.rng_seed,
            "p_r": prob(self.p_r),
            "p_a": prob(self.p_a),
            "p_w": prob(self.p_w),
            "selection_policy": self.effective_selection_policy,
            "assignment_policy": self.seed_set.assignment_policy,
        }


# -- the engine ---------------------------------------------------------------


def init_model(config: GrowthConfig) -> tuple[NetworkModel, StepTrace]:
    """Step-0 model: the initial graph with every edge marked bound."""
    if config.initial.m_v < 2 or config.initial.m_e < 1:
        raise ConfigError("initial: needs >= 2 vertices and >= 1 edge")
    model = NetworkModel()
    degs = config.initial.degrees()
    model.add_vertices(
        config.initial.m_v, birth_step=0, bound_end=True, seed_degree=degs
    )
    eu, ev = config.initial.edge_arrays()
    model.add_edge_block(eu, ev)
    model.set_bound_edges(eu.copy(), ev.copy())
    trace = StepTrace()
    trace.append(model.n_vertices, model.n_edges, model.n_bound_edges, 0, 0, 0, 0)
    return model, trace


def grow_step(
    model: NetworkModel, config: GrowthConfig, rng: np.random.Generator | None = None
) -> tuple[int, int]:
    """Attach one seed per bound edge; returns (new vertices, new edges).

    Mutates the model in place and advances its step counter. Old bound
    edges lose bound status; the 2r edges through each bound-edge's selected
    seed vertices become the new bound set.
    """
    s = model.step + 1
    bu, bv = model.bound_edge_arrays()
    order = np.lexsort((bv, bu))
    bu, bv = bu[order], bv[order]
    n_edges_before = model.n_edges
    seeds = config.seed_set.seeds
    policy = config.effective_selection_policy
    n_bound = bu.size
    if len(seeds) == 1:
        seed_idx = np.zeros(n_bound, dtype=np.int64)
    elif config.seed_set.assignment_policy == "round_robin":
        seed_idx = np.arange(n_bound, dtype=np.int64) % len(seeds)
    else:
        if rng is None:
            raise ValueError("uniform_random seed assignment needs an rng")
        seed_idx = rng.integers(0, len(seeds), size=n_bound)
    mv_per = np.asarray([sd.m_v for sd in seeds], dtype=np.int64)[seed_idx]
    n0 = model.n_vertices
    offsets = np.zeros(n_bound, dtype=np.int64)
    if n_bound > 1:
        np.cumsum(mv_per[:-1], out=offsets[1:])
    offsets += n0
    x_total = int(mv_per.sum())

    birth = np.full(x_total, s, dtype=np.int64)
    sdeg = np.zeros(x_total, dtype=np.int64)
    bend = np.zeros(x_total, dtype=bool)
    eu_parts: list[np.ndarray] = []
    ev_parts: list[np.ndarray] = []
    nbu_parts: list[np.ndarray] = []
    nbv_parts: list[np.ndarray] = []

    for g, seed in enumerate(seeds):
        rows = np.flatnonzero(seed_idx == g)
        if rows.size == 0:
            continue
        off = offsets[rows]
        m_v = seed.m_v
        a, b = seed.edge_arrays()
        if a.size:
            eu_parts.append((off[:, None] + a[None, :]).ravel())
            ev_parts.append((off[:, None] + b[None, :]).ravel())
        ids = (off[:, None] + np.arange(m_v, dtype=np.int64)[None, :]).ravel()
        eu_parts.append(np.repeat(bu[rows], m_v))
        ev_parts.append(ids)
        eu_parts.append(np.repeat(bv[rows], m_v))
        ev_parts.append(ids)
        sdeg[ids - n0] = np.tile(seed.degrees(), rows.size)
        if policy == "uniform_random":
            if rng is None:
                raise ValueError("uniform_random selection needs an rng")
            sel = np.argsort(rng.random((rows.size, m_v)), axis=1)[:, : config.r]
        else:
            fixed = select_bound_vertices(seed, config.r, policy)
            sel = np.broadcast_to(fixed, (rows.size, config.r))
        sel_ids = (off[:, None] + sel).ravel()
        bend[sel_ids - n0] = True
        nbu_parts.append(np.repeat(bu[rows], config.r))
        nbv_parts.append(sel_ids)
        nbu_parts.append(np.repeat(bv[rows], config.r))
        nbv_parts.append(sel_ids)

    model.add_vertices(x_total, birth_step=birth, bound_end=bend, seed_degree=sdeg)
    model.add_edge_block(np.concatenate(eu_parts), np.concatenate(ev_parts))
    model.set_bound_edges(np.concatenate(nbu_parts), np.concatenate(nbv_parts))
    model.step = s
    return x_total, model.n_edges - n_edges_before


def randomize_step(
    model: NetworkModel,
    pool_size: int,
    n_old: int,
    p_r,
    p_a,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Churn the pre-growth edges: remove round(p_r*pool), add round(p_a*rest)."""
    k_remove = half_up(p_r * pool_size)
    k_add = half_up(p_a * (pool_size - k_remove))
    return _churn(model, pool_size, n_old, k_remove, k_add, rng)


def rewire_step(
    model: NetworkModel, pool_size: int, n_old: int, p_w, rng: np.random.Generator
) -> tuple[int, int]:
    """Replace round(p_w*pool) pre-growth edges; total edge count is unchanged."""
    k = half_up(p_w * pool_size)
    return _churn(model, pool_size, n_old, k, k, rng)


def _churn(model, pool_size, n_old, k_remove, k_add, rng) -> tuple[int, int]:
    # The pool occupies positions [0, pool_size): growth only appends, so the
    # pre-growth edges are exactly the leading block.
    if k_remove:
        removed_idx = rng.choice(pool_size, size=k_remove, replace=False)
        model.remove_edges_at(removed_idx)
    kept = pool_size - k_remove
    if k_add:
        eu, ev = model.edge_arrays()
        existing = np.sort(encode_pairs(eu[:kept], ev[:kept]))
        max_pairs = n_old * (n_old - 1) // 2
        if kept + k_add > max_pairs:
            raise GenerationError(
                f"cannot add {k_add} edges among {n_old} old vertices: "
                f"only {max_pairs - kept} non-adjacent pairs remain"
            )
        new_keys = _sample_missing_pairs(n_old, k_add, existing, rng)
        au, av = decode_pairs(new_keys)
        model.add_edge_block(au, av)
    return k_remove, k_add


def _sample_missing_pairs(n_old, need, existing_sorted, rng, max_rounds=100000):
    """Draw `need` distinct vertex pairs uniformly among the non-adjacent ones.

    Rejection sampling in batches; accepted pairs join the exclusion set so
    later draws stay duplicate-free. Deterministic given the rng state.
    """
    existing = existing_sorted
    out: list[np.ndarray] = []
    remaining = need
    for _ in range(max_rounds):
        m = 2 * remaining + 16
        pairs = rng.integers(0, n_old, size=(m, 2))
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        keys = encode_pairs(lo[lo != hi], hi[lo != hi])
        if keys.size:
            _, first = np.unique(keys, return_index=True)
            keys = keys[np.sort(first)]  # first occurrences, draw order
            if existing.size:
                pos = np.searchsorted(existing, keys)
                pos_c = np.minimum(pos, existing.size - 1)
                member = (pos < existing.size) & (existing[pos_c] == keys)
                keys = keys[~member]
            fresh = keys[:remaining]
            if fresh.size:
                out.append(fresh)
                existing = np.sort(np.concatenate([existing, fresh]))
                remaining -= fresh.size
        if remaining == 0:
            return np.concatenate(out)
    raise GenerationError("edge addition sampling failed to converge")


def run(config: GrowthConfig) -> tuple[NetworkModel, StepTrace]:
    """Execute the configured algorithm: growth first, churn second, per step."""
    config.validate()
    rng = np.random.default_rng(config.rng_seed)
    model, trace = init_model(config)
    for s in range(1, config.steps + 1):
        pool_size = model.n_edges
        n_old = model.n_vertices
        x_size, y_size = grow_step(model, config, rng)
        removed = added = 0
        if s >= 2:
            if config.mode == "randomized":
                removed, added = randomize_step(
                    model, pool_size, n_old, config.p_r, config.p_a, rng
                )
            elif config.mode == "rewire":
                removed, added = rewire_step(model, pool_size, n_old, config.p_w, rng)
        trace.append(
            model.n_vertices,
            model.n_edges,
            model.n_bound_edges,
            removed,
            added,
            x_size,
            y_size,
        )
    return model, trace
