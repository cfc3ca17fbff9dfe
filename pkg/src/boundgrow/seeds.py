"""Seed graphs (the motifs attached during growth) and their selection rules.

A seed is a small connected simple graph with m_v vertices and m_e edges plus
a bound order: the vertex order used when bound ends are picked
deterministically. A seed set bundles one or more seeds with the policy that
assigns a seed to each bound edge of the current model.

Document schema (JSON): each seed is an object with fields ``m_v``,
``edges`` (list of [a, b] index pairs) and optional ``bound_order``
(permutation of all vertex indices, default identity). The top-level config
document carries ``initial`` (same schema; all its edges start out bound) and
``seeds`` (array).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

SELECTION_POLICIES = ("by_bound_order", "by_descending_degree", "uniform_random")
ASSIGNMENT_POLICIES = ("round_robin", "uniform_random")


class SeedError(ValueError):
    """Invalid seed or seed-set definition; message names the offending field."""


@dataclass(frozen=True)
class SeedGraph:
    m_v: int
    edges: tuple[tuple[int, int], ...]
    bound_order: tuple[int, ...]
    name: str = ""

    @property
    def m_e(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.m_v, dtype=np.int64)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def degrees_descending(self) -> np.ndarray:
        """Vertex indices sorted by degree descending, ties broken by index."""
        deg = self.degrees()
        return np.lexsort((np.arange(self.m_v), -deg))

    def top_degree_sum(self, r: int) -> int:
        """Sum of the r largest vertex degrees (descending-degree selection)."""
        deg = self.degrees()
        return int(deg[self.degrees_descending()[:r]].sum())

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.m_v else 0

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]


def make_seed(m_v: int, edges, bound_order=None, name: str = "") -> SeedGraph:
    """Validate and normalize a seed definition."""
    label = name or "seed"
    if not isinstance(m_v, int) or m_v < 1:
        raise SeedError(f"{label}: m_v must be an integer >= 1, got {m_v!r}")
    norm: list[tuple[int, int]] = []
    seen = set()
    for pair in edges:
        if len(pair) != 2:
            raise SeedError(f"{label}: edges entries must be pairs, got {pair!r}")
        a, b = int(pair[0]), int(pair[1])
        if a == b:
            raise SeedError(f"{label}: edges contains self-loop {a}-{b}")
        if not (0 <= a < m_v and 0 <= b < m_v):
            raise SeedError(f"{label}: edges references vertex outside [0, {m_v})")
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            raise SeedError(f"{label}: edges contains duplicate edge {a}-{b}")
        seen.add((a, b))
        norm.append((a, b))
    norm.sort()
    if bound_order is None:
        order = tuple(range(m_v))
    else:
        order = tuple(int(i) for i in bound_order)
        if sorted(order) != list(range(m_v)):
            raise SeedError(f"{label}: bound_order is not a permutation of 0..{m_v - 1}")
    if not _connected(m_v, norm):
        raise SeedError(f"{label}: edges do not form a connected graph")
    return SeedGraph(m_v=m_v, edges=tuple(norm), bound_order=order, name=name)


def _connected(m_v: int, edges: list[tuple[int, int]]) -> bool:
    if m_v <= 1:
        return True
    adj: list[list[int]] = [[] for _ in range(m_v)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * m_v
    queue = deque([0])
    seen[0] = True
    reached = 1
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                reached += 1
                queue.append(y)
    return reached == m_v


@dataclass(frozen=True)
class SeedSet:
    seeds: tuple[SeedGraph, ...]
    assignment_policy: str = "round_robin"

    def __post_init__(self):
        if not self.seeds:
            raise SeedError("seeds: at least one seed is required")
        if self.assignment_policy not in ASSIGNMENT_POLICIES:
            raise SeedError(
                f"assignment_policy must be one of {ASSIGNMENT_POLICIES}, got {self.assignment_policy!r}"
            )

    @property
    def homogeneous(self) -> bool:
        """True when all seeds share (m_v, m_e); closed forms need this."""
        sizes = {(s.m_v, s.m_e) for s in self.seeds}
        return len(sizes) == 1

    @property
    def min_m_v(self) -> int:
        return min(s.m_v for s in self.seeds)


def parse_seed(obj: dict, name: str = "seed") -> SeedGraph:
    if not isinstance(obj, dict):
        raise SeedError(f"{name}: expected an object with m_v/edges fields")
    unknown = set(obj) - {"m_v", "edges", "bound_order", "name"}
    if unknown:
        raise SeedError(f"{name}: unknown fields {sorted(unknown)}")
    if "m_v" not in obj:
        raise SeedError(f"{name}: missing field m_v")
    if "edges" not in obj:
        raise SeedError(f"{name}: missing field edges")
    return make_seed(
        obj["m_v"], obj["edges"], obj.get("bound_order"), name=obj.get("name", name)
    )


def load_seed_set(doc, assignment_policy: str = "round_robin") -> SeedSet:
    """Build a validated SeedSet from a parsed document fragment (list of seeds)."""
    if isinstance(doc, dict):
        doc = doc.get("seeds", [])
    seeds = tuple(parse_seed(obj, name=f"seeds[{i}]") for i, obj in enumerate(doc))
    return SeedSet(seeds=seeds, assignment_policy=assignment_policy)


def select_bound_vertices(
    seed: SeedGraph, r: int, policy: str, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Pick the r seed vertices whose edges to the host pair become bound.

    Deterministic policies are pure; uniform_random consumes the supplied rng.
    """
    if not 1 <= r <= seed.m_v:
        raise SeedError(f"r={r} out of range for seed with m_v={seed.m_v}")
    if policy == "by_bound_order":
        return np.asarray(seed.bound_order[:r], dtype=np.int64)
    if policy == "by_descending_degree":
        return seed.degrees_descending()[:r].astype(np.int64)
    if policy == "uniform_random":
        if rng is None:
            raise ValueError("uniform_random selection needs an rng")
        return rng.permutation(seed.m_v)[:r].astype(np.int64)
    raise SeedError(f"selection_policy must be one of {SELECTION_POLICIES}, got {policy!r}")
