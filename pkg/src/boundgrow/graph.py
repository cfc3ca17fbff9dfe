"""Simple undirected graph with a bound-edge registry and vertex provenance.

The model is the substrate both growth algorithms mutate: vertices carry a
birth step, a bound-end flag and the degree they had inside their seed; edges
live in flat numpy arrays (always stored with u < v) so that growth steps can
append whole blocks at once. A subset of the edges is designated "bound";
bound edges are where the next generation of seeds attaches.

Vertices are dense integers assigned in insertion order and are never
removed: deleting an edge keeps both ends, even if they become isolated.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels


class GraphError(Exception):
    """Base class for graph violations (these signal generator bugs)."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class MissingEdgeError(GraphError):
    pass


class UnknownVertexError(GraphError):
    pass


# Pair encoding: key(u, v) = u * 2^32 + v with u < v. Requires v < 2^32,
# which the int64 generation guard enforces long before memory would.
_SHIFT = np.int64(32)


def encode_pairs(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (np.asarray(u, dtype=np.int64) << _SHIFT) | np.asarray(v, dtype=np.int64)


def decode_pairs(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.asarray(keys, dtype=np.int64)
    return keys >> _SHIFT, keys & np.int64(0xFFFFFFFF)


def _empty_i64() -> np.ndarray:
    return np.empty(0, dtype=np.int64)


class NetworkModel:
    """Mutable simple graph: adjacency + bound-edge registry + provenance."""

    def __init__(self, n_vertices: int = 0):
        self.step = 0
        self._eu = _empty_i64()
        self._ev = _empty_i64()
        self._bu = _empty_i64()
        self._bv = _empty_i64()
        self._deg = np.zeros(n_vertices, dtype=np.int64)
        self.birth_step = np.zeros(n_vertices, dtype=np.int64)
        self.bound_end = np.zeros(n_vertices, dtype=bool)
        self.seed_degree = np.zeros(n_vertices, dtype=np.int64)
        self._index: dict[int, int] | None = None  # edge key -> position, lazy

    # -- basic accessors ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self._deg.size

    @property
    def n_edges(self) -> int:
        return self._eu.size

    @property
    def n_bound_edges(self) -> int:
        return self._bu.size

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Internal (u, v) arrays with u < v. Treat as read-only."""
        return self._eu, self._ev

    def bound_edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self._bu, self._bv

    def degrees(self) -> np.ndarray:
        return self._deg

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._deg[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return False
        if u > v:
            u, v = v, u
        self._ensure_index()
        return self._key(u, v) in self._index

    def edge_keys(self) -> np.ndarray:
        return encode_pairs(self._eu, self._ev)

    def bound_membership_counts(self) -> np.ndarray:
        """Per-vertex count of incident bound edges."""
        ends = np.concatenate([self._bu, self._bv])
        return np.bincount(ends, minlength=self.n_vertices)

    # -- single-element mutation (validated) --------------------------------

    def add_vertices(self, count: int, birth_step=0, bound_end=False, seed_degree=0) -> np.ndarray:
        """Append `count` vertices; provenance args may be scalars or arrays.

        Returns the new vertex ids.
        """
        n0 = self.n_vertices
        ids = np.arange(n0, n0 + count, dtype=np.int64)
        self._deg = np.concatenate([self._deg, np.zeros(count, dtype=np.int64)])
        self.birth_step = np.concatenate(
            [self.birth_step, np.broadcast_to(np.asarray(birth_step, dtype=np.int64), (count,))]
        )
        self.bound_end = np.concatenate(
            [self.bound_end, np.broadcast_to(np.asarray(bound_end, dtype=bool), (count,))]
        )
        self.seed_degree = np.concatenate(
            [self.seed_degree, np.broadcast_to(np.asarray(seed_degree, dtype=np.int64), (count,))]
        )
        return ids

    def add_edge(self, u: int, v: int, bound: bool = False) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise SelfLoopError(f"self-loop {u}-{v} rejected")
        if u > v:
            u, v = v, u
        self._ensure_index()
        key = self._key(u, v)
        if key in self._index:
            raise DuplicateEdgeError(f"edge {u}-{v} already present")
        self._index[key] = self._eu.size
        self._eu = np.append(self._eu, np.int64(u))
        self._ev = np.append(self._ev, np.int64(v))
        self._deg[u] += 1
        self._deg[v] += 1
        if bound:
            self._bu = np.append(self._bu, np.int64(u))
            self._bv = np.append(self._bv, np.int64(v))

    def remove_edge(self, u: int, v: int) -> None:
        """Delete one edge, keeping both endpoints (possibly now isolated)."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u > v:
            u, v = v, u
        self._ensure_index()
        key = self._key(u, v)
        pos = self._index.pop(key, None)
        if pos is None:
            raise MissingEdgeError(f"edge {u}-{v} not present")
        last = self._eu.size - 1
        if pos != last:  # swap-delete, keep the index map consistent
            self._eu[pos] = self._eu[last]
            self._ev[pos] = self._ev[last]
            self._index[self._key(int(self._eu[pos]), int(self._ev[pos]))] = pos
        self._eu = self._eu[:last]
        self._ev = self._ev[:last]
        self._deg[u] -= 1
        self._deg[v] -= 1
        if self._bu.size:
            hit = np.flatnonzero((self._bu == u) & (self._bv == v))
            if hit.size:
                keep = np.ones(self._bu.size, dtype=bool)
                keep[hit[0]] = False
                self._bu = self._bu[keep]
                self._bv = self._bv[keep]

    # -- bulk mutation (engine fast path; inputs must satisfy u < v) --------

    def add_edge_block(self, u: np.ndarray, v: np.ndarray) -> None:
        self._eu = np.concatenate([self._eu, np.asarray(u, dtype=np.int64)])
        self._ev = np.concatenate([self._ev, np.asarray(v, dtype=np.int64)])
        counts = np.bincount(np.concatenate([u, v]), minlength=self.n_vertices)
        self._deg += counts
        self._index = None

    def remove_edges_at(self, positions: np.ndarray) -> None:
        """Drop the edges at the given positions (relative order preserved)."""
        keep = np.ones(self._eu.size, dtype=bool)
        keep[positions] = False
        gone_ends = np.concatenate([self._eu[~keep], self._ev[~keep]])
        self._deg -= np.bincount(gone_ends, minlength=self.n_vertices)
        self._eu = self._eu[keep]
        self._ev = self._ev[keep]
        self._index = None

    def set_bound_edges(self, bu: np.ndarray, bv: np.ndarray) -> None:
        self._bu = np.asarray(bu, dtype=np.int64)
        self._bv = np.asarray(bv, dtype=np.int64)

    # -- analytics ----------------------------------------------------------

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        return kernels.build_csr(self.n_vertices, self._eu, self._ev)

    def eccentricities(self, backend: str | None = None) -> tuple[np.ndarray, bool]:
        indptr, indices = self.csr()
        return kernels.all_eccentricities(indptr, indices, backend=backend)

    def diameter(self, backend: str | None = None) -> int | float:
        """Exact diameter via exhaustive BFS from every vertex.

        Returns math.inf for a disconnected (or empty) vertex-set split.
        """
        if self.n_vertices == 0:
            return 0
        ecc, connected = self.eccentricities(backend=backend)
        if not connected:
            return math.inf
        return int(ecc.max())

    def is_connected(self, backend: str | None = None) -> bool:
        if self.n_vertices <= 1:
            return True
        return self.eccentricities(backend=backend)[1]

    def assert_simple(self) -> None:
        """Invariant scan: no self-loops, no parallel edges, bound within adjacency."""
        if self._eu.size and not np.all(self._eu < self._ev):
            raise GraphError("edge storage violates u < v (self-loop or unnormalized pair)")
        keys = self.edge_keys()
        if np.unique(keys).size != keys.size:
            raise GraphError("parallel edges present")
        if self._bu.size:
            bkeys = encode_pairs(self._bu, self._bv)
            if np.unique(bkeys).size != bkeys.size:
                raise GraphError("duplicate bound-edge entries")
            if not np.all(np.isin(bkeys, keys)):
                raise GraphError("bound edge missing from adjacency")
        recount = np.bincount(
            np.concatenate([self._eu, self._ev]), minlength=self.n_vertices
        )
        if not np.array_equal(recount, self._deg):
            raise GraphError("degree cache out of sync")

    # -- export --------------------------------------------------------------

    def write_edge_list(self, path) -> None:
        _write_pairs(path, self._eu, self._ev)

    def write_bound_edge_list(self, path) -> None:
        _write_pairs(path, self._bu, self._bv)

    def write_provenance_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("vertex,birth_step,is_bound_end,seed_degree\n")
            for i in range(self.n_vertices):
                fh.write(
                    f"{i},{int(self.birth_step[i])},{int(self.bound_end[i])},{int(self.seed_degree[i])}\n"
                )

    # -- internals ------------------------------------------------------------

    @staticmethod
    def _key(u: int, v: int) -> int:
        return (u << 32) | v

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise UnknownVertexError(f"vertex {v} not in model (n={self.n_vertices})")

    def _ensure_index(self) -> None:
        if self._index is None:
            keys = (self._eu << _SHIFT) | self._ev
            self._index = {int(k): i for i, k in enumerate(keys)}


def _write_pairs(path, u: np.ndarray, v: np.ndarray) -> None:
    """One edge per line, "u v" with u < v, sorted by (u, v); byte-stable."""
    order = np.lexsort((v, u))
    with open(path, "w", newline="") as fh:
        for a, b in zip(u[order], v[order]):
            fh.write(f"{int(a)} {int(b)}\n")
