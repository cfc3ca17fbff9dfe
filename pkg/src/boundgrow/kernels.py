"""Numeric kernels: CSR construction and exhaustive all-pairs BFS.

The eccentricity sweep is the hot loop of the whole package (exact diameters
on graphs with ~1e5 vertices). It runs bit-parallel: 64 BFS sources share one
uint64 lane per vertex, and a level-synchronous sweep ORs neighbour lanes
until no source gains a new vertex. That is still an exhaustive BFS from
every vertex, just 64 sources at a time, and it returns exact eccentricities.

Two interchangeable implementations exist:

* a numba ``@njit`` kernel (default when numba imports), and
* a pure-numpy fallback built on ``np.bitwise_or.reduceat``.

Selection: the ``backend=`` argument wins, then the ``BOUNDGROW_BACKEND``
environment variable (``numba`` or ``numpy``), then whatever is available.
Both produce identical results; ``benchmarks/bench_kernels.py`` compares
their speed. No RNG flows through this module, so backend choice can never
change generated graphs.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKEND_ENV = "BOUNDGROW_BACKEND"
_FULL64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def resolve_backend(backend: str | None = None) -> str:
    choice = backend or os.environ.get(BACKEND_ENV, "").lower() or ("numba" if HAVE_NUMBA else "numpy")
    if choice not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {choice!r} (use 'numba' or 'numpy')")
    if choice == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return choice


def build_csr(n: int, eu: np.ndarray, ev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Undirected CSR adjacency from edge arrays (each edge stored once)."""
    heads = np.concatenate([eu, ev])
    tails = np.concatenate([ev, eu])
    deg = np.bincount(heads, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    order = np.argsort(heads, kind="stable")
    indices = tails[order].astype(np.int32)
    return indptr, indices


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _ecc_bits_numba(indptr, indices):  # pragma: no cover - exercised via wrapper
        n = indptr.shape[0] - 1
        ecc = np.zeros(n, np.int64)
        reach = np.zeros(n, np.uint64)
        nxt = np.zeros(n, np.uint64)
        one = np.uint64(1)
        zero = np.uint64(0)
        connected = True
        start = 0
        while start < n and connected:
            width = n - start
            if width > 64:
                width = 64
            full = zero
            for i in range(width):
                full |= one << np.uint64(i)
            for v in range(n):
                reach[v] = zero
            for i in range(width):
                reach[start + i] = one << np.uint64(i)
            level = 0
            while True:
                agg = zero
                for v in range(n):
                    acc = reach[v]
                    for e in range(indptr[v], indptr[v + 1]):
                        acc |= reach[indices[e]]
                    nxt[v] = acc
                    agg |= acc & ~reach[v]
                if agg == zero:
                    break
                level += 1
                for i in range(width):
                    if agg & (one << np.uint64(i)):
                        ecc[start + i] = level
                tmp = reach
                reach = nxt
                nxt = tmp
            for v in range(n):
                if reach[v] != full:
                    connected = False
                    break
            start += 64
        return ecc, connected


def _ecc_bits_numpy(indptr: np.ndarray, indices: np.ndarray) -> tuple[np.ndarray, bool]:
    n = indptr.size - 1
    ecc = np.zeros(n, dtype=np.int64)
    deg = np.diff(indptr)
    has_nbrs = deg > 0
    # reduceat cannot take an offset equal to len(indices); clamp the empty
    # trailing segments and zero them out afterwards.
    starts = np.minimum(indptr[:-1], max(indices.size - 1, 0))
    for start in range(0, n, 64):
        width = min(64, n - start)
        full = _FULL64 if width == 64 else np.uint64((1 << width) - 1)
        reach = np.zeros(n, dtype=np.uint64)
        reach[start : start + width] = np.uint64(1) << np.arange(width, dtype=np.uint64)
        level = 0
        while True:
            if indices.size:
                gathered = np.bitwise_or.reduceat(reach[indices], starts)
                gathered[~has_nbrs] = 0
            else:
                gathered = np.zeros(n, dtype=np.uint64)
            new = reach | gathered
            newly = new & ~reach
            agg = np.bitwise_or.reduce(newly)
            if agg == 0:
                break
            level += 1
            hit = (agg >> np.arange(width, dtype=np.uint64)) & np.uint64(1)
            ecc[start : start + width][hit.astype(bool)] = level
            reach = new
        if not np.all(reach == full):
            return ecc, False
    return ecc, True


def all_eccentricities(
    indptr: np.ndarray, indices: np.ndarray, backend: str | None = None
) -> tuple[np.ndarray, bool]:
    """Exact BFS eccentricity of every vertex plus a connectivity flag.

    Eccentricities are only meaningful when the graph is connected; callers
    should treat the diameter as infinite otherwise.
    """
    n = indptr.size - 1
    if n == 0:
        return np.zeros(0, dtype=np.int64), True
    if resolve_backend(backend) == "numba":
        return _ecc_bits_numba(indptr, np.ascontiguousarray(indices))
    return _ecc_bits_numpy(indptr, indices)
