import math

import numpy as np
import pytest

from boundgrow import kernels


def csr_of(n, pairs):
    eu = np.array([p[0] for p in pairs], dtype=np.int64)
    ev = np.array([p[1] for p in pairs], dtype=np.int64)
    return kernels.build_csr(n, eu, ev)


def brute_eccentricities(n, pairs):
    """Reference BFS, one source at a time, pure python."""
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    eccs = []
    connected = True
    for src in range(n):
        dist = [-1] * n
        dist[src] = 0
        queue = [src]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        if min(dist) < 0:
            connected = False
        eccs.append(max(dist))
    return eccs, connected


def test_build_csr_structure():
    indptr, indices = csr_of(4, [(0, 1), (1, 2), (0, 3)])
    assert indptr.tolist() == [0, 2, 4, 5, 6]
    assert sorted(indices[0:2].tolist()) == [1, 3]
    assert sorted(indices[2:4].tolist()) == [0, 2]
    assert indices[4] == 1 and indices[5] == 0


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_eccentricities_small_graphs(backend):
    for n, pairs in [
        (3, [(0, 1), (1, 2), (0, 2)]),
        (4, [(0, 1), (1, 2), (2, 3)]),
        (7, [(0, i) for i in range(1, 7)]),
        (1, []),
    ]:
        indptr, indices = csr_of(n, pairs)
        ecc, connected = kernels.all_eccentricities(indptr, indices, backend=backend)
        ref_ecc, ref_conn = brute_eccentricities(n, pairs)
        assert connected == ref_conn
        assert ecc.tolist() == ref_ecc


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_eccentricities_disconnected(backend):
    indptr, indices = csr_of(5, [(0, 1), (2, 3)])
    _, connected = kernels.all_eccentricities(indptr, indices, backend=backend)
    assert not connected


def test_backends_agree_on_random_graphs():
    rng = np.random.default_rng(42)
    for trial in range(25):
        n = int(rng.integers(2, 120))
        density = rng.uniform(0.02, 0.35)
        pairs = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < density
        ]
        indptr, indices = csr_of(n, pairs)
        ecc_nb, conn_nb = kernels.all_eccentricities(indptr, indices, backend="numba")
        ecc_np, conn_np = kernels.all_eccentricities(indptr, indices, backend="numpy")
        assert conn_nb == conn_np
        if conn_nb:
            assert np.array_equal(ecc_nb, ecc_np)
        ref_ecc, ref_conn = brute_eccentricities(n, pairs)
        assert conn_nb == ref_conn
        if ref_conn:
            assert ecc_nb.tolist() == ref_ecc


def test_more_than_64_sources_runs_in_blocks():
    # a cycle of 130 vertices exercises multiple 64-wide source blocks
    n = 130
    pairs = [(i, (i + 1) % n if i + 1 < n else 0) for i in range(n - 1)] + [(0, n - 1)]
    pairs = sorted({(min(u, v), max(u, v)) for u, v in pairs})
    indptr, indices = csr_of(n, pairs)
    for backend in ("numpy", "numba"):
        ecc, connected = kernels.all_eccentricities(indptr, indices, backend=backend)
        assert connected
        assert set(ecc.tolist()) == {n // 2}


def test_env_var_selects_backend(monkeypatch):
    monkeypatch.setenv(kernels.BACKEND_ENV, "numpy")
    assert kernels.resolve_backend() == "numpy"
    monkeypatch.setenv(kernels.BACKEND_ENV, "numba")
    assert kernels.resolve_backend() == "numba"
    monkeypatch.setenv(kernels.BACKEND_ENV, "weird")
    with pytest.raises(ValueError):
        kernels.resolve_backend()
    monkeypatch.delenv(kernels.BACKEND_ENV)
    assert kernels.resolve_backend() in ("numba", "numpy")
    assert kernels.resolve_backend("numpy") == "numpy"
