"""Empirical measurements on generated models.

Degree censuses with per-vertex class labels (initial / bound-selected /
unselected), attachment probabilities, edge-cumulative distributions read
off a run trace, and the degree-threshold statistics behind (v_k, e_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import StepTrace
from .graph import NetworkModel

CLASS_NAMES = ("initial", "bound_selected", "unselected")
CLASS_INITIAL, CLASS_BOUND, CLASS_UNSELECTED = 0, 1, 2


@dataclass
class DegreeCensus:
    degrees: np.ndarray
    class_codes: np.ndarray
    birth_steps: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.degrees.size

    @property
    def total_degree(self) -> int:
        return int(self.degrees.sum())

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.degrees, return_counts=True)
        return {int(k): int(c) for k, c in zip(values, counts)}

    def write_census_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("degree,count\n")
            for k, c in sorted(self.histogram().items()):
                fh.write(f"{k},{c}\n")

    def write_vertex_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("vertex,degree,class,birth_step\n")
            for i in range(self.n_vertices):
                fh.write(
                    f"{i},{int(self.degrees[i])},{CLASS_NAMES[self.class_codes[i]]},"
                    f"{int(self.birth_steps[i])}\n"
                )


def classify_vertices(model: NetworkModel) -> np.ndarray:
    codes = np.full(model.n_vertices, CLASS_UNSELECTED, dtype=np.int8)
    codes[model.bound_end] = CLASS_BOUND
    codes[model.birth_step == 0] = CLASS_INITIAL
    return codes


def degree_census(model: NetworkModel) -> DegreeCensus:
    return DegreeCensus(
        degrees=model.degrees().copy(),
        class_codes=classify_vertices(model),
        birth_steps=model.birth_step.copy(),
    )


def attachment_probability(model: NetworkModel, z: int) -> float:
    """Linear preferential weight of vertex z: deg(z) / (2 * n_e)."""
    if model.n_edges == 0:
        raise ValueError("attachment probability undefined on an edgeless model")
    return model.degree(z) / (2 * model.n_edges)


def attachment_probabilities(model: NetworkModel) -> np.ndarray:
    if model.n_edges == 0:
        raise ValueError("attachment probability undefined on an edgeless model")
    return model.degrees() / (2.0 * model.n_edges)


def measured_ecum(trace: StepTrace, delta: int) -> float:
    """Edge-cumulative distribution from the trace: sum(n_e[0..delta]) / n_e[t]."""
    t = trace.last_step
    if not 0 <= delta <= t:
        raise ValueError(f"delta must lie in [0, {t}], got {delta}")
    return sum(trace.n_e[: delta + 1]) / trace.n_e[t]


@dataclass(frozen=True)
class ThresholdStats:
    s_leq: int
    s_gt: int
    q_leq: int
    q_gt: int


def threshold_stats(census: DegreeCensus, k: int) -> ThresholdStats:
    """Vertex counts and degree sums on both sides of the degree cut k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    low = census.degrees <= k
    q_leq = int(census.degrees[low].sum())
    return ThresholdStats(
        s_leq=int(low.sum()),
        s_gt=int(census.n_vertices - low.sum()),
        q_leq=q_leq,
        q_gt=census.total_degree - q_leq,
    )


def measured_vk_ek(census: DegreeCensus, k: int, n_v: int, n_e: int) -> tuple[float, float]:
    stats = threshold_stats(census, k)
    return stats.s_gt / n_v, stats.q_gt / (2 * n_e)


def write_ecum_csv(trace: StepTrace, path) -> None:
    t = trace.last_step
    with open(path, "w", newline="") as fh:
        fh.write("delta,p_ecum\n")
        for delta in range(0, max(t, 0)):
            fh.write(f"{delta},{measured_ecum(trace, delta)!r}\n")


def write_threshold_csv(census: DegreeCensus, path) -> None:
    ks = sorted(census.histogram())
    with open(path, "w", newline="") as fh:
        fh.write("k,s_leq,s_gt,q_leq,q_gt\n")
        for k in ks:
            st = threshold_stats(census, k)
            fh.write(f"{k},{st.s_leq},{st.s_gt},{st.q_leq},{st.q_gt}\n")
