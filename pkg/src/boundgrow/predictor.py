"""Closed-form predictions for the growing-network models.

Everything here is pure arithmetic: vertex/edge/bound-edge counts, degree
formulas per vertex class, tail probabilities, power-law exponents,
edge-cumulative distributions and the threshold statistics (v_k, e_k).

Integer quantities use Python ints (arbitrary precision, no overflow) and
exact rationals use fractions.Fraction, so every "exact" comparison in the
verification harness really is exact. Churn probabilities may be floats or
Fractions; results follow the input type.

Conventions: n_v0/n_e0 are the initial model's counts, m_v/m_e the seed's,
r the bound thickness, and p = (1-p_r)(1+p_a) the old-edge retention factor
of the randomized model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class ModelParams:
    n_v0: int
    n_e0: int
    m_v: int
    m_e: int
    r: int
    p_r: object = None  # float or Fraction
    p_a: object = None

    def __post_init__(self):
        if self.n_e0 < 1 or self.m_v < self.r or self.r < 1:
            raise ValueError("need n_e0 >= 1 and m_v >= r >= 1")

    @property
    def p(self):
        """Old-edge retention factor (1 - p_r) * (1 + p_a)."""
        if self.p_r is None or self.p_a is None:
            return None
        return (1 - self.p_r) * (1 + self.p_a)

    @property
    def growth_edges_per_bound(self) -> int:
        return self.m_e + 2 * self.m_v

    @classmethod
    def from_config(cls, config) -> "ModelParams":
        seed_set = config.seed_set
        if not seed_set.homogeneous:
            raise ValueError("closed forms need seeds sharing one (m_v, m_e)")
        seed = seed_set.seeds[0]
        return cls(
            n_v0=config.initial.m_v,
            n_e0=config.initial.m_e,
            m_v=seed.m_v,
            m_e=seed.m_e,
            r=config.r,
            p_r=config.p_r,
            p_a=config.p_a,
        )


def geometric_sum(q: int, n: int):
    """sum_{k=0}^{n-1} q^k, exact; degenerates to n when q == 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if q == 1:
        return n
    return (q**n - 1) // (q - 1)


# -- counts ------------------------------------------------------------------


def counts_deterministic(params: ModelParams, t: int) -> tuple[int, int, int]:
    """(n_v, n_e, n_be) of the deterministic model at step t, exact ints."""
    if t < 0:
        raise ValueError("t must be >= 0")
    g = geometric_sum(2 * params.r, t)
    n_v = params.n_v0 + params.m_v * params.n_e0 * g
    n_e = params.n_e0 + params.growth_edges_per_bound * params.n_e0 * g
    n_be = (2 * params.r) ** t * params.n_e0
    return n_v, n_e, n_be


def counts_randomized(params: ModelParams, t: int):
    """(n_v, n_e, n_be) of the randomized model; n_e is the corrected closed form.

    The leading term carries the factor n_e0, which the recursion
    n_e'(s) = |Y(s)| + p * n_e'(s-1) with base n_e'(1) = (1+m_e+2m_v)*n_e0
    forces. n_v and n_be are unaffected by churn and stay integer-exact.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    p = params.p
    if p is None:
        raise ValueError("randomized counts need p_r and p_a")
    two_r = 2 * params.r
    if p == two_r:
        raise ZeroDivisionError("p == 2r (unreachable for valid probabilities)")
    n_v, _, n_be = counts_deterministic(params, t)
    n_e = p ** (t - 1) * params.n_e0 + (
        params.growth_edges_per_bound * params.n_e0 * (two_r**t - p**t) / (two_r - p)
    )
    return n_v, n_e, n_be


def counts_randomized_printed(params: ModelParams, t: int):
    """Edge count with the bare p^(t-1) leading term (negative-control oracle)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    p = params.p
    two_r = 2 * params.r
    return p ** (t - 1) + (
        params.growth_edges_per_bound * params.n_e0 * (two_r**t - p**t) / (two_r - p)
    )


def randomized_recursion_counts(params: ModelParams, t: int) -> list:
    """Expected edge counts by iterating n_e'(s) = |Y(s)| + p*n_e'(s-1).

    Anchored at n_e'(0) = n_e0 and n_e'(1) = (1+m_e+2m_v)*n_e0; this is the
    independent oracle the closed form must reproduce.
    """
    p = params.p
    out = [params.n_e0]
    if t >= 1:
        out.append((1 + params.growth_edges_per_bound) * params.n_e0)
    for s in range(2, t + 1):
        y = params.growth_edges_per_bound * (2 * params.r) ** (s - 1) * params.n_e0
        out.append(y + p * out[-1])
    return out


def deterministic_counts_printed_recursion(params: ModelParams, t: int) -> list[int]:
    """Edge counts under the broken recursion n_e(k) = (1+m_e+2m_v)*n_e(k-1).

    Negative control: diverges from the real model at k >= 2 because the
    growth term must multiply the bound-edge count, not the edge count.
    """
    out = [params.n_e0]
    if t >= 1:
        out.append(params.n_e0 + params.growth_edges_per_bound * params.n_e0)
    for _ in range(2, t + 1):
        out.append((1 + params.growth_edges_per_bound) * out[-1])
    return out


# -- averages and growth sizes -------------------------------------------------


def average_degree_limit(params: ModelParams, mode: str) -> float:
    """Large-t average degree: 4 + <k>_0 deterministic, churn-discounted otherwise."""
    k0 = 2 * params.m_e / params.m_v
    if mode in ("deterministic", "rewire"):
        return 2 * params.growth_edges_per_bound / params.m_v
    if mode == "randomized":
        p = params.p
        two_r = 2 * params.r
        return float((k0 / 2 + 2) * (two_r - 1) / (two_r - p))
    raise ValueError(f"unknown mode {mode!r}")


def new_growth_sizes(params: ModelParams, t: int) -> tuple[int, int, float]:
    """(|X(t)|, |Y(t)|, newly-added average degree) for step t >= 1."""
    if t < 1:
        raise ValueError("t must be >= 1")
    scale = (2 * params.r) ** (t - 1) * params.n_e0
    x = params.m_v * scale
    y = params.growth_edges_per_bound * scale
    return x, y, 2 * y / x


# -- degree spectrum -----------------------------------------------------------


def degree_initial_vertex(d0: int, t: int, r: int, m_v: int) -> tuple[int, int]:
    """(degree, bound-edge membership count) at step t of an initial vertex.

    Every growth step multiplies the incident bound-edge count by r and adds
    m_v new neighbours per incident bound edge.
    """
    if d0 < 0 or t < 0:
        raise ValueError("need d0 >= 0 and t >= 0")
    degree = (1 + m_v * geometric_sum(r, t)) * d0
    return degree, r**t * d0


def degree_seed_vertex(
    dG: int, s: int, t: int, r: int, m_v: int, selected: bool
) -> tuple[int, int]:
    """(degree, bound count) at step t of a seed vertex added at step s <= t.

    A selected vertex starts with 2 bound edges; an unselected one keeps
    degree dG + 2 forever.
    """
    if not 1 <= s <= t:
        raise ValueError("need 1 <= s <= t")
    if not selected:
        return dG + 2, 0
    degree = dG + 2 + 2 * m_v * geometric_sum(r, t - s)
    return degree, 2 * r ** (t - s)


def class_threshold_degree(params: ModelParams, d1: int, tau: int, t: int) -> int:
    """Degree cut separating {initial + selected at s <= tau} from the rest.

    d1 is the largest selected seed degree; the cut is the degree a
    d1-vertex selected at step tau+1 has at step t.
    """
    if not 1 <= tau <= t - 1:
        raise ValueError("need 1 <= tau <= t-1")
    return degree_seed_vertex(d1, tau + 1, t, params.r, params.m_v, True)[0]


# -- tail probabilities and exponents -------------------------------------------


@dataclass(frozen=True)
class TailEstimate:
    tail_exact: Fraction
    tail_asymptotic: float
    pk_asymptotic: float


def tail_and_pk(params: ModelParams, tau: int, t: int) -> TailEstimate:
    """P(degree > class threshold at tau): exact rational plus asymptotics."""
    if not 0 < tau < t:
        raise ValueError("need 0 < tau < t")
    two_r = 2 * params.r
    num = params.n_v0 + params.r * params.n_e0 * geometric_sum(two_r, tau)
    den = params.n_v0 + params.m_v * params.n_e0 * geometric_sum(two_r, t)
    scale = float(two_r) ** (tau - t)
    return TailEstimate(
        tail_exact=Fraction(num, den),
        tail_asymptotic=params.r / params.m_v * scale,
        pk_asymptotic=params.r * (two_r - 1) / params.m_v * scale,
    )


@dataclass(frozen=True)
class ExponentBundle:
    h: float
    gamma: float
    gamma_r1: float


def exponents(r: int, m_v: int) -> ExponentBundle:
    """h(r) = 2r/ln(2r) + 1/ln(2r+m_v) and the power-law exponent h(r)*ln(2r).

    At r = 1 the exponent reduces to 2 + ln2/ln(2+m_v), which lies in (2, 3).
    """
    if r < 1 or m_v < 1:
        raise ValueError("need r >= 1 and m_v >= 1")
    two_r = 2 * r
    h = two_r / math.log(two_r) + 1 / math.log(two_r + m_v)
    return ExponentBundle(
        h=h,
        gamma=h * math.log(two_r),
        gamma_r1=2 + math.log(2) / math.log(2 + m_v),
    )


# -- edge-cumulative distribution ------------------------------------------------


def ecum_predicted(params: ModelParams, delta: int, t: int, mode: str):
    """(exact, asymptotic) edge-cumulative distribution at cut delta.

    Exact: sum of per-step edge counts up to delta over the step-t count.
    Asymptotic: (2r/(2r-1))*(2r)^(delta-t) deterministic (rewire shares the
    deterministic counts), (2r)^(delta-t)/(2r-1) randomized.
    """
    if not 0 <= delta < t:
        raise ValueError("need 0 <= delta < t")
    two_r = 2 * params.r
    if mode in ("deterministic", "rewire"):
        total = counts_deterministic(params, t)[1]
        partial = sum(counts_deterministic(params, s)[1] for s in range(delta + 1))
        exact = Fraction(partial, total)
        asym = two_r / (two_r - 1) * float(two_r) ** (delta - t)
    elif mode == "randomized":
        total = counts_randomized(params, t)[1]
        partial = params.n_e0
        for s in range(1, delta + 1):
            partial = partial + counts_randomized(params, s)[1]
        exact = partial / total
        asym = float(two_r) ** (delta - t) / (two_r - 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return exact, asym


# -- threshold statistics (v_k, e_k) ----------------------------------------------


def vk_ek_exact(params: ModelParams, m_e_star: int, tau: int, t: int) -> tuple[Fraction, Fraction]:
    """Exact (v_k, e_k) at the tau class threshold, descending-degree selection.

    v_k counts the initial vertices plus the bound-selected ones of steps
    1..tau; e_k sums their degrees from the per-class degree formulas.
    Requires r >= 2 (step-tau classes must separate from step-tau+1).
    """
    if params.r < 2:
        raise ValueError("threshold statistics are defined for r >= 2")
    if not 1 <= tau <= t - 2:
        raise ValueError("need 1 <= tau <= t-2")
    r, m_v, n_e0 = params.r, params.m_v, params.n_e0
    two_r = 2 * r
    n_v, n_e, _ = counts_deterministic(params, t)
    s_gt = params.n_v0 + r * n_e0 * geometric_sum(two_r, tau)
    q_gt = 2 * n_e0 * (1 + m_v * geometric_sum(r, t))
    for s in range(1, tau + 1):
        per_edge = m_e_star + 2 * r + 2 * r * m_v * geometric_sum(r, t - s)
        q_gt += n_e0 * two_r ** (s - 1) * per_edge
    return Fraction(s_gt, n_v), Fraction(q_gt, 2 * n_e)


def vk_ek_predicted(params: ModelParams, m_e_star: int, tau_minus_t: int) -> tuple[float, float]:
    """Asymptotic (v_k, e_k) as A*(2r)^(tau-t) + B*2^(tau-t) style power laws.

    Coefficients follow from the same degree sums as vk_ek_exact:
    A = [(m*_e + 2r) - 2r*m_v/(r-1)] / (2(m_e + 2m_v)) and
    B = m_v(2r-1) / ((r-1)(m_e + 2m_v)).
    """
    if params.r < 2:
        raise ValueError("threshold statistics are defined for r >= 2")
    if tau_minus_t > 0:
        raise ValueError("tau must not exceed t")
    r, m_v, m_e = params.r, params.m_v, params.m_e
    two_r = 2 * r
    denom = m_e + 2 * m_v
    v = r / m_v * float(two_r) ** tau_minus_t
    a = ((m_e_star + two_r) - two_r * m_v / (r - 1)) / (2 * denom)
    b = m_v * (two_r - 1) / ((r - 1) * denom)
    e = a * float(two_r) ** tau_minus_t + b * 2.0**tau_minus_t
    return v, e


@dataclass(frozen=True)
class AnalyticRatios:
    pk_over_ecum: float
    ple_over_ecum: float
    ecum_link: int
    pk_over_ecum_randomized: float


def analytic_ratios(params: ModelParams) -> AnalyticRatios:
    """Constant ratios tying P(k), P(k* <= k) and the two cumulative forms."""
    r, m_v = params.r, params.m_v
    two_r = 2 * r
    return AnalyticRatios(
        pk_over_ecum=(two_r - 1) ** 2 / (2 * m_v),
        ple_over_ecum=(m_v - r) * (two_r - 1) / (two_r * m_v),
        ecum_link=two_r,
        pk_over_ecum_randomized=r * (two_r - 1) ** 2 / m_v,
    )


# -- generation feasibility --------------------------------------------------------

INT64_EDGE_CAP = 2**62
VERTEX_ID_CAP = 2**31


def generation_feasible(params: ModelParams, t: int, allow_big: bool = False) -> tuple[bool, str]:
    """Whether step t is generable with int64 edge arrays and 32-bit-safe ids.

    allow_big lifts the edge-count cap (arrays stay int64; memory becomes the
    binding constraint) but never the vertex-id cap, which the pair encoding
    requires.
    """
    n_v, n_e, _ = counts_deterministic(params, t)
    if n_v >= VERTEX_ID_CAP:
        return False, f"n_v(t)={n_v} exceeds the vertex id cap 2^31"
    if not allow_big and n_e >= INT64_EDGE_CAP:
        return False, f"n_e(t)={n_e} exceeds the int64 cap; pass allow_big to override"
    return True, ""
