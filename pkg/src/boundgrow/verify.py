"""Oracle comparisons between closed forms and generated models.

Each check appends a ReportEntry carrying the formula it tested (the `law`
string), the predicted and measured values, the comparison mode and the
verdict. Exact entries fail on any nonzero difference; asymptotic claims are
tested as ratio-constancy and slope checks, never as absolute equalities.

Negative controls are available for the two count recursions that a correct
implementation must NOT satisfy (a broken deterministic edge recursion and
the randomized closed form with its leading factor dropped); wiring them in
makes the harness fail, which documents why the corrected forms are used.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analytics, predictor
from .engine import ConfigError, GrowthConfig, StepTrace, init_model, run
from .graph import NetworkModel
from .predictor import ModelParams
from .seeds import SeedGraph

# Tolerances pinned for the acceptance checks.
SLOPE_RTOL = 0.05
SPREAD_TOL = 0.10
PROFILE_TOL = 0.10
EK_RTOL = 0.10
RECURSION_RTOL = 1e-9
MIN_POWER_LAW_STEPS = 6

LAW_NV = "n_v(t) = n_v0 + m_v*n_e0*((2r)^t - 1)/(2r - 1)"
LAW_NE_DET = "n_e(t) = n_e0 + (m_e + 2m_v)*n_e0*((2r)^t - 1)/(2r - 1)"
LAW_NBE = "n_be(t) = (2r)^t * n_e0"
LAW_NE_RAND = (
    "n_e'(t) = p^(t-1)*n_e0 + (m_e + 2m_v)*n_e0*((2r)^t - p^t)/(2r - p), p = (1-p_r)(1+p_a)"
)
LAW_NE_RECURSION = "n_e'(s) = |Y(s)| + p*n_e'(s-1)"
LAW_XY = "|X(t)| = m_v*(2r)^(t-1)*n_e0, |Y(t)| = (m_e + 2m_v)*(2r)^(t-1)*n_e0"
LAW_DEG_INITIAL = "deg(u,t) = (1 + m_v*(r^t - 1)/(r - 1))*deg(u,0)"
LAW_DEG_SELECTED = "deg(x,t) = deg(x,G) + 2 + 2m_v*(r^(t-s) - 1)/(r - 1)"
LAW_DEG_UNSELECTED = "deg(y,t) = deg(y,G) + 2"
LAW_BOUND_INITIAL = "bound_count(u,t) = r^t * deg(u,0)"
LAW_BOUND_SELECTED = "bound_count(x,t) = 2*r^(t-s)"
LAW_DIAMETER = "D(t) <= t + 1 + D(0)"
LAW_ECUM_DET = "P_ecum(delta) ~ (2r/(2r-1))*(2r)^(delta-t)"
LAW_ECUM_RAND = "P'_ecum(delta) ~ (2r)^(delta-t)/(2r-1), independent of p"
LAW_VK = "v_k = S(>k)/n_v(t), exact tail rational at class thresholds"
LAW_EK = "e_k = Q(>k)/(2*n_e(t)), degree-class sum"
LAW_REWIRE = "rewire mode: n_e(t) equals the deterministic count exactly"
CONTROL_NE_DET = "control: n_e(k) = (1 + m_e + 2m_v)*n_e(k-1) (broken growth term)"
CONTROL_NE_RAND = "control: n_e'(t) with bare p^(t-1) leading term (n_e0 dropped)"


@dataclass
class ReportEntry:
    name: str
    predicted: object
    measured: object
    mode: str
    passed: bool
    law: str = ""
    detail: str = ""

    def format_line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = (
            f"{verdict}  {self.name}: predicted={self.predicted} measured={self.measured}"
            f" [{self.mode}]"
        )
        if self.detail:
            line += f" ({self.detail})"
        if self.law:
            line += f"  law: {self.law}"
        return line

    def to_json_obj(self) -> dict:
        def plain(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, (np.integer,)):
                return int(x)
            if isinstance(x, (np.floating,)):
                return float(x)
            return x

        return {
            "name": self.name,
            "predicted": plain(self.predicted),
            "measured": plain(self.measured),
            "mode": self.mode,
            "passed": self.passed,
            "law": self.law,
            "detail": self.detail,
        }


@dataclass
class PredictionReport:
    title: str
    config: dict = field(default_factory=dict)
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, name, predicted, measured, mode, passed, law="", detail="") -> None:
        self.entries.append(
            ReportEntry(name, predicted, measured, mode, bool(passed), law, detail)
        )

    def extend(self, other: "PredictionReport") -> None:
        self.entries.extend(other.entries)

    def to_text(self) -> str:
        lines = [f"# {self.title}"]
        lines += [e.format_line() for e in self.entries]
        n_fail = sum(not e.passed for e in self.entries)
        lines.append(f"# {len(self.entries)} checks, {n_fail} failed")
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "title": self.title,
            "config": self.config,
            "passed": self.passed,
            "entries": [e.to_json_obj() for e in self.entries],
        }

    def write_text(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _ols_slope(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = x - x.mean()
    return float(np.dot(dx, y - y.mean()) / np.dot(dx, dx))


# -- counts ---------------------------------------------------------------------


def verify_counts(trace: StepTrace, params: ModelParams, mode: str) -> PredictionReport:
    """Per-step count checks: exact in deterministic/rewire mode, drift <= s for
    the randomized edge count (one half-up rounding pair per churn step)."""
    report = PredictionReport(title=f"counts ({mode})")
    t = trace.last_step
    worst = {"n_v": 0, "n_be": 0, "x": 0, "y": 0}
    ne_exact_bad = 0
    ne_drift_ok = True
    ne_worst = 0.0
    for s in range(t + 1):
        n_v, n_e_det, n_be = predictor.counts_deterministic(params, s)
        worst["n_v"] = max(worst["n_v"], abs(trace.n_v[s] - n_v))
        worst["n_be"] = max(worst["n_be"], abs(trace.n_be[s] - n_be))
        if s >= 1:
            x, y, _ = predictor.new_growth_sizes(params, s)
            worst["x"] = max(worst["x"], abs(trace.x_size[s] - x))
            worst["y"] = max(worst["y"], abs(trace.y_size[s] - y))
        if mode in ("deterministic", "rewire"):
            if trace.n_e[s] != n_e_det:
                ne_exact_bad += 1
        elif s >= 1:
            n_e_rand = predictor.counts_randomized(params, s)[1]
            drift = abs(trace.n_e[s] - float(n_e_rand))
            ne_worst = max(ne_worst, drift)
            if drift > s + 1e-9:
                ne_drift_ok = False
    report.add("vertex count", 0, worst["n_v"], "exact", worst["n_v"] == 0, LAW_NV,
               detail=f"all steps 0..{t}, max |diff|")
    report.add("bound-edge count", 0, worst["n_be"], "exact", worst["n_be"] == 0, LAW_NBE,
               detail=f"all steps 0..{t}, max |diff|")
    report.add("growth sizes |X|,|Y|", 0, worst["x"] + worst["y"], "exact",
               worst["x"] == 0 and worst["y"] == 0, LAW_XY)
    if mode in ("deterministic", "rewire"):
        law = LAW_NE_DET if mode == "deterministic" else LAW_REWIRE
        report.add("edge count", 0, ne_exact_bad, "exact", ne_exact_bad == 0, law,
                   detail="steps with mismatch")
    else:
        report.add("edge count drift", f"<= s per step", f"max {ne_worst:.3g}",
                   "additive_drift", ne_drift_ok, LAW_NE_RAND)
        seq = predictor.randomized_recursion_counts(params, t)
        worst_rel = 0.0
        for s in range(1, t + 1):
            closed = predictor.counts_randomized(params, s)[1]
            rel = abs(float(closed - seq[s])) / max(float(seq[s]), 1.0)
            worst_rel = max(worst_rel, rel)
        report.add("closed form vs recursion", f"rel diff <= {RECURSION_RTOL}",
                   f"{worst_rel:.3e}", "relative_tolerance", worst_rel <= RECURSION_RTOL,
                   LAW_NE_RECURSION)
    return report


def negative_control_counts(trace: StepTrace, params: ModelParams, mode: str) -> PredictionReport:
    """Wire the broken recursions in as oracles; a correct model fails them."""
    report = PredictionReport(title="negative controls")
    t = trace.last_step
    if mode in ("deterministic", "rewire"):
        printed = predictor.deterministic_counts_printed_recursion(params, t)
        mismatch = [s for s in range(min(t, 2), t + 1) if trace.n_e[s] != printed[s]]
        detail = ""
        if mismatch:
            s = mismatch[0]
            detail = f"first divergence at step {s}: {printed[s]} != {trace.n_e[s]}"
        report.add("printed deterministic edge recursion", printed[t] if t >= 0 else None,
                   trace.n_e[t], "exact", not mismatch, CONTROL_NE_DET, detail=detail)
    if mode == "randomized" and t >= 2:
        seq = predictor.randomized_recursion_counts(params, t)
        worst_rel = 0.0
        for s in range(2, t + 1):
            printed = predictor.counts_randomized_printed(params, s)
            rel = abs(float(printed - seq[s])) / max(float(seq[s]), 1.0)
            worst_rel = max(worst_rel, rel)
        report.add("printed randomized closed form vs recursion",
                   f"rel diff <= {RECURSION_RTOL}", f"{worst_rel:.3e}",
                   "relative_tolerance", worst_rel <= RECURSION_RTOL, CONTROL_NE_RAND,
                   detail="leading term lacks the n_e0 factor")
    return report


# -- degree spectrum --------------------------------------------------------------


def verify_degree_spectrum(model: NetworkModel, params: ModelParams) -> PredictionReport:
    """Every vertex degree and bound membership must equal its class formula."""
    report = PredictionReport(title="degree spectrum")
    t = model.step
    r, m_v = params.r, params.m_v
    deg = model.degrees()
    bc = model.bound_membership_counts()
    birth = model.birth_step
    codes = analytics.classify_vertices(model)

    expected_deg = np.empty(model.n_vertices, dtype=np.int64)
    expected_bc = np.empty(model.n_vertices, dtype=np.int64)
    init = codes == analytics.CLASS_INITIAL
    factor = 1 + m_v * predictor.geometric_sum(r, t)
    expected_deg[init] = factor * model.seed_degree[init]
    expected_bc[init] = r**t * model.seed_degree[init]
    unsel = codes == analytics.CLASS_UNSELECTED
    expected_deg[unsel] = model.seed_degree[unsel] + 2
    expected_bc[unsel] = 0
    selected = codes == analytics.CLASS_BOUND
    for s in np.unique(birth[selected]):
        mask = selected & (birth == s)
        expected_deg[mask] = (
            model.seed_degree[mask] + 2 + 2 * m_v * predictor.geometric_sum(r, t - int(s))
        )
        expected_bc[mask] = 2 * r ** (t - int(s))

    for name, mask, law in (
        ("initial degrees", init, LAW_DEG_INITIAL),
        ("bound-selected degrees", selected, LAW_DEG_SELECTED),
        ("unselected degrees", unsel, LAW_DEG_UNSELECTED),
    ):
        bad = int(np.count_nonzero(deg[mask] != expected_deg[mask]))
        report.add(name, 0, bad, "exact", bad == 0, law,
                   detail=f"{int(mask.sum())} vertices, mismatches")
    for name, mask, law in (
        ("initial bound membership", init, LAW_BOUND_INITIAL),
        ("bound-selected membership", selected, LAW_BOUND_SELECTED),
        ("unselected membership", unsel, LAW_BOUND_SELECTED),
    ):
        bad = int(np.count_nonzero(bc[mask] != expected_bc[mask]))
        report.add(name, 0, bad, "exact", bad == 0, law,
                   detail=f"{int(mask.sum())} vertices, mismatches")
    return report


# -- diameter ----------------------------------------------------------------------


def verify_diameter(model: NetworkModel, d0: int, backend: str | None = None) -> PredictionReport:
    report = PredictionReport(title="diameter")
    t = model.step
    bound = t + 1 + d0
    measured = model.diameter(backend=backend)
    if math.isinf(measured):
        report.add("diameter bound", f"<= {bound}", "infinite", "info", True,
                   LAW_DIAMETER, detail="model disconnected; bound not applicable")
    else:
        report.add("diameter bound", f"<= {bound}", measured, "upper_bound",
                   measured <= bound, LAW_DIAMETER)
    return report


# -- power law ----------------------------------------------------------------------


def _ecum_profile(trace: StepTrace, deltas) -> np.ndarray:
    return np.array([analytics.measured_ecum(trace, d) for d in deltas], dtype=float)


def verify_power_law(
    traces: list[StepTrace],
    params_list: list[ModelParams],
    mode: str,
    slope_rtol: float = SLOPE_RTOL,
    spread_tol: float = SPREAD_TOL,
    profile_tol: float = PROFILE_TOL,
) -> PredictionReport:
    """Power-law shape of the edge-cumulative distribution.

    (a) measured/asymptotic ratio constancy over the mid-range (coefficient
    of variation), (b) log-log regression slope within slope_rtol of 1, and
    (c) in randomized mode, agreement of the delta-profiles across the
    supplied (p_r, p_a) pairs (pointwise and in slope).
    """
    report = PredictionReport(title=f"edge-cumulative power law ({mode})")
    law = LAW_ECUM_DET if mode != "randomized" else LAW_ECUM_RAND
    profiles = []
    for trace, params in zip(traces, params_list):
        t = trace.last_step
        if t < MIN_POWER_LAW_STEPS:
            raise ValueError(f"power-law checks need t >= {MIN_POWER_LAW_STEPS}, got {t}")
        deltas = np.arange(2, t - 1)
        measured = _ecum_profile(trace, deltas)
        asym = np.array(
            [predictor.ecum_predicted(params, int(d), t, mode)[1] for d in deltas]
        )
        ratios = measured / asym
        cv = float(ratios.std() / ratios.mean())
        x = (deltas - t) * math.log(2 * params.r)
        slope = _ols_slope(x, np.log(measured))
        label = "" if len(traces) == 1 else f" (p_r={params.p_r}, p_a={params.p_a})"
        report.add(f"ratio constancy{label}", f"cv <= {spread_tol}", f"cv = {cv:.4f}",
                   "ratio_convergence", cv <= spread_tol, law,
                   detail=f"delta in [2, {t - 2}]")
        report.add(f"log-log slope{label}", 1.0, round(slope, 4), "relative_tolerance",
                   abs(slope - 1.0) <= slope_rtol, law)
        profiles.append((measured, slope, params))
    if mode == "randomized" and len(profiles) >= 2:
        base_m, base_slope, base_p = profiles[0]
        for m, slope, p in profiles[1:]:
            point = float(np.max(np.abs(m / base_m - 1.0)))
            slope_diff = abs(slope - base_slope) / abs(base_slope)
            detail = f"(p_r={base_p.p_r},p_a={base_p.p_a}) vs (p_r={p.p_r},p_a={p.p_a})"
            report.add("p-independence: profile match", f"<= {profile_tol}",
                       f"max pointwise {point:.4f}", "relative_tolerance",
                       point <= profile_tol, LAW_ECUM_RAND, detail=detail)
            report.add("p-independence: slope match", f"<= {profile_tol}",
                       f"{slope_diff:.4f}", "relative_tolerance",
                       slope_diff <= profile_tol, LAW_ECUM_RAND, detail=detail)
    return report


# -- threshold statistics -------------------------------------------------------------


def verify_theorem3(
    model: NetworkModel,
    params: ModelParams,
    seed: SeedGraph,
    rel_tol: float = EK_RTOL,
) -> PredictionReport:
    """Exact v_k and near-exact e_k at every degree-class threshold.

    Needs r >= 2, descending-degree selection and a homogeneous seed set; the
    thresholds come from the degree classes themselves, where the tail is an
    exact rational.
    """
    if params.r < 2:
        raise ValueError("threshold statistics need r >= 2")
    report = PredictionReport(title="threshold statistics (v_k, e_k)")
    t = model.step
    census = analytics.degree_census(model)
    d1 = seed.max_degree()
    m_e_star = seed.top_degree_sum(params.r)
    n_v, n_e, _ = predictor.counts_deterministic(params, t)
    for tau in range(1, t - 1):
        k = predictor.class_threshold_degree(params, d1, tau, t)
        stats = analytics.threshold_stats(census, k)
        v_exact, e_exact = predictor.vk_ek_exact(params, m_e_star, tau, t)
        v_meas = Fraction(stats.s_gt, n_v)
        e_meas = Fraction(stats.q_gt, 2 * n_e)
        tail = predictor.tail_and_pk(params, tau, t).tail_exact
        report.add(f"v_k exact (tau={tau}, k={k})", str(v_exact), str(v_meas), "exact",
                   v_meas == v_exact == tail, LAW_VK)
        rel = abs(float(e_meas - e_exact)) / float(e_exact)
        report.add(f"e_k (tau={tau}, k={k})", float(e_exact), float(e_meas),
                   f"relative_tolerance({rel_tol})", rel <= rel_tol, LAW_EK,
                   detail=f"rel diff {rel:.3e}")
    return report


# -- full suite -------------------------------------------------------------------------


SIBLING_PAIRS = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3)))


def run_full_verification(
    config: GrowthConfig,
    negative_controls: bool = False,
    backend: str | None = None,
) -> tuple[NetworkModel, StepTrace, PredictionReport]:
    """Generate per the config and run every applicable oracle comparison."""
    config.validate()
    if not config.seed_set.homogeneous:
        raise ConfigError("seeds: closed-form verification needs seeds sharing one (m_v, m_e)")
    params = ModelParams.from_config(config)
    model, trace = run(config)
    report = PredictionReport(
        title=f"verification ({config.mode}, t={config.steps})", config=config.to_dict()
    )
    report.extend(verify_counts(trace, params, config.mode))

    if config.mode in ("deterministic", "rewire"):
        if config.mode == "deterministic":
            report.extend(verify_degree_spectrum(model, params))
        d0 = _initial_diameter(config)
        report.extend(verify_diameter(model, d0, backend=backend))
        if config.steps >= MIN_POWER_LAW_STEPS:
            report.extend(verify_power_law([trace], [params], "deterministic"))
        if (
            config.mode == "deterministic"
            and config.r >= 2
            and config.effective_selection_policy == "by_descending_degree"
            and config.steps >= MIN_POWER_LAW_STEPS
        ):
            report.extend(
                verify_theorem3(model, params, config.seed_set.seeds[0])
            )
    else:
        report.extend(verify_diameter(model, _initial_diameter(config), backend=backend))
        if config.steps >= MIN_POWER_LAW_STEPS:
            sibling = _sibling_config(config)
            _, strace = run(sibling)
            report.extend(
                verify_power_law(
                    [trace, strace],
                    [params, ModelParams.from_config(sibling)],
                    "randomized",
                )
            )
    if negative_controls:
        report.extend(negative_control_counts(trace, params, config.mode))
    return model, trace, report


def _initial_diameter(config: GrowthConfig) -> int:
    initial_model, _ = init_model(
        GrowthConfig(initial=config.initial, seed_set=config.seed_set, r=config.r, steps=0)
    )
    d0 = initial_model.diameter()
    if math.isinf(d0):
        raise ConfigError("initial: graph is disconnected")
    return int(d0)


def _sibling_config(config: GrowthConfig) -> GrowthConfig:
    """Second (p_r, p_a) pair with the same structure, for Theorem-1 checks."""
    current = (config.p_r, config.p_a)
    pick = SIBLING_PAIRS[1] if current == SIBLING_PAIRS[0] else SIBLING_PAIRS[0]
    return GrowthConfig(
        initial=config.initial,
        seed_set=config.seed_set,
        r=config.r,
        mode="randomized",
        steps=config.steps,
        rng_seed=config.rng_seed + 1,
        p_r=pick[0],
        p_a=pick[1],
        selection_policy=config.selection_policy,
        allow_big=config.allow_big,
    )
