"""Deterministic, seedable benchmark harness with CSV output.

Each experiment expands into (cell, trial) work items; a trial's random
stream is derived from (master seed, cell index, trial index), so results
are bit-identical for a given seed regardless of the worker count or
completion order.  Rows are emitted sorted by (cell, trial).  Wall-clock
columns are informational only and are excluded from reproducibility
comparisons.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import costmodel, dense, estimator, magic, masks
from . import stabilizer as sb

WALL_COLUMNS = ("wall_ns", "total_seconds", "seconds_per_mask")


@dataclass(frozen=True)
class ExperimentRecord:
    """One benchmark row: identity plus a flat name -> value metric map."""

    experiment: str
    mode: str
    phi: float
    t: int
    delta: float
    k: int
    f_t: int
    trial: int
    master_seed: int
    metrics: dict = field(default_factory=dict)

    def row(self, metric_names: Sequence[str]) -> list:
        head = [
            self.experiment, self.mode, repr(self.phi), self.t, repr(self.delta),
            self.k, self.f_t, self.trial, self.master_seed,
        ]
        return head + [_fmt(self.metrics.get(name)) for name in metric_names]


HEAD_COLUMNS = (
    "experiment", "mode", "phi", "t", "delta", "k", "f_t", "trial", "master_seed",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trial_rng(master_seed: int, cell: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(cell, trial))
    )


def _run_grid(
    worker: Callable,
    cells: Sequence,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> list:
    """Evaluate worker(cell, cell_idx, trial_idx, master_seed) on the grid."""
    specs = [(ci, ti) for ci in range(len(cells)) for ti in range(trials)]
    out = {}
    if workers <= 1 or len(specs) <= 1:
        for ci, ti in specs:
            out[(ci, ti)] = worker(cells[ci], ci, ti, master_seed)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(worker, cells[ci], ci, ti, master_seed): (ci, ti)
                for ci, ti in specs
            }
            for fut, key in futures.items():
                out[key] = fut.result()
    return [out[key] for key in sorted(out)]


def write_csv(path: str, records: Sequence[ExperimentRecord], metric_names: Sequence[str]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(HEAD_COLUMNS) + list(metric_names))
        for rec in records:
            writer.writerow(rec.row(metric_names))


def read_metric_columns(path: str, drop_wall: bool = True) -> list:
    """CSV rows minus wall-clock columns, for reproducibility comparisons."""
    with open(path) as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    keep = [i for i, name in enumerate(header) if not drop_wall or name not in WALL_COLUMNS]
    return [[row[i] for i in keep] for row in rows]


# ---------------------------------------------------------------------------
# correlated-run planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelatedPlan:
    f_t: int
    gamma: float
    k_correlated: int
    k_iid: int
    mask_set: masks.MaskSet


def theorem1_plan(model: magic.MagicModel, delta: float, mask_set: masks.MaskSet) -> CorrelatedPlan:
    """Desk-scale supplement choice for the next-order sampling bound.

    The asymptotically optimal supplement count round(10 delta xi) often
    loses its advantage at small t because k is rounded up to whole
    groups of f_t + 1.  This picks the largest f_t at or below the
    optimum whose group-rounded count still undercuts the i.i.d. count
    by at least ceil(f_t / 2) states, falling back to the largest-saving
    f_t when none achieves that margin.
    """
    xi = model.xi_t
    k_iid = costmodel.k_theorem1(xi, delta, 1.0)
    f_cap = min(costmodel.f_t_optimal(delta, xi), len(mask_set))
    best = (0, 1.0, k_iid)
    for f in range(f_cap, -1, -1):
        gamma = magic.gamma_bound(model, mask_set, f)
        if gamma >= xi:
            continue
        k = costmodel.k_theorem1(xi, delta, gamma)
        k = math.ceil(k / (f + 1)) * (f + 1)
        if k_iid - k >= math.ceil(f / 2):
            return CorrelatedPlan(f, gamma, k, k_iid, mask_set)
        if k < best[2]:
            best = (f, gamma, k)
    return CorrelatedPlan(best[0], best[1], best[2], k_iid, mask_set)


def theorem2_plan(model: magic.MagicModel, delta: float, mask_set: masks.MaskSet) -> CorrelatedPlan:
    """Supplement choice for the renormalized-ensemble count."""
    xi = model.xi_t
    f_t = min(costmodel.f_t_optimal(delta, xi), len(mask_set))
    gamma = magic.gamma_bound(model, mask_set, f_t)
    return CorrelatedPlan(
        f_t=f_t,
        gamma=gamma,
        k_correlated=costmodel.k_correlated(xi, delta, f_t),
        k_iid=costmodel.k_sota(xi, delta),
        mask_set=mask_set,
    )


def default_masks(t: int, f_required: int) -> masks.MaskSet:
    plan = masks.plan_supplement(t, f_required)
    if plan.strategy == masks.PADDED:
        # stay at block length t and cap the supplements instead of padding
        if t >= 2 and t % 2 == 0:
            return masks.generate_masks_even(t)
        raise ValueError(f"no direct mask family for t = {t}")
    return masks.generate_for_plan(t, plan)


# ---------------------------------------------------------------------------
# experiment: sparsify-stats
# ---------------------------------------------------------------------------

SPARSIFY_METRICS = ("gamma", "sqnorm", "err2", "converged", "wall_ns")


def _sparsify_trial(cell, cell_idx, trial_idx, master_seed):
    phi, t, delta, mode = cell
    rng = trial_rng(master_seed, cell_idx, trial_idx)
    model = magic.magic_model(phi, t)
    t0 = time.perf_counter_ns()
    if mode == "iid":
        k = costmodel.k_theorem1(model.xi_t, delta, 1.0)
        decomp = magic.sample_iid(model, k, rng)
        gamma = 1.0
        f_t = 0
    else:
        plan = theorem1_plan(model, delta, default_masks(t, 2 * t - 1))
        decomp = magic.sample_correlated(
            model, plan.mask_set, plan.f_t, plan.k_correlated, rng
        )
        gamma = plan.gamma
        f_t = plan.f_t
    sqnorm = estimator.exact_sqnorm(decomp).value
    err2 = None
    converged = None
    if t <= dense.VECTOR_CAP:
        err = estimator.approx_error(decomp, model)
        err2 = err * err
        converged = int(err2 <= delta * delta)
    wall = time.perf_counter_ns() - t0
    metrics = {
        "gamma": gamma, "sqnorm": sqnorm, "err2": err2,
        "converged": converged, "wall_ns": wall,
    }
    return ExperimentRecord(
        experiment="sparsify-stats", mode=mode, phi=phi, t=t, delta=delta,
        k=decomp.k, f_t=f_t, trial=trial_idx, master_seed=master_seed,
        metrics=metrics,
    )


def run_sparsify_stats(
    phi: float,
    ts: Sequence[int],
    deltas: Sequence[float],
    trials: int,
    seed: int,
    workers: int = 1,
    out: Optional[str] = None,
) -> list:
    cells = [(phi, t, d, mode) for t in ts for d in deltas for mode in ("iid", "theorem1")]
    records = _run_grid(_sparsify_trial, cells, trials, seed, workers)
    if out:
        write_csv(out, records, SPARSIFY_METRICS)
    return records


def summarize_sparsify(records: Sequence[ExperimentRecord]) -> dict:
    """Per-cell mean/variance of <psi|psi> and convergence frequency."""
    cells = {}
    for rec in records:
        cells.setdefault((rec.t, rec.delta, rec.mode), []).append(rec)
    out = {}
    for key, recs in sorted(cells.items()):
        norms = np.array([r.metrics["sqnorm"] for r in recs])
        conv = [r.metrics["converged"] for r in recs if r.metrics["converged"] is not None]
        out[key] = {
            "k": recs[0].k,
            "f_t": recs[0].f_t,
            "mean_sqnorm": float(norms.mean()),
            "var_sqnorm": float(norms.var(ddof=1)) if len(norms) > 1 else 0.0,
            "convergence_frequency": float(np.mean(conv)) if conv else None,
            "trials": len(recs),
        }
    return out


# ---------------------------------------------------------------------------
# experiment: worst-case probability estimation
# ---------------------------------------------------------------------------

WORST_CASE_METRICS = (
    "p_true", "p_iid", "p_corr",
    "err_iid", "err_corr",
    "err1_iid", "err2_iid", "err1_corr", "err2_corr",
    "outcome1", "outcome2", "k_iid", "k_corr", "wall_ns",
)


def _worst_case_trial(cell, cell_idx, trial_idx, master_seed):
    phi, t, delta, n_cliffords = cell
    rng = trial_rng(master_seed, cell_idx, trial_idx)
    model = magic.magic_model(phi, t)
    t0 = time.perf_counter_ns()

    circuit = sb.random_clifford_word(t, n_cliffords, rng)
    p1 = sb.random_pauli(t, rng)
    p2 = sb.random_pauli(t, rng)
    s1 = 1 if rng.integers(2) else -1
    s2 = 1 if rng.integers(2) else -1
    chain = [(p1, s1), (p2, s2)]

    k_iid = costmodel.k_sota(model.xi_t, delta)
    plan = theorem2_plan(model, delta, default_masks(t, 2 * t - 1))

    d_iid = magic.sample_iid(model, k_iid, rng)
    d_corr = magic.sample_correlated(
        model, plan.mask_set, plan.f_t, plan.k_correlated, rng,
        mode=magic.THEOREM2,
    )
    est_iid = estimator.pauli_prob(d_iid, circuit, chain)
    est_corr = estimator.pauli_prob(d_corr, circuit, chain)

    metrics = {
        "p_iid": est_iid.value,
        "p_corr": est_corr.value,
        "outcome1": s1, "outcome2": s2,
        "k_iid": k_iid, "k_corr": d_corr.k,
    }
    if t <= dense.DENSITY_CAP:
        vec = dense.apply_clifford_dense(magic.dense_target(model), circuit)
        truth = 1.0
        step_truth = []
        for p, s in chain:
            res = dense.projector_factor(vec, p, s, t)
            if res is None:
                step_truth.append(0.0)
                truth = 0.0
                break
            vec, factor = res
            step_truth.append(factor)
            truth *= factor
        while len(step_truth) < 2:
            step_truth.append(0.0)
        metrics["p_true"] = truth
        metrics["err_iid"] = abs(est_iid.value - truth)
        metrics["err_corr"] = abs(est_corr.value - truth)
        for label, est in (("iid", est_iid), ("corr", est_corr)):
            steps = list(est.step_values) + [0.0] * (2 - len(est.step_values))
            metrics[f"err1_{label}"] = abs(steps[0] - step_truth[0])
            metrics[f"err2_{label}"] = abs(steps[1] - step_truth[1])
    metrics["wall_ns"] = time.perf_counter_ns() - t0
    return ExperimentRecord(
        experiment="worst-case", mode="both", phi=phi, t=t, delta=delta,
        k=d_corr.k, f_t=plan.f_t, trial=trial_idx, master_seed=master_seed,
        metrics=metrics,
    )


def run_worst_case(
    ts: Sequence[int],
    deltas: Sequence[float],
    n_cliffords: int,
    trials: int,
    seed: int,
    phi: float = math.pi / 4,
    workers: int = 1,
    out: Optional[str] = None,
) -> list:
    if any(t > 16 for t in ts):
        raise ValueError("worst-case runs are desk scale: t <= 16")
    cells = [(phi, t, d, n_cliffords) for t in ts for d in deltas]
    records = _run_grid(_worst_case_trial, cells, trials, seed, workers)
    if out:
        write_csv(out, records, WORST_CASE_METRICS)
    return records


def summarize_worst_case(records: Sequence[ExperimentRecord]) -> dict:
    """Max and quantile errors per cell (the worst-case envelope proxy)."""
    cells = {}
    for rec in records:
        cells.setdefault((rec.t, rec.delta), []).append(rec)
    out = {}
    for key, recs in sorted(cells.items()):
        entry = {"trials": len(recs)}
        for label in ("iid", "corr"):
            errs = [r.metrics.get(f"err_{label}") for r in recs]
            errs = np.array([e for e in errs if e is not None])
            if len(errs):
                entry[f"max_err_{label}"] = float(errs.max())
                entry[f"q90_err_{label}"] = float(np.quantile(errs, 0.9))
                entry[f"mean_err_{label}"] = float(errs.mean())
        out[key] = entry
    return out


# ---------------------------------------------------------------------------
# experiment: mask generation timing
# ---------------------------------------------------------------------------

MASK_TIMING_METRICS = ("count", "total_seconds", "seconds_per_mask", "wall_ns")


def run_mask_timing(
    ts: Sequence[int],
    seed: int = 0,
    repeats: int = 3,
    out: Optional[str] = None,
) -> list:
    records = []
    for idx, t in enumerate(ts):
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            mask_set = masks.generate_masks_pow2(t)
            best = min(best, time.perf_counter() - t0)
        records.append(
            ExperimentRecord(
                experiment="mask-timing", mode="pow2", phi=0.0, t=t, delta=0.0,
                k=len(mask_set), f_t=len(mask_set), trial=0, master_seed=seed,
                metrics={
                    "count": len(mask_set),
                    "total_seconds": best,
                    "seconds_per_mask": best / len(mask_set),
                    "wall_ns": int(best * 1e9),
                },
            )
        )
    if out:
        write_csv(out, records, MASK_TIMING_METRICS)
    return records


def timing_exponent(records: Sequence[ExperimentRecord]) -> float:
    """Least-squares slope of log(per-mask seconds) against log t."""
    ts = np.array([r.t for r in records], dtype=float)
    per = np.array([r.metrics["seconds_per_mask"] for r in records], dtype=float)
    return float(np.polyfit(np.log(ts), np.log(per), 1)[0])


# ---------------------------------------------------------------------------
# experiment: cost map
# ---------------------------------------------------------------------------

COST_MAP_COLUMNS = (
    "t", "delta", "xi_t", "chi_t",
    "k_iid_quadratic", "k_sota", "k_iid_tight", "k_theorem1", "k_correlated",
    "k_correlated_asymptotic", "f_t", "beta", "cheapest_regime",
    "ratio_sota_over_correlated", "ratio_sota_over_asymptotic",
)


def run_cost_map(
    ts: Sequence[int],
    deltas: Sequence[float],
    phi: float = math.pi / 4,
    out: Optional[str] = None,
    chi_table: Optional[dict] = None,
) -> list:
    model1 = magic.magic_model(phi, 1)
    rows = []
    for t in ts:
        for delta in deltas:
            gamma = None
            if t >= 2 and t % 2 == 0:
                model = magic.magic_model(phi, t)
                mask_set = default_masks(t, 2 * t - 1)
                f_t = min(costmodel.f_t_optimal(delta, model.xi_t), len(mask_set))
                gamma = magic.gamma_bound(model, mask_set, f_t)
            point = costmodel.cost_point(
                t, delta, model1.xi_t, gamma=gamma, chi_table=chi_table
            )
            rows.append(point)
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(COST_MAP_COLUMNS)
            for p in rows:
                writer.writerow([
                    p.t, repr(p.delta), repr(p.xi_t), repr(p.chi_t),
                    p.k_iid_quadratic, p.k_sota, p.k_iid_tight,
                    "" if p.k_theorem1 is None else p.k_theorem1,
                    p.k_correlated, p.k_correlated_asymptotic,
                    p.f_t, repr(p.beta), p.cheapest_regime,
                    repr(p.ratio_vs_sota()), repr(p.asymptotic_ratio_vs_sota()),
                ])
    return rows
