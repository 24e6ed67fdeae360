"""Sweep execution, CSV/JSON curve output, figures, and invariant checks."""

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, channel, simulator
from .allocation import AllocationMode
from .config import LinkDirection
from .errors import InvariantViolation
from .geometry import Region

CSV_COLUMNS = ("sweep_value", "label", "p_sim", "ci_half",
               "p_exact", "p_highsnr", "trials", "seed")


@dataclass(frozen=True)
class CurveRecord:
    sweep_value: float
    label: str
    p_sim: float
    ci_half: float
    p_exact: float | None
    p_highsnr: float | None
    trials: int
    seed: int


def run_sweep(scenario, threads=1):
    """Simulate and evaluate every grid point; returns (records, meta)."""
    records = []
    resampled = 0
    t0 = time.perf_counter()
    for value in scenario.sweep.values:
        cfg = scenario.config_at(value)
        estimates, res = simulator.run_events(
            cfg, labels=scenario.sweep.labels, threads=threads)
        resampled += res
        for label in scenario.sweep.labels:
            exact, highsnr = analytic.analytic_for_label(cfg, label)
            est = estimates[label]
            records.append(CurveRecord(
                sweep_value=float(value), label=label,
                p_sim=est.p_hat, ci_half=est.half_width,
                p_exact=exact, p_highsnr=highsnr,
                trials=est.trials, seed=cfg.seed))
    meta = {
        "scenario": scenario.name,
        "sweep_parameter": scenario.sweep.parameter,
        "resampled_channels": resampled,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "invariants": _sweep_invariants(records),
        "config": _config_echo(scenario),
    }
    return records, meta


def _config_echo(scenario):
    base = dataclasses.asdict(scenario.base)
    for key, val in list(base.items()):
        if isinstance(val, (AllocationMode, LinkDirection)):
            base[key] = val.value
        elif hasattr(val, "value") and not isinstance(val, dict):
            base[key] = getattr(val, "value", val)
    base["allocation"] = scenario.base.allocation.value
    base["link"] = scenario.base.link.value
    base["selection"] = scenario.base.selection.value
    return {
        "name": scenario.name,
        "noise_dbm": scenario.noise_dbm,
        "sweep": {"parameter": scenario.sweep.parameter,
                  "values": list(scenario.sweep.values),
                  "labels": list(scenario.sweep.labels)},
        "base": base,
    }


def _sweep_invariants(records):
    in_range = all(
        0.0 <= r.p_sim <= 1.0
        and (r.p_exact is None or 0.0 <= r.p_exact <= 1.0)
        for r in records)
    finite = all(
        np.isfinite([v for v in (r.p_sim, r.ci_half, r.p_exact, r.p_highsnr)
                     if v is not None]).all()
        for r in records)
    return {"probabilities_in_unit_interval": in_range,
            "values_finite": finite}


def _fmt(value):
    return "" if value is None else format(value, ".6g")


def write_curves_csv(path, records):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([format(r.sweep_value, ".6g"), r.label,
                             _fmt(r.p_sim), _fmt(r.ci_half),
                             _fmt(r.p_exact), _fmt(r.p_highsnr),
                             r.trials, r.seed])


def write_curves_json(path, records):
    rows = [dataclasses.asdict(r) for r in records]
    with open(path, "w") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")


def write_summary(path, meta):
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
        fh.write("\n")


def render_figure(path, records, sweep_parameter):
    """Outage curves on a log scale: simulated points with error bars,
    exact analytics as lines, high-SNR forms dashed."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = sorted({r.label for r in records})
    fig, ax = plt.subplots(figsize=(7, 5))
    for i, label in enumerate(labels):
        rows = sorted([r for r in records if r.label == label],
                      key=lambda r: r.sweep_value)
        x = [r.sweep_value for r in rows]
        color = f"C{i % 10}"
        ax.errorbar(x, [max(r.p_sim, 1e-12) for r in rows],
                    yerr=[r.ci_half for r in rows], fmt="o", ms=4,
                    color=color, label=f"{label} (sim)")
        if any(r.p_exact is not None for r in rows):
            ax.plot(x, [r.p_exact for r in rows], "-", color=color,
                    label=f"{label} (exact)")
        if any(r.p_highsnr is not None for r in rows):
            ax.plot(x, [r.p_highsnr for r in rows], "--", color=color,
                    alpha=0.6, label=f"{label} (high SNR)")
    ax.set_yscale("log")
    ax.set_xlabel(sweep_parameter)
    ax.set_ylabel("outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# verify: reduced-budget invariant suite


def _check_alignment(cfg, n=256):
    rng = np.random.default_rng(cfg.seed)
    g_near = channel.sample_fading(cfg.user_antennas, cfg.bs_antennas, rng, size=(n,))
    g_far = channel.sample_fading(cfg.user_antennas, cfg.bs_antennas, rng, size=(n,))
    basis = channel.alignment_nullspace(g_near, g_far)
    coeff = channel.random_alignment_coeff(cfg.nullspace_dim, rng, size=(n,))
    v_near, v_far = channel.detection_vectors(basis, coeff)
    eff_near = channel.effective_channel(g_near, v_near)
    eff_far = channel.effective_channel(g_far, v_far)
    resid = np.max(np.abs(eff_near - eff_far))
    return resid < 1e-8, f"max alignment residual {resid:.2e}"


def _check_precoder(cfg, n=128):
    rng = np.random.default_rng(cfg.seed + 1)
    m = cfg.bs_antennas
    gmat = (rng.standard_normal((n, m, m)) + 1j * rng.standard_normal((n, m, m))) / np.sqrt(2)
    pre = channel.build_precoder(gmat)
    p = pre.precoder
    trace = np.einsum('...ij,...ij->...', p, p.conj()).real
    gram_diag = np.einsum('...ij,...ij->...j', p.conj(), p).real
    err = max(np.max(np.abs(trace - m)), np.max(np.abs(gram_diag - 1.0)))
    return err < 1e-8, f"max precoder normalization error {err:.2e}"


def _check_domination(cfg, trials=2000):
    if cfg.link is LinkDirection.DOWNLINK:
        delta = float(cfg.user_antennas)
        pairs = [("far_true", "far_mod"), ("near_true", "near_mod")]
    else:
        delta = float(cfg.bs_antennas)
        pairs = [("sum_true", "sum_mod")]
    probe = replace(cfg, allocation=AllocationMode.FIXED, delta=delta,
                    trials=trials)
    _, events = simulator.collect_events(probe, trials)
    bad = sum(int(np.count_nonzero(events[t] & ~events[m])) for t, m in pairs)
    return bad == 0, f"{bad} domination violations in {trials} trials"


def _check_case2_equality(cfg, trials=2000):
    probe = replace(cfg, allocation=AllocationMode.COGNITIVE_UPLINK_CASE2,
                    link=LinkDirection.UPLINK, rho_interferer=0.0,
                    trials=trials)
    _, events = simulator.collect_events(probe, trials)
    diff = int(np.count_nonzero(events["case2_far"] != events["case2_near"]))
    return diff == 0, f"{diff} per-trial mismatches in {trials} trials"


def _check_analytic_quadrature(cfg):
    from .specfun import integrate_1d
    reg = cfg.region
    worst = 0.0
    for y in (1e-4, 1e-2, 1.0):
        closed = analytic.upsilon1(y, reg, cfg.alpha)
        quad, _ = integrate_1d(
            lambda x: np.exp(-y * x ** cfg.alpha) * x,
            reg.inner_radius, reg.outer_radius)
        quad *= 2.0 / (reg.outer_radius ** 2 - reg.inner_radius ** 2)
        worst = max(worst, abs(closed - quad))
        closed2 = analytic.upsilon2(y, reg, cfg.alpha)
        r0, r1 = reg.min_distance, reg.inner_radius
        quad2, _ = integrate_1d(
            lambda x: np.exp(-y * max(x, r0) ** cfg.alpha) * x, 0.0, r1)
        quad2 *= 2.0 / r1 ** 2
        worst = max(worst, abs(closed2 - quad2))
    nointf = replace(cfg, rho_interferer=0.0, allocation=AllocationMode.FIXED,
                     link=LinkDirection.DOWNLINK)
    th = analytic.ThresholdSet.from_config(nointf)
    if th.feasible:
        closed = 1.0 - analytic.upsilon1(2.0 * th.phi_far, reg, cfg.alpha)
        worst = max(worst, abs(closed - analytic.lemma1_exact(nointf)))
    return worst < 1e-8, f"max closed-form vs quadrature gap {worst:.2e}"


def verify_scenario(scenario, trials=2000):
    """Run the reduced invariant suite; returns [(name, passed, detail)]."""
    cfg = scenario.base
    checks = [
        ("alignment_residual", _check_alignment),
        ("precoder_normalization", _check_precoder),
        ("bound_domination", lambda c: _check_domination(c, trials)),
        ("case2_per_trial_equality", lambda c: _check_case2_equality(c, trials)),
        ("analytic_vs_quadrature", _check_analytic_quadrature),
    ]
    results = []
    for name, fn in checks:
        passed, detail = fn(cfg)
        results.append((name, passed, detail))
    return results


def require_all_passed(results):
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        raise InvariantViolation(f"invariant checks failed: {', '.join(failed)}")
