"""Monte Carlo engine: full-pipeline trials, outage events, and estimates.

Trials are processed in fixed-size blocks.  Every logical randomness source
(positions, fading, alignment coefficients, interferer process) draws from
its own child stream keyed by (seed, role, block index), so estimates are
reproducible bit-for-bit and independent of how blocks are distributed over
workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import allocation as alloc
from . import channel, geometry
from .allocation import AllocationMode
from .config import LABELS, LinkDirection, SelectionMode
from .errors import ConfigurationError, NumericalError

BLOCK_SIZE = 8192
_MAX_RESAMPLE_ROUNDS = 64

# Stream role labels; part of the reproducibility contract.
_POSITIONS, _FADING, _COEFF, _PPP = 1, 2, 3, 4


@dataclass(frozen=True)
class OutageEstimate:
    p_hat: float
    trials: int
    half_width: float          # 95% normal-approximation CI half width
    event_label: str

    @staticmethod
    def from_count(count, trials, label):
        p = count / trials
        hw = 1.96 * np.sqrt(max(p * (1.0 - p), 0.0) / trials)
        return OutageEstimate(p_hat=float(p), trials=int(trials),
                              half_width=float(hw), event_label=label)


def _stream(seed, role, block):
    return np.random.default_rng(np.random.SeedSequence([seed, role, block]))


def _channel_realization(cfg, n, rng_fad, rng_coeff):
    """Draw fading and alignment vectors for ``n`` trials of all M pairs.

    Returns (gain, v_near, v_far, p_first, resampled) where ``gain`` is the
    first pair's effective scalar gain, v_* its detection vectors, and
    ``p_first`` the first precoder column (used as uplink detector).
    Degenerate or ill-conditioned draws are redrawn and counted.
    """
    m, nrx = cfg.bs_antennas, cfg.user_antennas
    dim = cfg.nullspace_dim

    gain = np.empty(n)
    v_near = np.empty((n, nrx), dtype=complex)
    v_far = np.empty((n, nrx), dtype=complex)
    p_first = np.empty((n, m), dtype=complex)

    pending = np.arange(n)
    resampled = 0
    for _ in range(_MAX_RESAMPLE_ROUNDS):
        k = pending.size
        if k == 0:
            break
        g = channel.sample_fading(nrx, m, rng_fad, size=(k, m, 2))
        gn, gf = g[:, :, 0], g[:, :, 1]
        bad = channel.degenerate_mask(gn, gf).any(axis=-1)
        ok = ~bad
        if np.any(ok):
            gn_ok, gf_ok = gn[ok], gf[ok]
            bases = channel.alignment_nullspace(gn_ok, gf_ok)
            if cfg.selection is SelectionMode.MAX_MIN:
                _, vn, vf, gains = channel.select_detection_vectors(
                    gn_ok, gf_ok, bases=bases)
                coeff = None
            else:
                coeff = channel.random_alignment_coeff(dim, rng_coeff, size=(int(ok.sum()), m))
                vn, vf = channel.detection_vectors(bases, coeff)
                gains = None
            gmat = channel.effective_channel(gn_ok, vn).conj()
            cond = np.linalg.cond(gmat)
            good = cond <= channel.CONDITION_CAP
            if gains is None:
                gains = channel.effective_gains_only(gmat)
            ginv = np.linalg.inv(gmat)
            pcol = ginv[:, :, 0] * np.sqrt(gains[:, 0])[:, None]

            idx = pending[ok][good]
            gain[idx] = gains[good, 0]
            v_near[idx] = vn[good, 0]
            v_far[idx] = vf[good, 0]
            p_first[idx] = pcol[good]
            retry = np.concatenate([pending[bad], pending[ok][~good]])
        else:
            retry = pending
        resampled += retry.size
        pending = retry
    else:
        raise NumericalError("channel resampling did not terminate")
    return gain, v_near, v_far, p_first, resampled


def _interference_at(cfg, n, rng_ppp, targets):
    """Aggregate interference for each trial at each target point.

    ``targets`` is a list of (x, y) coordinate arrays of length n.  One PPP
    realization per trial is shared by every target, preserving the spatial
    correlation between receivers.
    """
    if not cfg.has_interference:
        return [np.zeros(n) for _ in targets]
    rmax = cfg.truncation_radius
    counts = rng_ppp.poisson(cfg.interferer_density * np.pi * rmax**2, n)
    total = int(counts.sum())
    rr = rmax * np.sqrt(rng_ppp.random(total))
    th = 2.0 * np.pi * rng_ppp.random(total)
    px, py = rr * np.cos(th), rr * np.sin(th)
    idx = np.repeat(np.arange(n), counts)
    r0 = cfg.region.min_distance
    return [geometry.aggregate_interference_batched(
        px, py, idx, n, tx, ty, cfg.rho_interferer, r0, cfg.alpha)
        for tx, ty in targets]


def _draw_block(cfg, n, rngs):
    """All random inputs for one block; returns the common trial record."""
    pos_n, pos_f = geometry.sample_user_pair_positions(
        cfg.region, rngs[_POSITIONS], size=(n, cfg.bs_antennas))
    pos_n, pos_f = pos_n[:, 0], pos_f[:, 0]      # recorded pair
    d_near = np.hypot(pos_n[:, 0], pos_n[:, 1])
    d_far = np.hypot(pos_f[:, 0], pos_f[:, 1])

    gain, v_near, v_far, p_first, resampled = _channel_realization(
        cfg, n, rngs[_FADING], rngs[_COEFF])

    if cfg.link is LinkDirection.DOWNLINK:
        targets = [(pos_n[:, 0], pos_n[:, 1]), (pos_f[:, 0], pos_f[:, 1])]
        i_near, i_far = _interference_at(cfg, n, rngs[_PPP], targets)
        i_origin = None
    else:
        (i_origin,) = _interference_at(
            cfg, n, rngs[_PPP], [(np.zeros(n), np.zeros(n))])
        i_near = i_far = None

    l_near = geometry.path_loss(d_near, cfg.region, cfg.alpha)
    l_far = geometry.path_loss(d_far, cfg.region, cfg.alpha)
    rec = {
        "d_near": d_near, "d_far": d_far,
        "gain": gain,
        "h2_near": gain / l_near, "h2_far": gain / l_far,
        "vn_sq": np.sum(np.abs(v_near) ** 2, axis=-1),
        "vf_sq": np.sum(np.abs(v_far) ** 2, axis=-1),
        "qn": np.abs(np.sum(v_near.conj(), axis=-1)) ** 2,
        "qf": np.abs(np.sum(v_far.conj(), axis=-1)) ** 2,
        "i_near": i_near, "i_far": i_far, "i_origin": i_origin,
        "p_ones_sq": np.abs(np.sum(p_first.conj(), axis=-1)) ** 2,
        "resampled": resampled,
        "rho": cfg.rho,
        "link": cfg.link.value,
        "eps_near": cfg.rates.eps_near,
        "eps_far": cfg.rates.eps_far,
        "eps_sum": cfg.rates.eps_sum,
    }
    return rec


def _downlink_events(cfg, rec):
    rho = cfg.rho
    eps_n, eps_f = cfg.rates.eps_near, cfg.rates.eps_far
    h2n, h2f = rec["h2_near"], rec["h2_far"]
    den_n = rec["vn_sq"] + rec["qn"] * rec["i_near"]
    den_f = rec["vf_sq"] + rec["qf"] * rec["i_far"]
    out = {}

    if cfg.allocation is AllocationMode.FIXED:
        af = cfg.fixed_far_sq
        an = 1.0 - af
        rec["sinr_far"] = rho * h2f * af / (rho * h2f * an + den_f)
        rec["sinr_near_pre"] = rho * h2n * af / (rho * h2n * an + den_n)
        rec["sinr_near"] = rho * h2n * an / den_n
        rec["alloc_near_sq"] = np.full_like(h2n, an)
        rec["alloc_far_sq"] = np.full_like(h2n, af)
        out["far_true"] = rec["sinr_far"] < eps_f
        out["near_true"] = (rec["sinr_near_pre"] < eps_f) | (rec["sinr_near"] < eps_n)
        out.update(modified_outage_flags(rec, cfg.delta,
                                         alloc_near=an, alloc_far=af,
                                         eps_near=eps_n, eps_far=eps_f))
    elif cfg.allocation is AllocationMode.COGNITIVE_DOWNLINK:
        share = alloc.cognitive_downlink_near_share(rho, h2f, den_f, eps_f)
        rec["alloc_near_sq"] = share
        rec["alloc_far_sq"] = 1.0 - share
        out["far_cr"] = rho * h2f < eps_f * den_f
        stage1 = rho * h2n * (1.0 - share) < eps_f * (rho * h2n * share + den_n)
        stage2 = rho * h2n * share < eps_n * den_n
        out["near_cr"] = (share <= 0.0) | stage1 | stage2
        # interference-free variant with the noise term replaced by 2,
        # matching the closed-form expression for this allocation
        sb = alloc.cognitive_downlink_simplified_share(rho, h2f, eps_f)
        s1 = rho * h2n * (1.0 - sb) < eps_f * (rho * h2n * sb + 2.0)
        s2 = rho * h2n * sb < eps_n * 2.0
        out["near_cr_simplified"] = (sb <= 0.0) | s1 | s2
    else:
        raise ConfigurationError(
            f"allocation '{cfg.allocation.value}' is not a downlink mode")
    return out


def _uplink_events(cfg, rec):
    rho = cfg.rho
    rates = cfg.rates
    h2n, h2f = rec["h2_near"], rec["h2_far"]
    c_true = rec["p_ones_sq"] * rec["i_origin"] + 1.0
    out = {}

    if cfg.allocation is AllocationMode.FIXED:
        af = cfg.fixed_far_sq
        an = 1.0 - af
        s_n, s_f = rho * h2n * an, rho * h2f * af
        rec["alloc_near_sq"] = np.full_like(h2n, an)
        rec["alloc_far_sq"] = np.full_like(h2n, af)
        rec["rate_near_first"] = np.log2(1.0 + s_n / (s_f + c_true))
        rec["rate_far_after"] = np.log2(1.0 + s_f / c_true)
        rec["rate_far_first"] = np.log2(1.0 + s_f / (s_n + c_true))
        rec["rate_near_after"] = np.log2(1.0 + s_n / c_true)
        rec["sum_rate"] = np.log2(1.0 + (s_n + s_f) / c_true)
        rec["tx_power"] = rho * (an * rec["vn_sq"] + af * rec["vf_sq"])
        out["sum_true"] = (s_n + s_f) < rates.eps_sum * c_true
        out.update(modified_outage_flags(rec, cfg.delta, alloc_near=an,
                                         alloc_far=af, eps_sum=rates.eps_sum))
    elif cfg.allocation is AllocationMode.COGNITIVE_UPLINK_CASE1:
        share = alloc.cognitive_uplink_case1_far_share(rho, h2n, h2f, rates.eps_far)
        s_n = rho * h2n * (1.0 - share)
        rec["alloc_far_sq"] = share
        rec["alloc_near_sq"] = 1.0 - share
        # an unclamped share meets the far target with equality against unit
        # noise, so far outage is exactly the clamp event plus any excess of
        # the realized noise-plus-interference term over 1
        far = (rho * h2f < rates.eps_far) | (c_true > 1.0)
        out["case1_far"] = far
        out["case1_near"] = far | (s_n < rates.eps_near * c_true)
    elif cfg.allocation is AllocationMode.COGNITIVE_UPLINK_CASE2:
        share = alloc.cognitive_uplink_case2_far_share(rho, h2f, rates.eps_far)
        s_f, s_n = rho * h2f * share, rho * h2n * (1.0 - share)
        rec["alloc_far_sq"] = share
        rec["alloc_near_sq"] = 1.0 - share
        # clamp: all power goes to the far user and it still misses the
        # target; otherwise the near user is decoded first against the far
        # signal held exactly at its threshold
        clamped = share >= 1.0
        near_fail = clamped | (s_n < rates.eps_near * (s_f + c_true))
        out["case2_near"] = near_fail
        out["case2_far"] = near_fail | (c_true > 1.0)
    else:
        raise ConfigurationError(
            f"allocation '{cfg.allocation.value}' is not an uplink mode")
    return out


def modified_outage_flags(rec, delta, *, alloc_near=None, alloc_far=None,
                          eps_near=None, eps_far=None, eps_sum=None):
    """Bound-style outage events with the detector terms replaced by their
    deterministic caps: 2 + 2*delta*I on the downlink, delta*I + 1 uplink.
    """
    if delta < 1.0:
        raise ConfigurationError("delta must be >= 1")
    rho = rec["rho"]
    an = rec["alloc_near_sq"] if alloc_near is None else alloc_near
    af = rec["alloc_far_sq"] if alloc_far is None else alloc_far
    eps_near = rec["eps_near"] if eps_near is None else eps_near
    eps_far = rec["eps_far"] if eps_far is None else eps_far
    eps_sum = rec["eps_sum"] if eps_sum is None else eps_sum
    if rec["link"] == LinkDirection.DOWNLINK.value:
        h2n, h2f = rec["h2_near"], rec["h2_far"]
        dn = 2.0 + 2.0 * delta * rec["i_near"]
        df = 2.0 + 2.0 * delta * rec["i_far"]
        far = rho * h2f * af < eps_far * (rho * h2f * an + df)
        s1 = rho * h2n * af < eps_far * (rho * h2n * an + dn)
        s2 = rho * h2n * an < eps_near * dn
        return {"far_mod": far, "near_mod": s1 | s2}
    s_n = rho * rec["h2_near"] * an
    s_f = rho * rec["h2_far"] * af
    return {"sum_mod": (s_n + s_f) < eps_sum * (delta * rec["i_origin"] + 1.0)}


def _block_events(cfg, block, n):
    rngs = {role: _stream(cfg.seed, role, block)
            for role in (_POSITIONS, _FADING, _COEFF, _PPP)}
    rec = _draw_block(cfg, n, rngs)
    if cfg.link is LinkDirection.DOWNLINK:
        events = _downlink_events(cfg, rec)
    else:
        events = _uplink_events(cfg, rec)
    return rec, events


def collect_events(cfg, trials=None):
    """Per-trial records and event flags, concatenated across blocks.

    Intended for invariant checks that need the raw flags rather than the
    aggregated estimates; uses the same streams as run_events.
    """
    n_total = cfg.trials if trials is None else int(trials)
    recs, evs, resampled = [], [], 0
    for b in range((n_total + BLOCK_SIZE - 1) // BLOCK_SIZE):
        n = min(BLOCK_SIZE, n_total - b * BLOCK_SIZE)
        rec, events = _block_events(cfg, b, n)
        resampled += rec["resampled"]
        recs.append(rec)
        evs.append(events)
    rec = {}
    for k in recs[0]:
        if isinstance(recs[0][k], np.ndarray):
            rec[k] = np.concatenate([r[k] for r in recs])
        else:
            rec[k] = recs[0][k]
    rec["resampled"] = resampled
    events = {k: np.concatenate([e[k] for e in evs]) for k in evs[0]}
    return rec, events


def run_events(cfg, labels=None, threads=1):
    """Estimate the outage probability of each requested event label.

    Returns (estimates, resampled) where estimates maps label to
    OutageEstimate and resampled counts redrawn channel realizations.
    """
    if cfg.trials < 100:
        raise ConfigurationError("estimation requires at least 100 trials")
    if labels is None:
        labels = LABELS[(cfg.link, cfg.allocation)]
    blocks = [(b, min(BLOCK_SIZE, cfg.trials - b * BLOCK_SIZE))
              for b in range((cfg.trials + BLOCK_SIZE - 1) // BLOCK_SIZE)]

    def work(args):
        block, n = args
        rec, events = _block_events(cfg, block, n)
        return ({lab: int(np.count_nonzero(events[lab])) for lab in labels},
                rec["resampled"])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]

    counts = {lab: sum(r[0][lab] for r in results) for lab in labels}
    resampled = sum(r[1] for r in results)
    estimates = {lab: OutageEstimate.from_count(counts[lab], cfg.trials, lab)
                 for lab in labels}
    return estimates, resampled


def estimate_outage(cfg, label, threads=1):
    """Monte Carlo estimate of a single labelled outage event."""
    estimates, _ = run_events(cfg, labels=[label], threads=threads)
    return estimates[label]


def _single_trial(cfg, rng):
    rngs = {role: rng for role in (_POSITIONS, _FADING, _COEFF, _PPP)}
    rec = _draw_block(cfg, 1, rngs)
    if cfg.link is LinkDirection.DOWNLINK:
        events = _downlink_events(cfg, rec)
    else:
        events = _uplink_events(cfg, rec)
    out = {}
    for k, v in {**rec, **events}.items():
        if isinstance(v, np.ndarray) and v.shape[:1] == (1,):
            out[k] = v[0].item() if v.ndim == 1 else v[0]
        else:
            out[k] = v
    return out


def simulate_downlink_trial(cfg, rng):
    """One full downlink realization; returns the per-pair scalar record."""
    if cfg.link is not LinkDirection.DOWNLINK:
        raise ConfigurationError("config is not a downlink scenario")
    return _single_trial(cfg, rng)


def simulate_uplink_trial(cfg, rng):
    """One full uplink realization; returns the per-pair scalar record."""
    if cfg.link is not LinkDirection.UPLINK:
        raise ConfigurationError("config is not an uplink scenario")
    return _single_trial(cfg, rng)
