"""Experiment registry: one deterministic table generator per reproduced figure.

Every experiment is a pure function of ``(scenario, base_seed)``. Trial ``t``
of grid point ``p`` draws from ``trial_rng(base_seed, t, ...)`` and averages
accumulate in trial order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..beamforming import (asymptotic_receive_power, cascaded_tap_matrix, miso_ao,
                           miso_received_power, mimo_ao, mimo_capacity, mimo_channel, mrt,
                           ofdm_cfr, ofdm_strongest_cir, ofdm_upper_bound, one_bit_amplitude,
                           quantize_reflection, siso_align, water_filled_rate)
from ..channel import (FadingSpec, OfdmSpec, PathLossSpec, Reflection, gen_flat_channel, gen_tap_channels,
                       trial_rng)
from ..deployment import (Fig20Scenario, deployment_region_compare, double_irs_snr, region_table,
                          single_irs_snr)
from ..estimation import GroupingStudy, feasible_group_counts, rate_vs_grouping
from .config import ConfigError, LinkConfig, Scenario, dbm_to_watts


class UnknownExperiment(KeyError):
    pass


@dataclass(frozen=True)
class ExperimentResult:
    experiment: str
    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)


def _require(sc: Scenario, cond: bool, msg: str):
    if not cond:
        raise ConfigError(f"{sc.name or 'scenario'}: {msg}")


def _options(sc: Scenario, exp_id: str, defaults: dict) -> dict:
    unknown = sorted(set(sc.options) - set(defaults))
    if unknown:
        raise ConfigError(f"options: unknown key(s) for {exp_id}: {', '.join(unknown)}")
    return {**defaults, **sc.options}


def _geo(sc: Scenario, key: str, default=None) -> float:
    if key in sc.geometry:
        return float(sc.geometry[key])
    if default is None:
        raise ConfigError(f"geometry.{key}: required")
    return default


def _fading(sc: Scenario, link: LinkConfig, distance: float) -> FadingSpec:
    return FadingSpec(link.kind, PathLossSpec(sc.c0, link.exponent), distance, link.rician_k,
                      math.radians(link.aoa_deg), math.radians(link.aod_deg))


def _link(sc: Scenario, name: str) -> LinkConfig:
    if name not in sc.links:
        raise ConfigError(f"links.{name}: required")
    return sc.links[name]


def _sweep(sc: Scenario, what: str) -> tuple:
    _require(sc, len(sc.sweep) > 0, f"sweep over {what} is empty")
    return sc.sweep


def _counts(sc: Scenario, what: str) -> list[int]:
    vals = _sweep(sc, what)
    if not all(float(v).is_integer() and v >= 1 for v in vals):
        raise ConfigError(f"sweep: {what} values must be positive integers")
    return [int(v) for v in vals]


def single_user_distances(sc: Scenario, d: float | None = None):
    """``(d1, d2, d_direct)`` for the single-user layout: IRS at ``d1`` from the AP, user at
    horizontal distance ``d`` and vertical offset ``dv`` from the AP-IRS line."""
    d1 = _geo(sc, "ap_irs")
    dv = _geo(sc, "vertical")
    d = _geo(sc, "ap_user", d1) if d is None else d
    return d1, math.hypot(d1 - d, dv), math.hypot(d, dv)


# --------------------------------------------------------------------------
# Narrow-band SISO
# --------------------------------------------------------------------------
def siso_draw(sc: Scenario, N: int, rng, ap_irs: LinkConfig, irs_user: LinkConfig):
    """One realization ``(h_d, h_r, g)``; ``h_d = 0`` unless a direct link is configured."""
    d1, d2, dd = single_user_distances(sc)
    g = gen_flat_channel(_fading(sc, ap_irs, d1), N, 1, rng, "ap-irs").entries[:, 0]
    h_r = gen_flat_channel(_fading(sc, irs_user, d2), N, 1, rng, "irs-user").entries[:, 0]
    h_d = 0.0
    if "direct" in sc.links:
        h_d = complex(gen_flat_channel(_fading(sc, sc.links["direct"], dd), 1, 1, rng).entries[0, 0])
    return h_d, h_r, g


def _received_power(sc, h_d, h_r, g, refl):
    return sc.P_t * abs(np.sum(h_r.conj() * refl.coefficients * g) + np.conj(h_d)) ** 2


def run_fig6(sc: Scenario, seed: int) -> ExperimentResult:
    ap_irs, irs_user = _link(sc, "ap_irs"), _link(sc, "irs_user")
    d1, d2, _ = single_user_distances(sc)
    rho_g2 = _fading(sc, ap_irs, d1).entry_power
    rho_h2 = _fading(sc, irs_user, d2).entry_power
    rows = []
    for N in _counts(sc, "N"):
        powers = []
        for t in range(sc.trials):
            h_d, h_r, g = siso_draw(sc, N, trial_rng(seed, t, N), ap_irs, irs_user)
            powers.append(_received_power(sc, h_d, h_r, g, siso_align(h_r, g, h_d)))
        p = float(np.mean(powers))
        asym = asymptotic_receive_power(N, sc.P_t, rho_h2, rho_g2)
        rows.append((N, p, asym, p / asym, float(np.mean(np.log2(1 + np.array(powers) / sc.sigma2)))))
    return ExperimentResult("fig6", ("N", "power_W", "asymptotic_power_W", "power_ratio", "rate"), rows)


def _fig7_models(opts) -> list[tuple[str, LinkConfig]]:
    models = opts["models"]
    if not isinstance(models, list) or not models:
        raise ConfigError("options.models: must be a non-empty list")
    out = []
    for i, m in enumerate(models):
        where = f"options.models[{i}]"
        if not isinstance(m, dict) or "label" not in m:
            raise ConfigError(f"{where}: needs a label")
        link = LinkConfig.from_doc({k: v for k, v in m.items() if k != "label"}, where)
        out.append((str(m["label"]), link))
    return out


def run_fig7(sc: Scenario, seed: int) -> ExperimentResult:
    opts = _options(sc, "fig7", {"models": None})
    if opts["models"] is None:
        models = [(k, sc.links[k]) for k in ("irs_user",) if k in sc.links]
        _require(sc, bool(models), "fig7 needs options.models or links.irs_user")
    else:
        models = _fig7_models(opts)
    rows = []
    for N in _counts(sc, "N"):
        row = [N]
        for i, (_, link) in enumerate(models):
            rates = []
            for t in range(sc.trials):
                h_d, h_r, g = siso_draw(sc, N, trial_rng(seed, t, N, i), link, link)
                p = _received_power(sc, h_d, h_r, g, siso_align(h_r, g, h_d))
                rates.append(math.log2(1 + p / sc.sigma2))
            row.append(float(np.mean(rates)))
        rows.append(tuple(row))
    return ExperimentResult("fig7", ("N", *(f"rate_{label}" for label, _ in models)), rows)


def discrete_trial(sc: Scenario, N: int, rng):
    """Receive powers ``(continuous, 1-bit phase, 2-bit phase, 1-bit amplitude)`` for one draw."""
    h_d, h_r, g = siso_draw(sc, N, rng, _link(sc, "ap_irs"), _link(sc, "irs_user"))
    cont = siso_align(h_r, g, h_d)
    out = [_received_power(sc, h_d, h_r, g, cont)]
    for bits in (1, 2):
        out.append(_received_power(sc, h_d, h_r, g, quantize_reflection(cont, bits)))
    if h_d == 0:
        amp = one_bit_amplitude(h_r, g)
    else:
        # rotate so the direct path is the phase reference
        amp = one_bit_amplitude(h_r * np.exp(1j * np.angle(np.conj(h_d))), g)
    out.append(_received_power(sc, h_d, h_r, g, amp))
    return tuple(out)


def run_fig12(sc: Scenario, seed: int) -> ExperimentResult:
    rows = []
    for N in _counts(sc, "N"):
        vals = np.array([discrete_trial(sc, N, trial_rng(seed, t, N)) for t in range(sc.trials)])
        snr_db = 10 * np.log10(vals.mean(axis=0) / sc.sigma2)
        rows.append((N, *map(float, snr_db)))
    return ExperimentResult("fig12", ("N", "snr_continuous_dB", "snr_1bit_phase_dB", "snr_2bit_phase_dB",
                                      "snr_1bit_amplitude_dB"), rows)


# --------------------------------------------------------------------------
# MISO / MIMO
# --------------------------------------------------------------------------
def miso_draw(sc: Scenario, d: float, rng):
    """One MISO realization ``(G, h_r, h_d)`` with the user at horizontal distance ``d``."""
    m_t, N = sc.tx_antennas, sc.N
    d1, d2, dd = single_user_distances(sc, d)
    G = gen_flat_channel(_fading(sc, _link(sc, "ap_irs"), d1), N, m_t, rng).entries
    h_r = gen_flat_channel(_fading(sc, _link(sc, "irs_user"), d2), N, 1, rng).entries[:, 0]
    h_d = gen_flat_channel(_fading(sc, _link(sc, "direct"), dd), m_t, 1, rng).entries[:, 0]
    return G, h_r, h_d


def miso_trial(sc: Scenario, d: float, rng):
    """Rates ``(AO, AP-user MRT, AP-IRS MRT, no IRS)`` for one draw at horizontal distance ``d``."""
    G, h_r, h_d = miso_draw(sc, d, rng)
    snr = lambda p: math.log2(1 + p / sc.sigma2)  # noqa: E731

    def mrt_with_aligned_irs(w):
        refl = siso_align(h_r, G @ w, np.vdot(w, h_d))
        return miso_received_power(G, h_r, h_d, refl, w)

    w_user = mrt(h_d, sc.P_t)
    w_irs = mrt(G[0].conj(), sc.P_t)
    ao = max(miso_ao(G, h_r, h_d, sc.P_t, sc.sigma2, sc.ao, w0=w).objective for w in (w_user, w_irs))
    no_irs = sc.P_t * float(np.linalg.norm(h_d) ** 2)
    return snr(ao), snr(mrt_with_aligned_irs(w_user)), snr(mrt_with_aligned_irs(w_irs)), snr(no_irs)


def run_fig9(sc: Scenario, seed: int) -> ExperimentResult:
    _require(sc, sc.N >= 1, "fig9 needs N >= 1")
    rows = []
    for i, d in enumerate(_sweep(sc, "d")):
        vals = np.array([miso_trial(sc, float(d), trial_rng(seed, t, i)) for t in range(sc.trials)])
        rows.append((d, *map(float, vals.mean(axis=0))))
    return ExperimentResult("fig9", ("d", "rate_ao", "rate_ap_user_mrt", "rate_ap_irs_mrt", "rate_no_irs"), rows)


def mimo_draw(sc: Scenario, rng):
    m_t, m_r, N = sc.tx_antennas, sc.rx_antennas, sc.N
    d1, d2, dd = single_user_distances(sc)
    H_d = gen_flat_channel(_fading(sc, _link(sc, "direct"), dd), m_r, m_t, rng).entries
    G = gen_flat_channel(_fading(sc, _link(sc, "ap_irs"), d1), N, m_t, rng).entries
    H_r = gen_flat_channel(_fading(sc, _link(sc, "irs_user"), d2), m_r, N, rng).entries
    theta = rng.uniform(0, 2 * np.pi, N)
    return H_d, G, H_r, Reflection(theta)


def mimo_trial(sc: Scenario, P_t: float, rng):
    """Rates ``(AO, random phases, no IRS)`` for one channel draw."""
    H_d, G, H_r, rand = mimo_draw(sc, rng)
    ao = mimo_ao(H_d, G, H_r, P_t, sc.sigma2, sc.ao).rate
    random_rate, _ = mimo_capacity(mimo_channel(H_d, G, H_r, rand), P_t, sc.sigma2)
    none, _ = mimo_capacity(H_d, P_t, sc.sigma2)
    return ao, random_rate, none


def run_fig8(sc: Scenario, seed: int) -> ExperimentResult:
    _require(sc, sc.N >= 1, "fig8 needs N >= 1")
    rows = []
    for p_dbm in _sweep(sc, "P_t [dBm]"):
        # same channel draws at every power level
        vals = np.array([mimo_trial(sc, dbm_to_watts(p_dbm), trial_rng(seed, t)) for t in range(sc.trials)])
        rows.append((p_dbm, *map(float, vals.mean(axis=0))))
    return ExperimentResult("fig8", ("P_t_dBm", "rate_ao", "rate_random", "rate_no_irs"), rows)


# --------------------------------------------------------------------------
# OFDM
# --------------------------------------------------------------------------
def ofdm_draw(sc: Scenario, rng):
    """Direct taps, per-element cascaded taps (``N x (L1 + L2 - 1)``) and random phases."""
    cfg = sc.ofdm
    d1, d2, dd = single_user_distances(sc)
    direct = gen_tap_channels(_fading(sc, _link(sc, "direct"), dd), cfg.taps_direct, 1, rng)[0]
    h1 = gen_tap_channels(_fading(sc, _link(sc, "ap_irs"), d1), cfg.taps_ap_irs, sc.N, rng)
    h2 = gen_tap_channels(_fading(sc, _link(sc, "irs_user"), d2), cfg.taps_irs_user, sc.N, rng)
    rand = Reflection(rng.uniform(0, 2 * np.pi, sc.N))
    return direct, cascaded_tap_matrix(h1, h2), rand


def ofdm_trial(sc: Scenario, P_t: float, rng):
    """Rates ``(upper bound, strongest CIR, random phases, no IRS)`` for one draw."""
    spec = OfdmSpec(sc.ofdm.num_subcarriers, sc.ofdm.cp_length)
    direct, casc, rand = ofdm_draw(sc, rng)
    ub = ofdm_upper_bound(direct, casc, spec, P_t, sc.sigma2)
    cir = water_filled_rate(ofdm_cfr(ofdm_strongest_cir(casc, direct), direct, casc, spec), P_t, sc.sigma2)
    rnd = water_filled_rate(ofdm_cfr(rand, direct, casc, spec), P_t, sc.sigma2)
    none = water_filled_rate(np.fft.fft(direct, n=spec.num_subcarriers), P_t, sc.sigma2)
    return ub, cir, rnd, none


def run_fig10(sc: Scenario, seed: int) -> ExperimentResult:
    _require(sc, sc.ofdm is not None, "fig10 needs an ofdm section")
    _require(sc, sc.N >= 1, "fig10 needs N >= 1")
    rows = []
    for p_dbm in _sweep(sc, "P_t [dBm]"):
        vals = np.array([ofdm_trial(sc, dbm_to_watts(p_dbm), trial_rng(seed, t)) for t in range(sc.trials)])
        rows.append((p_dbm, *map(float, vals.mean(axis=0))))
    return ExperimentResult("fig10", ("P_t_dBm", "rate_upper_bound", "rate_strongest_cir", "rate_random",
                                      "rate_no_irs"), rows)


# --------------------------------------------------------------------------
# Estimation and deployment
# --------------------------------------------------------------------------
FIG15_DEFAULTS = {"rows": 12, "cols": 12, "coherence": 150, "pilot_snr_db": 5.0, "data_snr_db": 5.0,
                  "correlation": 0.0, "kinds": ["dft", "onoff"], "levels": None}


def fig15_study(sc: Scenario) -> tuple[GroupingStudy, dict]:
    o = _options(sc, "fig15", FIG15_DEFAULTS)
    try:
        study = GroupingStudy(int(o["rows"]), int(o["cols"]), int(o["coherence"]), float(o["pilot_snr_db"]),
                              float(o["data_snr_db"]), correlation=float(o["correlation"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"options: {exc}") from exc
    if not 0 <= study.correlation <= 1:
        raise ConfigError("options.correlation: must lie in [0, 1]")
    return study, o


def run_fig15(sc: Scenario, seed: int) -> ExperimentResult:
    study, o = fig15_study(sc)
    feasible = feasible_group_counts(study.rows, study.cols)
    counts = [int(v) for v in sc.sweep] if sc.sweep else [n for n in feasible if n + 1 <= study.coherence]
    bad = [n for n in counts if n not in feasible or n + 1 > study.coherence]
    if bad:
        raise ConfigError(f"sweep: sub-surface counts {bad} do not tile the surface or exceed the coherence time")
    kinds = list(o["kinds"])
    try:
        table = rate_vs_grouping(study, counts, kinds, sc.trials, seed, o["levels"])
    except ValueError as exc:
        raise ConfigError(f"options: {exc}") from exc
    rows = [(r["n_groups"], r["rho"], *(r[k] for k in kinds)) for r in table]
    return ExperimentResult("fig15", ("n_groups", "rho", *(f"rate_{k}" for k in kinds)), rows)


def run_fig18(sc: Scenario, seed: int) -> ExperimentResult:
    D, H = _geo(sc, "D"), _geo(sc, "H")
    _require(sc, sc.N >= 2, "fig18 needs N >= 2")
    ds = np.asarray(sc.sweep, dtype=float) if sc.sweep else np.linspace(0.0, D, 101)
    if np.any(ds < 0) or np.any(ds > D):
        raise ConfigError("sweep: distances must lie in [0, D]")
    single = single_irs_snr(ds, D, H, sc.N, sc.P_t, sc.c0, sc.sigma2)
    double = double_irs_snr(D, H, sc.N, sc.P_t, sc.c0, sc.sigma2)
    rows = [(float(d), float(10 * np.log10(s)), float(10 * np.log10(double))) for d, s in zip(ds, np.atleast_1d(single))]
    return ExperimentResult("fig18", ("d", "snr_single_dB", "snr_double_dB"), rows)


def fig20_scenario(sc: Scenario) -> Fig20Scenario:
    o = _options(sc, "fig20", {"user_angles_deg": [35.0, -50.0], "n_points": 101, "starts": 4})
    dist = _geo_list(sc, "user_distances")
    _require(sc, len(dist) == 2, "fig20 needs exactly two user distances")
    try:
        return Fig20Scenario(N=sc.N, d=_geo(sc, "d"), D=tuple(dist), P_bar=sc.P_t, sigma2_bar=sc.sigma2,
                             beta0=sc.c0, user_angles=tuple(math.radians(a) for a in o["user_angles_deg"]),
                             n_points=int(o["n_points"]), starts=int(o["starts"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"fig20: {exc}") from exc


def _geo_list(sc: Scenario, key: str) -> list:
    if key not in sc.geometry:
        raise ConfigError(f"geometry.{key}: required")
    return list(sc.geometry[key])


def run_fig20(sc: Scenario, seed: int) -> ExperimentResult:
    cmp = deployment_region_compare(fig20_scenario(sc), seed)
    return ExperimentResult("fig20", ("scheme", "strategy", "R1", "R2"), region_table(cmp))


# --------------------------------------------------------------------------
EXPERIMENTS = {
    "fig6": (run_fig6, "SISO receive power vs N against the N^2 asymptote"),
    "fig7": (run_fig7, "SISO rate vs N for LoS / Rician / Rayleigh hops"),
    "fig8": (run_fig8, "MIMO rate vs P_t: AO, random phases, no IRS"),
    "fig9": (run_fig9, "MISO rate vs AP-user distance: AO and MRT baselines"),
    "fig10": (run_fig10, "OFDM rate vs P_t: upper bound, strongest CIR, random, no IRS"),
    "fig12": (run_fig12, "SNR vs N with continuous, 1/2-bit phase and 1-bit amplitude control"),
    "fig15": (run_fig15, "Rate vs grouping ratio for DFT and ON/OFF training"),
    "fig18": (run_fig18, "Single vs double IRS SNR along the AP-user line"),
    "fig20": (run_fig20, "Two-user rate regions: centralized vs distributed IRS"),
}


_TAKES_OPTIONS = {"fig7", "fig15", "fig20"}


def run_experiment(exp_id: str, scenario: Scenario, base_seed: int | None = None) -> ExperimentResult:
    if exp_id not in EXPERIMENTS:
        raise UnknownExperiment(exp_id)
    seed = scenario.seed if base_seed is None else int(base_seed)
    if seed < 0:
        raise ConfigError("seed: must be non-negative")
    if scenario.options and exp_id not in _TAKES_OPTIONS:
        raise ConfigError(f"options: {exp_id} takes no options, got {', '.join(sorted(scenario.options))}")
    fn, _ = EXPERIMENTS[exp_id]
    res = fn(scenario, seed)
    meta = {"experiment": exp_id, "seed": seed, "config_digest": scenario.digest(), "version": __version__}
    return ExperimentResult(exp_id, res.columns, res.rows, meta)

