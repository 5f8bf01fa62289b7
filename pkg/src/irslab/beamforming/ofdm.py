"""Reflection design and rate evaluation for IRS-aided OFDM links.

The cascaded channel of element ``n`` is an ``L_r``-tap sequence (row ``n`` of
``cascaded``). Its reflection coefficient multiplies all taps alike, so the
IRS cannot shape the frequency response per subcarrier.
"""

from __future__ import annotations

import numpy as np

from ..channel import OfdmSpec, Reflection, cfr_from_taps
from .mimo import water_fill


def cascaded_tap_matrix(h_r1, h_r2) -> np.ndarray:
    """Row-wise convolution of per-element AP-IRS (``N x L1``) and IRS-user (``N x L2``) taps."""
    h_r1 = np.atleast_2d(np.asarray(h_r1, dtype=complex))
    h_r2 = np.atleast_2d(np.asarray(h_r2, dtype=complex))
    if h_r1.shape[0] != h_r2.shape[0]:
        raise ValueError("per-element tap sets must have the same element count")
    return np.array([np.convolve(b, a) for a, b in zip(h_r1, h_r2)]).reshape(h_r1.shape[0], -1)


def _pad(direct_taps, cascaded):
    hd = np.asarray(direct_taps, dtype=complex).ravel()
    gr = np.atleast_2d(np.asarray(cascaded, dtype=complex))
    length = max(hd.size, gr.shape[1])
    hd = np.pad(hd, (0, length - hd.size))
    gr = np.pad(gr, ((0, 0), (0, length - gr.shape[1])))
    return hd, gr


def effective_cir(refl: Reflection, direct_taps, cascaded) -> np.ndarray:
    """Superposed impulse response ``h_d + G_r theta``."""
    hd, gr = _pad(direct_taps, cascaded)
    if gr.shape[0] != len(refl):
        raise ValueError(f"{gr.shape[0]} cascaded channels but {len(refl)} reflection coefficients")
    return hd + refl.coefficients @ gr


def ofdm_cfr(refl: Reflection, direct_taps, cascaded, ofdm: OfdmSpec) -> np.ndarray:
    return cfr_from_taps(effective_cir(refl, direct_taps, cascaded), ofdm)


def _rate_from_cfr(cfr, powers, sigma2_bar):
    return float(np.mean(np.log2(1.0 + powers * np.abs(cfr) ** 2 / sigma2_bar)))


def ofdm_rate(refl: Reflection, powers, direct_taps, cascaded, ofdm: OfdmSpec, sigma2_bar: float,
              P_t: float | None = None) -> float:
    """Rate ``(1/Q) sum_q log2(1 + p_q |c_q|^2 / sigma2_bar)``, CP overhead ignored."""
    powers = np.asarray(powers, dtype=float).ravel()
    if powers.size != ofdm.num_subcarriers:
        raise ValueError(f"need {ofdm.num_subcarriers} subcarrier powers, got {powers.size}")
    if np.any(powers < 0):
        raise ValueError("subcarrier powers must be non-negative")
    if P_t is not None and powers.sum() > P_t * (1 + 1e-9):
        raise ValueError(f"power budget violated: {powers.sum()} > {P_t}")
    return _rate_from_cfr(ofdm_cfr(refl, direct_taps, cascaded, ofdm), powers, sigma2_bar)


def water_filled_rate(cfr, P_t: float, sigma2_bar: float) -> float:
    """Rate with optimal power allocation across subcarriers for a fixed CFR."""
    gains = np.abs(np.asarray(cfr)) ** 2
    return _rate_from_cfr(cfr, water_fill(gains, P_t, sigma2_bar), sigma2_bar)


def ofdm_strongest_cir(cascaded, direct_taps) -> Reflection:
    """Co-phase all elements with the direct path at the strongest delay tap.

    The delay ``l*`` maximizes ``sum_n |G_r[n, l]| + |h_d[l]|`` (the tap's
    magnitude after alignment); ties go to the smallest delay.
    """
    hd, gr = _pad(direct_taps, cascaded)
    if gr.shape[0] == 0:
        raise ValueError("empty cascaded tap set")
    score = np.abs(gr).sum(axis=0) + np.abs(hd)
    l_star = int(np.argmax(score))
    ref = np.angle(hd[l_star]) if hd[l_star] != 0 else 0.0
    return Reflection(ref - np.angle(gr[:, l_star]))


def ofdm_upper_bound(direct_taps, cascaded, ofdm: OfdmSpec, P_t: float, sigma2_bar: float) -> float:
    """Rate bound with a separate reflection per subcarrier.

    Each subcarrier co-phases every element with the direct response, giving
    ``|c_q| = |D_q| + sum_n |F_{n,q}|``; power is then water-filled.
    """
    hd, gr = _pad(direct_taps, cascaded)
    q = ofdm.num_subcarriers
    if hd.size > q:
        raise ValueError(f"{hd.size} taps exceed {q} subcarriers")
    d = np.fft.fft(hd, n=q)
    f = np.fft.fft(gr, n=q, axis=1)
    mag = np.abs(d) + np.abs(f).sum(axis=0)
    return water_filled_rate(mag, P_t, sigma2_bar)
