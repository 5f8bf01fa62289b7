"""Single-user narrow-band passive beamforming (SISO closed form, MISO AO)."""

from __future__ import annotations

import math

import numpy as np

from ..channel import Reflection, make_rng
from .solution import AoOptions, BeamformingSolution, converged


def _phase_or_zero(z: complex) -> float:
    return float(np.angle(z)) if z != 0 else 0.0


def siso_align(h_r, g, h_d: complex = 0.0) -> Reflection:
    """Optimal reflection for a single-antenna link.

    ``theta_n = zeta - (phi_n + psi_n)`` with ``phi_n``, ``psi_n`` the phases of
    ``conj(h_r[n])`` and ``g[n]`` and ``zeta`` the phase of ``conj(h_d)``
    (zero when there is no direct link). All amplitudes are 1.
    """
    h_r = np.asarray(h_r, dtype=complex).ravel()
    g = np.asarray(g, dtype=complex).ravel()
    if h_r.shape != g.shape:
        raise ValueError(f"h_r and g lengths differ: {h_r.size} vs {g.size}")
    zeta = _phase_or_zero(np.conj(complex(h_d)))
    return Reflection(zeta - np.angle(h_r.conj() * g))


def effective_siso(h_r, g, refl: Reflection, h_d: complex = 0.0) -> complex:
    h_r = np.asarray(h_r, dtype=complex).ravel()
    g = np.asarray(g, dtype=complex).ravel()
    return complex(np.sum(h_r.conj() * refl.coefficients * g) + np.conj(h_d))


def receive_snr(h_d, h_r, g, refl: Reflection, P_t: float, sigma2: float) -> float:
    """Linear SNR ``P_t |sum_n h_r,n^* beta_n e^{j theta_n} g_n + h_d^*|^2 / sigma2``."""
    if not P_t > 0 or not sigma2 > 0:
        raise ValueError("P_t and sigma2 must be positive")
    return P_t * abs(effective_siso(h_r, g, refl, h_d)) ** 2 / sigma2


def rate(snr) -> float:
    """Achievable rate ``log2(1 + snr)`` in bps/Hz."""
    return np.log2(1.0 + np.asarray(snr, dtype=float))


def asymptotic_receive_power(N: int, P_t: float, rho_h2: float, rho_g2: float) -> float:
    """Large-N receive power under i.i.d. Rayleigh hops: ``N^2 P_t pi^2 rho_h2 rho_g2 / 16``."""
    if min(N, P_t, rho_h2, rho_g2) <= 0:
        raise ValueError("all inputs must be positive")
    return N**2 * P_t * np.pi**2 * rho_h2 * rho_g2 / 16


def coverage_constant(P_r: float, P_t: float, c0: float, rho_g: float) -> float:
    """Constant ``c1 = sqrt(P_r / (P_t c0)) * 4 / rho_g`` of the coverage law."""
    return math.sqrt(P_r / (P_t * c0)) * 4 / rho_g


def required_elements(d2: float, a: float, c1: float) -> int:
    """Elements needed to hold the receive power at IRS-user distance ``d2``: ``ceil(d2^(a/2) c1)``."""
    if min(d2, a, c1) <= 0:
        raise ValueError("inputs must be positive")
    return math.ceil(d2 ** (a / 2) * c1)


def mrt(h_eff, P_t: float) -> np.ndarray:
    """Maximum-ratio transmission ``sqrt(P_t) h / ||h||``; maximizes ``|h^H w|^2``."""
    h = np.asarray(h_eff, dtype=complex).ravel()
    nrm = np.linalg.norm(h)
    if nrm == 0:
        raise ValueError("MRT undefined for an all-zero channel")
    return math.sqrt(P_t) * h / nrm


def _miso_effective(G, h_r, h_d, coeffs):
    # row vector h_r^H diag(c) G + h_d^H
    return (h_r.conj() * coeffs) @ G + h_d.conj()


def miso_ao(G, h_r, h_d, P_t: float, sigma2: float, opts: AoOptions = AoOptions(),
            w0=None) -> BeamformingSolution:
    """Joint transmit/passive beamforming for an ``M_t``-antenna AP by AO.

    Alternates MRT on the current effective channel with the closed-form
    phase update given the transmit vector. The objective is the received
    signal power ``|(h_r^H Theta G + h_d^H) w|^2``; ``objective_trace`` holds
    it after initialization and after every sweep.

    ``w0`` overrides the initial transmit vector (the phases are then aligned
    to it before the first sweep).
    """
    G = np.atleast_2d(np.asarray(G, dtype=complex))
    h_r = np.asarray(h_r, dtype=complex).ravel()
    h_d = np.asarray(h_d, dtype=complex).ravel()
    n, m_t = G.shape
    if h_r.size != n:
        raise ValueError(f"h_r has {h_r.size} entries but G has {n} rows")
    if h_d.size == 1 and m_t > 1 and h_d[0] == 0:
        h_d = np.zeros(m_t, dtype=complex)
    if h_d.size != m_t:
        raise ValueError(f"h_d has {h_d.size} entries but G has {m_t} columns")
    if not P_t > 0 or not sigma2 > 0:
        raise ValueError("P_t and sigma2 must be positive")

    def align_to(w):
        # SISO problem in w: direct term h_d^H w = conj(w^H h_d)
        return siso_align(h_r, G @ w, np.vdot(w, h_d))

    if w0 is not None:
        refl = align_to(np.asarray(w0, dtype=complex))
    elif opts.init_policy == "zero-phase":
        refl = Reflection.unit(n)
    elif opts.init_policy == "random":
        refl = Reflection(make_rng(opts.init_seed).uniform(0, 2 * np.pi, n))
    else:
        if np.any(h_d != 0):
            refl = align_to(mrt(h_d, P_t))
        else:
            refl = align_to(mrt(G[0].conj(), P_t))

    w = mrt(_miso_effective(G, h_r, h_d, refl.coefficients).conj(), P_t)
    obj = abs(_miso_effective(G, h_r, h_d, refl.coefficients) @ w) ** 2
    trace = [obj]
    done = False
    for _ in range(opts.max_sweeps):
        refl = align_to(w)
        w = mrt(_miso_effective(G, h_r, h_d, refl.coefficients).conj(), P_t)
        new = abs(_miso_effective(G, h_r, h_d, refl.coefficients) @ w) ** 2
        trace.append(new)
        if converged(obj, new, opts.tol):
            done = True
            break
        obj = new
    return BeamformingSolution(refl, w, tuple(trace), done, float(rate(trace[-1] / sigma2)))


def miso_received_power(G, h_r, h_d, refl: Reflection, w) -> float:
    G = np.atleast_2d(np.asarray(G, dtype=complex))
    h_d = np.broadcast_to(np.asarray(h_d, dtype=complex).ravel(), (G.shape[1],))
    eff = _miso_effective(G, np.asarray(h_r, dtype=complex).ravel(), h_d, refl.coefficients)
    return float(abs(eff @ np.asarray(w, dtype=complex)) ** 2)
