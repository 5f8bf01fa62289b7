"""Capacity maximization for IRS-aided MIMO links.

The transmit covariance is always eigenmode transmission with water-filling
over the current end-to-end channel; the IRS phases are updated one element at
a time with the transmit covariance held fixed.
"""

from __future__ import annotations

import numpy as np

from ..channel import Reflection, make_rng
from .solution import AoOptions, BeamformingSolution, converged

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def water_fill(channel_gains, P_t: float, noise=1.0, tol: float = 1e-9, max_iter: int = 200) -> np.ndarray:
    """Water-filling power allocation over parallel channels.

    ``p_i = max(0, mu - noise_i / gain_i)`` with the water level ``mu`` found
    by bisection until ``|sum(p) - P_t| <= tol * P_t``. Channels with zero
    gain get no power.
    """
    gains = np.asarray(channel_gains, dtype=float).ravel()
    noise = np.broadcast_to(np.asarray(noise, dtype=float), gains.shape)
    if np.any(gains < 0) or np.any(noise <= 0):
        raise ValueError("gains must be non-negative and noise positive")
    active = gains > 0
    if not np.any(active):
        raise ValueError("water-filling needs at least one positive gain")
    if P_t <= 0:
        return np.zeros_like(gains)
    floor = np.full_like(gains, np.inf)
    floor[active] = noise[active] / gains[active]

    lo, hi = 0.0, float(np.min(floor[active])) + P_t
    p = np.zeros_like(gains)
    for _ in range(max_iter):
        mu = 0.5 * (lo + hi)
        p = np.maximum(0.0, mu - floor)
        total = p.sum()
        if abs(total - P_t) <= tol * P_t:
            break
        if total > P_t:
            hi = mu
        else:
            lo = mu
    return p


def log2det(H, Q, sigma2: float) -> float:
    """Rate ``log2 det(I + H Q H^H / sigma2)`` in bps/Hz."""
    H = np.atleast_2d(H)
    m = np.eye(H.shape[0]) + H @ Q @ H.conj().T / sigma2
    sign, logdet = np.linalg.slogdet(m)
    return float(logdet / np.log(2.0))


def eigenmode_covariance(H, P_t: float, sigma2: float) -> np.ndarray:
    """Capacity-achieving covariance ``V diag(p) V^H`` for a fixed channel."""
    H = np.atleast_2d(H)
    _, s, vh = np.linalg.svd(H)
    gains = s**2
    m_t = H.shape[1]
    if not np.any(gains > 0):
        return np.eye(m_t) * P_t / m_t
    p = water_fill(gains, P_t, sigma2)
    v = vh.conj().T[:, : p.size]
    return (v * p) @ v.conj().T


def mimo_capacity(H, P_t: float, sigma2: float):
    """Return ``(rate, Q)`` of the point-to-point MIMO channel ``H``."""
    Q = eigenmode_covariance(H, P_t, sigma2)
    return log2det(H, Q, sigma2), Q


def _batched_rate(mats, Q, sigma2):
    # mats: (..., M_r, M_t)
    cov = mats @ Q @ np.swapaxes(mats.conj(), -1, -2) / sigma2
    eye = np.eye(mats.shape[-2])
    _, logdet = np.linalg.slogdet(eye + cov)
    return logdet / np.log(2.0)


def golden_section_max(f, a: float, b: float, iters: int = 30):
    """Maximize a unimodal scalar function on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def best_phase(objective_batch, current: float, grid: int, refine_iters: int = 30):
    """Maximize a 2pi-periodic objective of one phase.

    ``objective_batch`` maps an array of phases to objective values. A
    ``grid``-point search is refined by golden-section search inside the
    bracketing grid cell pair. The current phase is kept unless beaten, which
    makes element-wise AO monotone.
    """
    thetas = np.arange(grid) * (2 * np.pi / grid)
    vals = objective_batch(thetas)
    k = int(np.argmax(vals))
    step = 2 * np.pi / grid
    x, fx = golden_section_max(lambda t: float(objective_batch(np.array([t]))[0]),
                               thetas[k] - step, thetas[k] + step, refine_iters)
    if vals[k] > fx:
        x, fx = thetas[k], float(vals[k])
    f_cur = float(objective_batch(np.array([current]))[0])
    if f_cur >= fx:
        return current, f_cur
    return float(np.mod(x, 2 * np.pi)), fx


def element_phase(rest, r, t, Q, sigma2: float) -> float:
    """Exact maximizer over ``theta`` of ``log det(I + H Q H^H / sigma2)`` with
    ``H = rest + e^{j theta} r t^T`` and everything else fixed.

    The objective is ``log det(A + e^{j theta} B + e^{-j theta} B^H)`` with
    the rank-one ``B = r v^H / sigma2``, ``v = rest Q conj(t)``. By the
    matrix determinant lemma this is ``log det(A)`` plus
    ``log(1 + |lam|^2 - c + 2 Re(e^{j theta} lam))``, ``lam = tr(A^{-1} B)``
    and ``c`` independent of ``theta``; hence ``theta = -arg(lam)``.
    """
    v = (rest @ Q @ t.conj()) / sigma2  # B = r v^H
    A = np.eye(rest.shape[0]) + (rest @ Q @ rest.conj().T + np.outer(r, r.conj()) * (t @ Q @ t.conj()).real) / sigma2
    lam = np.vdot(v, np.linalg.solve(A, r))
    return float(np.mod(-np.angle(lam), 2 * np.pi)) if lam != 0 else 0.0


def _initial_phases(H_d, G, H_r, opts: AoOptions):
    n = G.shape[0]
    if opts.init_policy == "zero-phase":
        return np.zeros(n)
    if opts.init_policy == "random":
        return make_rng(opts.init_seed).uniform(0, 2 * np.pi, n)
    # siso-align: co-phase every element along the dominant direct eigenmode
    if np.any(H_d != 0):
        u, _, vh = np.linalg.svd(H_d)
        u1, v1 = u[:, 0], vh[0].conj()
        direct = u1.conj() @ H_d @ v1
    else:
        u, _, vh = np.linalg.svd(H_r @ G)
        u1, v1 = u[:, 0], vh[0].conj()
        direct = 0.0
    a = (u1.conj() @ H_r) * (G @ v1)
    zeta = np.angle(direct) if direct != 0 else 0.0
    return np.mod(zeta - np.angle(a), 2 * np.pi)


def mimo_ao(H_d, G, H_r, P_t: float, sigma2: float, opts: AoOptions = AoOptions()) -> BeamformingSolution:
    """Alternating optimization of IRS phases and transmit covariance.

    Parameters
    ----------
    H_d : (M_r, M_t) direct channel.
    G : (N, M_t) AP-IRS channel.
    H_r : (M_r, N) IRS-user channel.

    Each sweep maximizes ``log2 det(I + H~ Q H~^H / sigma2)`` over every
    phase in turn (``opts.phase_update``: exact closed form, or grid plus
    golden-section search) and then re-water-fills ``Q`` on the new channel
    ``H~ = H_d + H_r diag(e^{j theta}) G``. A phase only changes when the
    objective strictly improves, so the trace is non-decreasing.
    """
    H_d = np.atleast_2d(np.asarray(H_d, dtype=complex))
    m_r, m_t = H_d.shape
    G = np.asarray(G, dtype=complex).reshape(-1, m_t)
    H_r = np.asarray(H_r, dtype=complex).reshape(m_r, -1)
    n = G.shape[0]
    if H_r.shape[1] != n:
        raise ValueError(f"H_r has {H_r.shape[1]} columns but G has {n} rows")
    if not P_t > 0 or not sigma2 > 0:
        raise ValueError("P_t and sigma2 must be positive")

    if n == 0:
        cap, Q = mimo_capacity(H_d, P_t, sigma2)
        return BeamformingSolution(Reflection(np.zeros(0)), Q, (cap,), True, cap)

    theta = _initial_phases(H_d, G, H_r, opts)
    # rank-one contribution of each element: outer(H_r[:, n], G[n])
    parts = H_r.T[:, :, None] * G[:, None, :]
    H = H_d + np.tensordot(np.exp(1j * theta), parts, axes=1)
    cap, Q = mimo_capacity(H, P_t, sigma2)
    trace = [cap]
    done = False
    for _ in range(opts.max_sweeps):
        for k in range(n):
            rest = H - np.exp(1j * theta[k]) * parts[k]

            def obj(ts, rest=rest, part=parts[k]):
                mats = rest[None] + np.exp(1j * np.asarray(ts))[:, None, None] * part[None]
                return _batched_rate(mats, Q, sigma2)

            if opts.phase_update == "grid":
                theta[k], _ = best_phase(obj, theta[k], opts.phase_grid)
            else:
                cand = element_phase(rest, H_r[:, k], G[k], Q, sigma2)
                vals = obj(np.array([theta[k], cand]))
                if vals[1] > vals[0]:
                    theta[k] = cand
            H = rest + np.exp(1j * theta[k]) * parts[k]
        new, Q_new = mimo_capacity(H, P_t, sigma2)
        if new < log2det(H, Q, sigma2):  # numerical guard; water-filling is optimal
            new = log2det(H, Q, sigma2)
        else:
            Q = Q_new
        trace.append(new)
        if converged(cap, new, opts.tol):
            done = True
            break
        cap = new
    return BeamformingSolution(Reflection(theta), Q, tuple(trace), done, trace[-1])


def mimo_channel(H_d, G, H_r, refl: Reflection) -> np.ndarray:
    H_d = np.atleast_2d(np.asarray(H_d, dtype=complex))
    G = np.asarray(G, dtype=complex).reshape(-1, H_d.shape[1])
    H_r = np.asarray(H_r, dtype=complex).reshape(H_d.shape[0], -1)
    return H_d + (H_r * refl.coefficients) @ G
