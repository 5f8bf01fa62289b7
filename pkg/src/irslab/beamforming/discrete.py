"""Discrete phase-shift and on/off amplitude control."""

from __future__ import annotations

import numpy as np

from ..channel import Reflection


def quantize_phases(phases, bits: int) -> np.ndarray:
    """Nearest point of ``{0, d, ..., (K-1) d}``, ``d = 2pi / 2**bits``, under circular distance.

    A phase exactly halfway between two levels goes to the lower one.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    levels = 2**bits
    step = 2 * np.pi / levels
    x = np.mod(np.asarray(phases, dtype=float), 2 * np.pi) / step
    idx = np.ceil(x - 0.5)  # round half down
    return np.mod(idx, levels) * step


def quantize_reflection(refl: Reflection, b_theta: int) -> Reflection:
    """Independently round every phase of ``refl`` to a ``b_theta``-bit grid."""
    return Reflection(quantize_phases(refl.phases, b_theta), refl.amplitudes, phase_bits=b_theta,
                      amplitude_bits=refl.amplitude_bits)


def quantization_loss(b_theta: int) -> float:
    """Large-N power ratio of ``b``-bit to continuous phases: ``((2^b / pi) sin(pi / 2^b))^2``."""
    if b_theta < 1:
        raise ValueError("b_theta must be >= 1")
    k = 2.0**b_theta
    return float((k / np.pi * np.sin(np.pi / k)) ** 2)


def one_bit_amplitude(h_r, g) -> Reflection:
    """Zero phases; an element is switched on iff ``arg(conj(h_r) g)`` is in ``[-pi/2, pi/2]``."""
    h_r = np.asarray(h_r, dtype=complex).ravel()
    g = np.asarray(g, dtype=complex).ravel()
    if h_r.shape != g.shape:
        raise ValueError(f"h_r and g lengths differ: {h_r.size} vs {g.size}")
    ang = np.angle(h_r.conj() * g)
    beta = (np.abs(ang) <= np.pi / 2).astype(float)
    return Reflection(np.zeros(h_r.size), beta, amplitude_bits=1)


def discrete_refine(objective, refl: Reflection, b_theta: int, max_sweeps: int = 20) -> Reflection:
    """Element-wise coordinate ascent over the discrete phase set.

    ``objective`` maps a coefficient vector to a scalar to maximize. Each
    element tries every level with the others fixed; stops when a full sweep
    changes nothing.
    """
    levels = np.arange(2**b_theta) * (2 * np.pi / 2**b_theta)
    phases = quantize_phases(refl.phases, b_theta)
    amps = refl.amplitudes
    best = objective(amps * np.exp(1j * phases))
    for _ in range(max_sweeps):
        changed = False
        for n in range(phases.size):
            keep = phases[n]
            for lv in levels:
                if lv == keep:
                    continue
                phases[n] = lv
                val = objective(amps * np.exp(1j * phases))
                if val > best * (1 + 1e-12):
                    best, keep, changed = val, lv, True
            phases[n] = keep
        if not changed:
            break
    return Reflection(phases, amps, phase_bits=b_theta)


def rotation_candidates(phases, b_theta: int) -> list[np.ndarray]:
    """Every distinct ``b_theta``-bit quantization of ``phases + phi`` for a common ``phi``.

    As ``phi`` sweeps the circle an element's rounding changes only when its
    phase crosses a decision boundary, so ``N + 1`` offsets inside one level
    step, each combined with all ``2**b_theta`` global level shifts, cover
    every distinct candidate.
    """
    levels = 2**b_theta
    step = 2 * np.pi / levels
    theta = np.mod(np.asarray(phases, dtype=float), 2 * np.pi)
    cross = np.sort(np.mod(step / 2 - np.mod(theta, step), step))
    offsets = np.concatenate([[0.0], cross + 1e-9 * step])
    out = []
    for phi in offsets:
        idx = np.rint(quantize_phases(theta + phi, b_theta) / step).astype(int)
        out.extend(np.mod(idx + k, levels) * step for k in range(levels))
    return out


def rotation_quantize(objective, refl: Reflection, b_theta: int) -> Reflection:
    """Quantize a continuous solution, choosing the common phase offset that maximizes ``objective``.

    Plain rounding fixes the offset at zero, which loses heavily when the
    direct path is weak and the reference phase is arbitrary. For a
    single-antenna receiver whose reflected paths share one transmit
    direction (rank-one AP-IRS link) the best candidate is the exact discrete
    optimum: the optimal discrete point rounds every element toward the phase
    of its own received sum, which is one of the candidates.
    """
    amps = refl.amplitudes
    best = max(rotation_candidates(refl.phases, b_theta), key=lambda p: objective(amps * np.exp(1j * p)))
    return Reflection(best, amps, phase_bits=b_theta, amplitude_bits=refl.amplitude_bits)
