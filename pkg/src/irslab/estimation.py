"""Cascaded-channel estimation for a fully passive IRS.

Single-antenna uplink model: during training instant ``t`` the IRS applies
reflection state ``S[t]`` and the receiver observes

    y_t = sqrt(P) (h_d + sum_g S[t, g] c_g) + n_t,

where ``c_g`` is the cascaded channel of sub-surface ``g`` (the sum of its
elements' cascaded channels). Pilot symbols are fixed to 1, so all training
diversity comes from the reflection pattern. Estimators only ever see
cascaded products, never the two hops separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import complex_normal, make_rng, trial_rng

PATTERN_KINDS = ("dft", "onoff", "dft-quantized", "random")


class EstimationError(ValueError):
    pass


@dataclass(frozen=True)
class TrainingPattern:
    """Reflection states over time, shape ``T x (N_bar + 1)``.

    Column 0 multiplies the direct channel and is all ones.
    """

    states: np.ndarray
    kind: str
    levels: int | None = None
    seed: int | None = None

    @property
    def n_groups(self) -> int:
        return self.states.shape[1] - 1

    @property
    def length(self) -> int:
        return self.states.shape[0]

    @property
    def reflection_states(self) -> np.ndarray:
        return self.states[:, 1:]


def _dft_phase_index(n: int) -> np.ndarray:
    # exact integer phase index m of entry exp(-2j pi m / n)
    k = np.arange(n)
    return np.mod(np.outer(k, k), n)


def dft_matrix(n: int) -> np.ndarray:
    return np.exp(-2j * np.pi * _dft_phase_index(n) / n)


def quantized_dft(n: int, levels: int) -> np.ndarray:
    """DFT matrix with each phase rounded to ``levels`` uniform levels.

    Rounding is done on exact integer phase indices so grid midpoints break
    the same way as :func:`quantize_phases` (half down) without float noise.
    """
    m = np.mod(-_dft_phase_index(n), n)  # phase 2 pi m / n in [0, 2 pi)
    num = 2 * m * levels - n  # nearest level is ceil(num / (2 n))
    idx = np.mod(-((-num) // (2 * n)), levels)
    return np.exp(2j * np.pi * idx / levels)


def make_pattern(kind: str, n_groups: int, levels: int | None = None, seed: int | None = None) -> TrainingPattern:
    """Training pattern with ``T = n_groups + 1`` states.

    ``dft``: columns of the ``(N_bar+1)``-point DFT matrix, exactly orthogonal.
    ``onoff``: all elements off, then one sub-surface on at a time.
    ``dft-quantized``: DFT phases rounded to ``levels`` uniform levels.
    ``random``: i.i.d. uniform unit-modulus phases (needs ``seed``).
    """
    if n_groups < 1:
        raise ValueError("n_groups must be >= 1")
    t = n_groups + 1
    if kind == "dft":
        states = dft_matrix(t)
    elif kind == "onoff":
        states = np.zeros((t, t), dtype=complex)
        states[:, 0] = 1.0
        states[1:, 1:] = np.eye(n_groups)
    elif kind == "dft-quantized":
        if levels is None or levels < 2 or levels & (levels - 1):
            raise ValueError("dft-quantized needs a power-of-two number of levels >= 2")
        states = quantized_dft(t, levels)
        states[:, 0] = 1.0
    elif kind == "random":
        if seed is None:
            raise ValueError("random pattern needs a seed")
        states = np.exp(1j * make_rng(seed).uniform(0, 2 * np.pi, (t, t)))
        states[:, 0] = 1.0
    else:
        raise ValueError(f"unknown pattern kind {kind!r}; expected one of {PATTERN_KINDS}")
    return TrainingPattern(states, kind, levels, seed)


@dataclass(frozen=True)
class GroupingMap:
    """Assignment of ``N`` elements to ``n_groups`` sub-surfaces (0-based labels)."""

    assignment: np.ndarray
    n_groups: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=int).ravel()
        object.__setattr__(self, "assignment", a)
        if not 1 <= self.n_groups <= a.size:
            raise ValueError(f"need 1 <= n_groups <= N, got {self.n_groups} for N={a.size}")
        if a.min() < 0 or a.max() >= self.n_groups:
            raise ValueError("assignment labels out of range")
        counts = np.bincount(a, minlength=self.n_groups)
        if np.any(counts == 0):
            raise ValueError(f"empty groups: {np.flatnonzero(counts == 0).tolist()}")

    @property
    def n_elements(self) -> int:
        return self.assignment.size

    @property
    def ratio(self) -> float:
        return self.n_groups / self.n_elements

    @classmethod
    def identity(cls, n: int) -> "GroupingMap":
        return cls(np.arange(n), n)


def tile_shape(rows: int, cols: int, n_groups: int) -> tuple[int, int]:
    """Most square ``(a, b)`` with ``a * b = n_groups``, ``a | rows`` and ``b | cols``."""
    best = None
    for a in range(1, rows + 1):
        if rows % a or n_groups % a:
            continue
        b = n_groups // a
        if b > cols or cols % b:
            continue
        if best is None or abs(a - b) < abs(best[0] - best[1]):
            best = (a, b)
    if best is None:
        raise ValueError(f"{n_groups} sub-surfaces do not tile a {rows}x{cols} surface")
    return best


def tile_grouping(rows: int, cols: int, n_groups: int) -> GroupingMap:
    """Group a ``rows x cols`` element grid (row-major) into contiguous rectangular tiles."""
    a, b = tile_shape(rows, cols, n_groups)
    r = np.arange(rows)[:, None] // (rows // a)
    c = np.arange(cols)[None, :] // (cols // b)
    return GroupingMap((r * b + c).ravel(), n_groups)


def feasible_group_counts(rows: int, cols: int) -> list[int]:
    out = []
    for n in range(1, rows * cols + 1):
        try:
            tile_shape(rows, cols, n)
        except ValueError:
            continue
        out.append(n)
    return out


def group_channels(cascaded, grouping: GroupingMap) -> np.ndarray:
    """Effective cascaded channel of each sub-surface (sum over its elements)."""
    cascaded = np.asarray(cascaded, dtype=complex).ravel()
    if cascaded.size != grouping.n_elements:
        raise ValueError(f"{cascaded.size} cascaded coefficients for {grouping.n_elements} elements")
    out = np.zeros(grouping.n_groups, dtype=complex)
    np.add.at(out, grouping.assignment, cascaded)
    return out


def simulate_pilots(true_h_d, true_cascaded, grouping: GroupingMap, pattern: TrainingPattern,
                    pilot_power: float, sigma2: float, seed=None) -> np.ndarray:
    """Received training observations (length ``T``)."""
    if grouping.n_groups != pattern.n_groups:
        raise ValueError(f"pattern trains {pattern.n_groups} groups but grouping has {grouping.n_groups}")
    x = np.concatenate([[complex(true_h_d)], group_channels(true_cascaded, grouping)])
    y = np.sqrt(pilot_power) * (pattern.states @ x)
    if sigma2 > 0:
        y = y + np.sqrt(sigma2) * complex_normal(make_rng(seed), y.shape)
    return y


@dataclass(frozen=True)
class EstimationResult:
    h_d_hat: complex
    cascaded_hat: np.ndarray
    residual: float


def ls_estimate(observations, pattern: TrainingPattern, pilot_power: float) -> EstimationResult:
    """Least-squares estimate of the direct and grouped cascaded channels."""
    y = np.asarray(observations, dtype=complex).ravel()
    S = pattern.states
    if y.size != S.shape[0]:
        raise ValueError(f"{y.size} observations for a {S.shape[0]}-state pattern")
    if S.shape[0] < S.shape[1] or np.linalg.matrix_rank(S) < S.shape[1]:
        raise EstimationError(f"{pattern.kind} training pattern is rank deficient for "
                              f"{pattern.n_groups} sub-surfaces")
    x, *_ = np.linalg.lstsq(S, y / np.sqrt(pilot_power), rcond=None)
    resid = y - np.sqrt(pilot_power) * (S @ x)
    return EstimationResult(complex(x[0]), x[1:], float(np.mean(np.abs(resid) ** 2)))


def min_training_multiuser(K: int, N: int, M_B: int) -> int:
    """Minimum uplink pilots for ``K`` users, ``N`` elements and ``M_B`` BS antennas."""
    if min(K, N, M_B) < 1:
        raise ValueError("K, N and M_B must be positive")
    return K + N + max(K - 1, -(-(K - 1) * N // M_B))


def max_users_ofdm(N: int, Q_sc: int, L: int) -> int:
    """Users whose cascaded channels ``N + 1`` OFDM symbols can resolve at once."""
    if not Q_sc > L >= 1:
        raise ValueError("need Q_sc > L >= 1")
    return (N + 1) * (Q_sc - L) // (N + L) + 1


# --------------------------------------------------------------------------
# Training overhead versus beamforming gain
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class GroupingStudy:
    """Single-user narrow-band setup for the training/rate trade-off.

    Cascaded per-element channels are ``CN(0, element_gain)``; the direct
    channel ``CN(0, direct_gain)``. ``correlation`` in [0, 1] mixes a
    component shared by every element of a sub-surface with independent
    per-element fading.
    """

    rows: int = 12
    cols: int = 12
    coherence: int = 150
    pilot_snr_db: float = 5.0
    data_snr_db: float = 5.0
    direct_gain: float = 1.0
    element_gain: float = 1.0
    correlation: float = 0.0

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


def _draw_channels(study: GroupingStudy, grouping: GroupingMap, rng):
    n = study.n_elements
    h_d = np.sqrt(study.direct_gain) * complex_normal(rng, ())
    indep = complex_normal(rng, n)
    shared = complex_normal(rng, grouping.n_groups)[grouping.assignment]
    r = study.correlation
    c = np.sqrt(study.element_gain) * (np.sqrt(r) * shared + np.sqrt(1 - r) * indep)
    return complex(h_d), c


def grouped_rate(study: GroupingStudy, n_groups: int, kind: str, base_seed: int, trial: int,
                 levels: int | None = None) -> float:
    """Rate of one trial: train, LS-estimate, align sub-surfaces, transmit data.

    Channel and noise draws depend on ``(base_seed, trial, n_groups)`` only,
    so different pattern kinds see common random numbers.
    """
    grouping = tile_grouping(study.rows, study.cols, n_groups)
    t_train = n_groups + 1
    if t_train > study.coherence:
        raise ValueError(f"{t_train} training symbols exceed coherence time {study.coherence}")
    pattern = make_pattern(kind, n_groups, levels=levels, seed=base_seed + trial)
    rng = trial_rng(base_seed, trial, n_groups)
    h_d, c = _draw_channels(study, grouping, rng)
    p = 10 ** (study.pilot_snr_db / 10)  # noise power normalized to 1
    y = simulate_pilots(h_d, c, grouping, pattern, p, 1.0, rng)
    est = ls_estimate(y, pattern, p)
    ref = np.angle(est.h_d_hat)
    theta_group = ref - np.angle(est.cascaded_hat)
    coeffs = np.exp(1j * theta_group)[grouping.assignment]
    gain = abs(h_d + np.sum(coeffs * c)) ** 2
    snr = 10 ** (study.data_snr_db / 10) * gain
    return (1 - t_train / study.coherence) * float(np.log2(1 + snr))


def rate_vs_grouping(study: GroupingStudy, group_counts, kinds=("dft", "onoff"), trials: int = 200,
                     seed: int = 0, levels: int | None = None) -> list[dict]:
    """Mean achievable rate per grouping ratio and training pattern.

    Returns one row per sub-surface count: ``{"n_groups", "rho", <kind>: rate}``.
    """
    rows = []
    for n_groups in group_counts:
        row = {"n_groups": int(n_groups), "rho": n_groups / study.n_elements}
        for kind in kinds:
            vals = [grouped_rate(study, n_groups, kind, seed, t, levels) for t in range(trials)]
            row[kind] = float(np.mean(vals))
        rows.append(row)
    return rows
