"""IRS placement and partitioning: link-level SNR laws and two-user MAC regions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import grid_positions, los_from_positions, make_rng

SCHEMES = ("TDMA", "FDMA", "NOMA")
STRATEGIES = ("centralized", "distributed")


# --------------------------------------------------------------------------
# Link level
# --------------------------------------------------------------------------
def single_irs_snr(d, D: float, H: float, N: int, P: float, beta0: float, sigma2: float):
    """SNR with one optimally-configured IRS at horizontal distance ``d`` from the user.

    ``P beta0^2 N^2 / ((d^2 + H^2) ((D - d)^2 + H^2) sigma2)``. ``d`` may be an array.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d < 0) or np.any(d > D):
        raise ValueError("IRS-user horizontal distance must lie in [0, D]")
    if min(D, H, N, P, beta0, sigma2) <= 0:
        raise ValueError("D, H, N, P, beta0 and sigma2 must be positive")
    out = P * beta0**2 * N**2 / ((d**2 + H**2) * ((D - d) ** 2 + H**2) * sigma2)
    return float(out) if out.ndim == 0 else out


def double_irs_snr(D: float, H: float, N: int, P: float, beta0: float, sigma2: float) -> float:
    """SNR of two cooperative ``N/2``-element IRSs above user and AP: ``P beta0^3 N^4 / (16 H^4 D^2 sigma2)``."""
    if min(D, H, N, P, beta0, sigma2) <= 0:
        raise ValueError("all inputs must be positive")
    return P * beta0**3 * N**4 / (16 * H**4 * D**2 * sigma2)


def cooperation_threshold(H: float, beta0: float) -> float:
    """Element count above which two cooperative IRSs beat the best single IRS: ``4 H / sqrt(beta0)``."""
    if H <= 0 or beta0 <= 0:
        raise ValueError("H and beta0 must be positive")
    return 4 * H / math.sqrt(beta0)


def orthogonal_sum_rates(K: int, N: int, d: float, D_k, P_bar: float, sigma2_bar: float, beta0: float):
    """Equal-time TDMA sum rates ``(R_cen, R_dis, R_cen - R_dis)`` under free-space LoS.

    Centralized: every user gets all ``N`` elements. Distributed: ``N/K`` each.
    """
    if N % K:
        raise ValueError(f"distributed deployment needs K | N, got N={N}, K={K}")
    D_k = np.broadcast_to(np.asarray(D_k, dtype=float), (K,))
    base = P_bar * beta0**2 / (d**2 * D_k**2 * sigma2_bar)
    r_cen = float(np.mean(np.log2(1 + base * N**2)))
    r_dis = float(np.mean(np.log2(1 + base * (N / K) ** 2)))
    return r_cen, r_dis, r_cen - r_dis


# --------------------------------------------------------------------------
# Rate regions
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class RateRegion:
    """Downward-closed region given by its Pareto boundary from ``(0, R2max)`` to ``(R1max, 0)``."""

    boundary: np.ndarray
    scheme: str
    strategy: str = ""

    def __post_init__(self):
        b = np.asarray(self.boundary, dtype=float).reshape(-1, 2)
        if np.any(b < -1e-12):
            raise ValueError("rates must be non-negative")
        object.__setattr__(self, "boundary", np.maximum(b, 0.0))

    @property
    def max_rates(self):
        return float(self.boundary[:, 0].max()), float(self.boundary[:, 1].max())

    def envelope(self, r1) -> np.ndarray:
        """Largest ``R2`` on the boundary polyline at abscissa ``r1`` (``-inf`` outside)."""
        r1 = np.atleast_1d(np.asarray(r1, dtype=float))
        b = self.boundary
        out = np.full(r1.shape, -np.inf)
        for (x0, y0), (x1, y1) in zip(b[:-1], b[1:]):
            lo, hi = min(x0, x1), max(x0, x1)
            inside = (r1 >= lo) & (r1 <= hi)
            if not np.any(inside):
                continue
            if hi - lo < 1e-15:
                val = np.full(r1.shape, max(y0, y1))
            else:
                val = y0 + (y1 - y0) * (r1 - x0) / (x1 - x0)
            out = np.where(inside, np.maximum(out, val), out)
        return out

    def contains(self, point, tol: float = 1e-9) -> bool:
        r1, r2 = float(point[0]), float(point[1])
        if r1 < -tol or r2 < -tol:
            return False
        r1max, _ = self.max_rates
        if r1 > r1max + tol:
            return False
        return bool(r2 <= self.envelope(min(max(r1, 0.0), r1max))[0] + tol)

    def sum_rate(self) -> float:
        return float(self.boundary.sum(axis=1).max())


def _noma_corners(g1, g2):
    r1, r2 = np.log2(1 + g1), np.log2(1 + g2)
    s = np.log2(1 + g1 + g2)
    return r1, r2, s


def noma_pentagon(g1: float, g2: float) -> np.ndarray:
    """Pareto boundary of the two-user MAC capacity region (SIC corner points)."""
    r1, r2, s = _noma_corners(g1, g2)
    return np.array([[0.0, r2], [s - r2, r2], [r1, s - r1], [r1, 0.0]])


def fdma_curve(g1: float, g2: float, n_points: int = 101) -> np.ndarray:
    """``R_k = a_k log2(1 + g_k / a_k)`` for bandwidth fractions ``a_1 = a``, ``a_2 = 1 - a``."""
    a = np.linspace(0.0, 1.0, n_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(a > 0, a * np.log2(1 + g1 / np.where(a > 0, a, 1)), 0.0)
        r2 = np.where(a < 1, (1 - a) * np.log2(1 + g2 / np.where(a < 1, 1 - a, 1)), 0.0)
    return np.column_stack([r1, r2])


def mac_region(gamma1: float, gamma2: float, scheme: str, n_points: int = 101) -> RateRegion:
    """Two-user MAC achievable-rate region for a fixed pair of receive SNRs."""
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError("SNRs must be non-negative")
    if scheme == "TDMA":
        tau = np.linspace(0.0, 1.0, n_points)
        r1, r2 = np.log2(1 + gamma1), np.log2(1 + gamma2)
        pts = np.column_stack([tau * r1, (1 - tau) * r2])
    elif scheme == "FDMA":
        pts = fdma_curve(gamma1, gamma2, n_points)
    elif scheme == "NOMA":
        corners = noma_pentagon(gamma1, gamma2)
        # dense sampling of the sum-rate face between the SIC corners
        face = np.linspace(0.0, 1.0, max(n_points - 2, 2))[:, None]
        mid = corners[1] + face * (corners[2] - corners[1])
        pts = np.vstack([corners[:1], mid, corners[3:]])
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return RateRegion(pts, scheme)


def union_boundary(regions, n_points: int = 201) -> np.ndarray:
    """Pareto boundary of the union of several downward-closed regions."""
    r1max = max(r.max_rates[0] for r in regions)
    xs = np.union1d(np.linspace(0.0, r1max, n_points),
                    np.concatenate([r.boundary[:, 0] for r in regions]))
    env = np.max([r.envelope(xs) for r in regions], axis=0)
    pts = [[0.0, max(r.max_rates[1] for r in regions)]]
    pts += [[x, y] for x, y in zip(xs, env) if np.isfinite(y)]
    pts.append([r1max, 0.0])
    return np.array(pts)


# --------------------------------------------------------------------------
# Centralized passive beamforming for simultaneous access
# --------------------------------------------------------------------------
def weighted_noma_value(g1, g2, mu):
    """``max mu R1 + (1 - mu) R2`` over the capacity pentagon (decode the heavier user last)."""
    g1, g2 = np.asarray(g1), np.asarray(g2)
    s = np.log2(1 + g1 + g2)
    if mu >= 0.5:
        return (2 * mu - 1) * np.log2(1 + g1) + (1 - mu) * s
    return (1 - 2 * mu) * np.log2(1 + g2) + mu * s


def weighted_fdma_value(g1, g2, mu, grid: int = 201):
    g1 = np.atleast_1d(np.asarray(g1, dtype=float))
    g2 = np.atleast_1d(np.asarray(g2, dtype=float))
    a = np.linspace(1e-6, 1 - 1e-6, grid)[:, None]
    val = mu * a * np.log2(1 + g1 / a) + (1 - mu) * (1 - a) * np.log2(1 + g2 / (1 - a))
    out = val.max(axis=0)
    # the corner allocations a = 0 / a = 1
    out = np.maximum(out, np.maximum(mu * np.log2(1 + g1), (1 - mu) * np.log2(1 + g2)))
    return out


def weighted_ao(cascaded, snr_scale: float, mu: float, scheme: str, theta0, grid: int = 64,
                max_sweeps: int = 30, tol: float = 1e-7):
    """Element-wise phase ascent of a weighted two-user rate.

    ``cascaded`` is ``2 x N``: user ``k``'s per-element cascaded channels, so
    user ``k``'s SNR is ``snr_scale |sum_n c[k, n] e^{j theta_n}|^2``. Each
    element is updated by a grid search followed by a finer local grid; the
    current phase is kept unless beaten.
    """
    c = np.asarray(cascaded, dtype=complex)
    theta = np.array(theta0, dtype=float)
    value = weighted_noma_value if scheme == "NOMA" else weighted_fdma_value
    s = (c * np.exp(1j * theta)).sum(axis=1)

    def f(s1, s2):
        return value(snr_scale * np.abs(s1) ** 2, snr_scale * np.abs(s2) ** 2, mu)

    best = float(np.asarray(f(s[0], s[1])).ravel()[0])
    coarse = np.arange(grid) * (2 * np.pi / grid)
    fine = np.linspace(-1.0, 1.0, 33) * (2 * np.pi / grid)
    for _ in range(max_sweeps):
        start = best
        for n in range(theta.size):
            rest = s - c[:, n] * np.exp(1j * theta[n])
            cand = coarse
            for _stage in range(2):
                e = np.exp(1j * cand)
                vals = np.asarray(f(rest[0] + c[0, n] * e, rest[1] + c[1, n] * e), dtype=float)
                k = int(np.argmax(vals))
                cand_best, cand_val = cand[k], vals[k]
                cand = cand_best + fine
            if cand_val > best:
                theta[n] = np.mod(cand_best, 2 * np.pi)
                best = float(cand_val)
            s = rest + c[:, n] * np.exp(1j * theta[n])
        if best - start <= tol * max(abs(start), 1e-300):
            break
    g = snr_scale * np.abs(s) ** 2
    return theta, float(g[0]), float(g[1]), best


def amplitude_profile_ao(cascaded, w: float, theta0, max_iter: int = 200, tol: float = 1e-10):
    """Maximize ``w |s_1| + (1 - w) |s_2|`` with ``s_k = sum_n c[k, n] e^{j theta_n}``.

    Minorize-maximize: with ``psi_k = angle(s_k)`` fixed, every element is
    co-phased with ``w c_1n e^{-j psi_1} + (1 - w) c_2n e^{-j psi_2}``, which
    never decreases the objective. Sweeping ``w`` traces the Pareto boundary
    of the achievable amplitude pairs, including points a weighted sum of
    rates cannot reach.
    """
    c = np.asarray(cascaded, dtype=complex)
    theta = np.array(theta0, dtype=float)
    weights = np.array([w, 1.0 - w])
    s = c @ np.exp(1j * theta)
    val = float(weights @ np.abs(s))
    for _ in range(max_iter):
        psi = np.exp(-1j * np.angle(s))
        comb = (weights * psi) @ c
        theta = -np.angle(comb)
        s = c @ np.exp(1j * theta)
        new = float(weights @ np.abs(s))
        done = new - val <= tol * max(val, 1e-300)
        val = new
        if done:
            break
    return theta, s


@dataclass(frozen=True)
class Fig20Scenario:
    """Two-user uplink MAC with ``N`` IRS elements (free-space LoS everywhere).

    Distributed: user ``k`` has its own ``N/2``-element IRS at distance ``d``;
    that IRS is ``D_k`` from the AP. Centralized: one ``N``-element IRS at
    ``d`` from the AP; user ``k`` is ``D_k`` from it. Per-element channels are
    twins of each other under the two strategies.
    """

    N: int = 100
    d: float = 1.0
    D: tuple = (1000.0, 200.0)
    P_bar: float = 10 ** ((15 - 30) / 10)
    sigma2_bar: float = 10 ** ((-90 - 30) / 10)
    beta0: float = 1e-3
    user_angles: tuple = (math.radians(35.0), math.radians(-50.0))
    n_points: int = 101
    starts: int = 4

    def __post_init__(self):
        if self.N % 2:
            raise ValueError("N must be even for the two-IRS distributed split")
        if len(self.D) != 2 or min(self.D) <= 0 or self.d <= 0:
            raise ValueError("need two positive user distances and positive d")
        if self.starts < 4:
            raise ValueError("use at least 4 starts for the weighted sweep")


def fig20_channels(sc: Fig20Scenario):
    """Centralized per-element cascaded channels, shape ``2 x N``.

    Amplitudes follow the reference-distance law (``beta0 / (d D_k)`` per
    element); phases come from exact element distances to a far point in each
    user's direction and to the AP.
    """
    side = int(math.isqrt(sc.N))
    rows = side if side * side == sc.N else next(r for r in range(side, 0, -1) if sc.N % r == 0)
    irs = grid_positions(rows, sc.N // rows)
    ap = np.array([sc.d, 0.0, 0.0])
    ph_ap = los_from_positions(ap, irs, 1.0)[0]  # unit-modulus phases
    out = np.empty((2, sc.N), dtype=complex)
    for k in range(2):
        ang = sc.user_angles[k]
        user = sc.D[k] * np.array([math.cos(ang), math.sin(ang), 0.0])
        ph = los_from_positions(user, irs, 1.0)[0]
        out[k] = sc.beta0 / (sc.d * sc.D[k]) * ph * ph_ap
    return out


def _distributed_snrs(sc: Fig20Scenario, cascaded):
    half = sc.N // 2
    scale = sc.P_bar / sc.sigma2_bar
    # twin channels: the elements assigned to user k, coherently aligned; other IRS dropped
    g1 = scale * np.abs(cascaded[0, :half]).sum() ** 2
    g2 = scale * np.abs(cascaded[1, half:]).sum() ** 2
    return float(g1), float(g2)


@dataclass
class RegionComparison:
    regions: dict = field(default_factory=dict)  # (strategy, scheme) -> RateRegion
    snrs: dict = field(default_factory=dict)

    def contained(self, scheme: str, tol: float = 1e-6) -> bool:
        inner = self.regions[("distributed", scheme)]
        outer = self.regions[("centralized", scheme)]
        return all(outer.contains(p, tol) for p in inner.boundary)


def _start_phases(cascaded, sc: Fig20Scenario, rng):
    half = sc.N // 2
    align1 = -np.angle(cascaded[0])
    align2 = -np.angle(cascaded[1])
    split = np.concatenate([align1[:half], align2[half:]])
    starts = [align1, align2, split]
    while len(starts) < sc.starts:
        starts.append(rng.uniform(0, 2 * np.pi, sc.N))
    return starts


def centralized_weighted_boundary(cascaded, snr_scale: float, scheme: str, n_points: int = 101,
                                  starts=None, grid: int = 64):
    """Weighted-sum sweep for centralized NOMA/FDMA.

    For each weight ``mu`` the phases are optimized from every start
    (warm-started from the previous weight's solution on the same start
    track). Returns the SNR pairs found; the region is the union of the
    per-pair regions.
    """
    mus = np.linspace(0.0, 1.0, n_points)
    pairs = []
    for theta in starts:
        theta = np.array(theta, dtype=float)
        for mu in mus:
            theta, g1, g2, _ = weighted_ao(cascaded, snr_scale, mu, scheme, theta, grid=grid)
            pairs.append((g1, g2))
    return pairs


def best_weighted_values(pairs, scheme: str, mus):
    value = weighted_noma_value if scheme == "NOMA" else weighted_fdma_value
    g = np.asarray(pairs)
    return np.array([float(np.max(value(g[:, 0], g[:, 1], mu))) for mu in mus])


def deployment_region_compare(sc: Fig20Scenario = Fig20Scenario(), seed: int = 0) -> RegionComparison:
    """All six regions {centralized, distributed} x {TDMA, FDMA, NOMA}."""
    rng = make_rng(seed)
    cascaded = fig20_channels(sc)
    scale = sc.P_bar / sc.sigma2_bar
    g1d, g2d = _distributed_snrs(sc, cascaded)
    g1c = scale * np.abs(cascaded[0]).sum() ** 2
    g2c = scale * np.abs(cascaded[1]).sum() ** 2
    out = RegionComparison(snrs={"distributed": (g1d, g2d), "centralized_tdma": (float(g1c), float(g2c))})
    for scheme in SCHEMES:
        out.regions[("distributed", scheme)] = RateRegion(
            mac_region(g1d, g2d, scheme, sc.n_points).boundary, scheme, "distributed")
    out.regions[("centralized", "TDMA")] = RateRegion(
        mac_region(g1c, g2c, "TDMA", sc.n_points).boundary, "TDMA", "centralized")
    starts = _start_phases(cascaded, sc, rng)
    profile = []
    for theta in starts:
        for w in np.linspace(0.0, 1.0, sc.n_points):
            theta, s = amplitude_profile_ao(cascaded, w, theta)
            profile.append(tuple(scale * np.abs(s) ** 2))
    for scheme in ("NOMA", "FDMA"):
        pairs = centralized_weighted_boundary(cascaded, scale, scheme, sc.n_points, starts) + profile
        pairs = _prune_pairs(pairs)
        regions = [mac_region(g1, g2, scheme, sc.n_points) for g1, g2 in pairs]
        out.regions[("centralized", scheme)] = RateRegion(union_boundary(regions), scheme, "centralized")
    return out


def _prune_pairs(pairs):
    """Drop SNR pairs dominated in both coordinates (their regions are nested)."""
    g = np.unique(np.round(np.asarray(pairs), 12), axis=0)
    keep = []
    for i, (a, b) in enumerate(g):
        if not np.any((g[:, 0] >= a) & (g[:, 1] >= b) & ((g[:, 0] > a) | (g[:, 1] > b))):
            keep.append((float(a), float(b)))
    return keep


def region_table(cmp: RegionComparison) -> list[tuple]:
    rows = []
    for strategy in STRATEGIES:
        for scheme in SCHEMES:
            for r1, r2 in cmp.regions[(strategy, scheme)].boundary:
                rows.append((scheme, strategy, float(r1), float(r2)))
    return rows

