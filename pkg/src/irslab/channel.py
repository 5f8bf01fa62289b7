"""Channel synthesis and composition for IRS-aided links.

Narrow-band channels are complex matrices whose average entry power follows a
reference-distance path-loss law ``c0 * d**(-a)`` (reference distance 1 m).
Broadband channels are tap sequences; the reflected path through one element
is the convolution of the two hops scaled by the reflection coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WAVELENGTH = 0.15  # carrier wavelength in metres (2 GHz)
ELEMENT_SPACING = 0.5  # in wavelengths

FADING_KINDS = ("los", "rayleigh", "rician")
CHANNEL_ROLES = ("direct", "ap-irs", "irs-user")


# --------------------------------------------------------------------------
# Random streams
# --------------------------------------------------------------------------
def make_rng(seed=None) -> np.random.Generator:
    """Return a PCG64 generator; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def trial_rng(base_seed: int, trial: int, *stream: int) -> np.random.Generator:
    """Independent generator for one Monte-Carlo trial.

    The stream is keyed on ``(base_seed, trial, *stream)`` through numpy's
    ``SeedSequence`` spawn keys, so the draws of a trial never depend on which
    other trials ran before it or in which order.
    """
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(trial), *map(int, stream)))
    return np.random.Generator(np.random.PCG64(ss))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


# --------------------------------------------------------------------------
# Path loss
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class PathLossSpec:
    """Linear gain ``c0`` at 1 m and path-loss exponent ``exponent``."""

    c0: float
    exponent: float

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")
        if not self.exponent >= 0:
            raise ValueError(f"path-loss exponent must be non-negative, got {self.exponent}")


def path_loss(spec: PathLossSpec, distance: float) -> float:
    """Average power gain ``c0 * distance**(-a)`` of a single hop."""
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance}")
    return spec.c0 * float(distance) ** (-spec.exponent)


def product_path_gain(spec1: PathLossSpec, d1: float, spec2: PathLossSpec, d2: float) -> float:
    """End-to-end gain of a reflected path per element (product-distance law)."""
    return path_loss(spec1, d1) * path_loss(spec2, d2)


def sum_distance_gain(spec: PathLossSpec, d1: float, d2: float) -> float:
    """Specular-reflection gain ``c0 (d1 + d2)**(-a)``.

    Only valid for an infinitely large perfect conductor. Kept for
    comparison with :func:`product_path_gain`; link composition never uses it.
    """
    return path_loss(spec, d1 + d2)


# --------------------------------------------------------------------------
# Domain values
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class FadingSpec:
    """Small-scale fading model of one link.

    ``aoa``/``aod`` are the arrival/departure angles (radians) of the LoS
    component at the receiving (rows) and transmitting (cols) uniform linear
    arrays. They only matter for ``los`` and ``rician``.
    """

    kind: str
    path_loss: PathLossSpec
    distance: float
    rician_k: float = 0.0
    aoa: float = 0.0
    aod: float = 0.0

    def __post_init__(self):
        if self.kind not in FADING_KINDS:
            raise ValueError(f"unknown fading kind {self.kind!r}; expected one of {FADING_KINDS}")
        if not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        if self.rician_k < 0:
            raise ValueError(f"rician_k must be non-negative, got {self.rician_k}")

    @property
    def entry_power(self) -> float:
        return path_loss(self.path_loss, self.distance)


@dataclass(frozen=True)
class FlatChannel:
    entries: np.ndarray
    role: str = "direct"

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.entries, dtype=complex))
        if not np.all(np.isfinite(arr)):
            raise ValueError("channel entries must be finite")
        if self.role not in CHANNEL_ROLES:
            raise ValueError(f"unknown channel role {self.role!r}")
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class Reflection:
    """Per-element reflection: phases in [0, 2pi) and amplitudes in [0, 1].

    ``phase_bits``/``amplitude_bits`` record a discrete constraint; when set,
    every phase is a multiple of ``2pi / 2**phase_bits`` and every amplitude a
    multiple of ``1 / (2**amplitude_bits - 1)``.
    """

    phases: np.ndarray
    amplitudes: np.ndarray = None
    phase_bits: int | None = None
    amplitude_bits: int | None = None

    def __post_init__(self):
        phases = np.mod(np.asarray(self.phases, dtype=float).ravel(), 2 * np.pi)
        # mod can return exactly 2pi for tiny negative inputs
        phases[phases >= 2 * np.pi] = 0.0
        if self.amplitudes is None:
            amps = np.ones_like(phases)
        else:
            amps = np.asarray(self.amplitudes, dtype=float).ravel()
        if amps.shape != phases.shape:
            raise ValueError("phases and amplitudes must have the same length")
        if np.any(amps < 0) or np.any(amps > 1):
            raise ValueError("reflection amplitudes must lie in [0, 1]")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "amplitudes", amps)
        if self.phase_bits is not None:
            step = 2 * np.pi / 2**self.phase_bits
            k = phases / step
            if not np.allclose(k, np.round(k), atol=1e-9):
                raise ValueError(f"phases are not on the {self.phase_bits}-bit grid")
        if self.amplitude_bits is not None:
            levels = 2**self.amplitude_bits - 1
            if not np.allclose(amps * levels, np.round(amps * levels), atol=1e-9):
                raise ValueError(f"amplitudes are not on the {self.amplitude_bits}-bit grid")

    def __len__(self):
        return self.phases.size

    @property
    def coefficients(self) -> np.ndarray:
        """Complex reflection coefficients ``beta_n * exp(j theta_n)``."""
        return self.amplitudes * np.exp(1j * self.phases)

    @classmethod
    def unit(cls, n: int) -> "Reflection":
        return cls(np.zeros(n))

    @classmethod
    def from_coefficients(cls, coeffs) -> "Reflection":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(np.angle(coeffs), np.minimum(np.abs(coeffs), 1.0))


@dataclass(frozen=True)
class TapChannel:
    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex).ravel()
        if taps.size < 1:
            raise ValueError("a tap channel needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise ValueError("taps must be finite")
        object.__setattr__(self, "taps", taps)

    @property
    def length(self) -> int:
        return self.taps.size

    def __array__(self, dtype=None, copy=None):
        return self.taps if dtype is None else self.taps.astype(dtype)


@dataclass(frozen=True)
class OfdmSpec:
    num_subcarriers: int
    cp_length: int = field(default=None)

    def __post_init__(self):
        if self.num_subcarriers < 1:
            raise ValueError("num_subcarriers must be >= 1")
        if self.cp_length is None:
            object.__setattr__(self, "cp_length", self.num_subcarriers)
        if self.cp_length < 0:
            raise ValueError("cp_length must be non-negative")


# --------------------------------------------------------------------------
# Channel generation
# --------------------------------------------------------------------------
def ula_response(n: int, angle: float, spacing: float = ELEMENT_SPACING) -> np.ndarray:
    """Unit-modulus far-field response of an ``n``-element uniform linear array."""
    return np.exp(1j * 2 * np.pi * spacing * np.arange(n) * np.sin(angle))


def los_component(rows: int, cols: int, aoa: float = 0.0, aod: float = 0.0) -> np.ndarray:
    """Rank-one unit-modulus LoS matrix ``a_rx(aoa) a_tx(aod)^H``."""
    return np.outer(ula_response(rows, aoa), ula_response(cols, aod).conj())


def grid_positions(n_rows: int, n_cols: int, spacing: float = ELEMENT_SPACING * WAVELENGTH,
                   origin=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Element coordinates of a planar array in the y-z plane, shape (n_rows*n_cols, 3)."""
    iy, iz = np.meshgrid(np.arange(n_cols), np.arange(n_rows))
    pos = np.zeros((n_rows * n_cols, 3))
    pos[:, 1] = iy.ravel() * spacing
    pos[:, 2] = iz.ravel() * spacing
    return pos + np.asarray(origin, dtype=float)


def los_from_positions(rx_pos, tx_pos, gain: float) -> np.ndarray:
    """Deterministic LoS channel between point sets.

    Entry (i, j) is ``sqrt(gain) * exp(-j 2pi d_ij / lambda)`` with ``d_ij``
    the exact element-to-element distance, so different node locations give
    different per-element phase profiles.
    """
    rx_pos = np.atleast_2d(rx_pos)
    tx_pos = np.atleast_2d(tx_pos)
    dist = np.linalg.norm(rx_pos[:, None, :] - tx_pos[None, :, :], axis=-1)
    return np.sqrt(gain) * np.exp(-2j * np.pi * dist / WAVELENGTH)


def _fading_matrix(spec: FadingSpec, rows: int, cols: int, rng) -> np.ndarray:
    if spec.kind == "los":
        return los_component(rows, cols, spec.aoa, spec.aod)
    nlos = complex_normal(rng, (rows, cols))
    if spec.kind == "rayleigh":
        return nlos
    k = spec.rician_k
    return np.sqrt(k / (k + 1)) * los_component(rows, cols, spec.aoa, spec.aod) + np.sqrt(1 / (k + 1)) * nlos


def gen_flat_channel(spec: FadingSpec, rows: int, cols: int, seed=None, role: str = "direct") -> FlatChannel:
    """Draw one narrow-band channel realization.

    Rician fading is ``sqrt(PL) (sqrt(k/(k+1)) H_los + sqrt(1/(k+1)) H_nlos)``;
    ``k = 0`` consumes the random stream exactly like Rayleigh.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    rng = make_rng(seed)
    entries = np.sqrt(spec.entry_power) * _fading_matrix(spec, rows, cols, rng)
    return FlatChannel(entries, role)


def gen_tap_channels(spec: FadingSpec, n_taps: int, count: int = 1, seed=None) -> np.ndarray:
    """Multi-path channels with a uniform power-delay profile.

    Returns an array of shape ``(count, n_taps)`` whose total power per row
    averages to the path loss. For Rician fading the LoS component sits in
    tap 0 and varies across rows as a ULA response (``aoa``).
    """
    if n_taps < 1 or count < 1:
        raise ValueError("n_taps and count must be >= 1")
    rng = make_rng(seed)
    pl = spec.entry_power
    nlos = complex_normal(rng, (count, n_taps)) if spec.kind != "los" else None
    los = np.zeros((count, n_taps), dtype=complex)
    los[:, 0] = ula_response(count, spec.aoa) * np.sqrt(n_taps)
    if spec.kind == "los":
        h = los
    elif spec.kind == "rayleigh":
        h = nlos
    else:
        k = spec.rician_k
        h = np.sqrt(k / (k + 1)) * los + np.sqrt(1 / (k + 1)) * nlos
    return np.sqrt(pl / n_taps) * h


# --------------------------------------------------------------------------
# Composition
# --------------------------------------------------------------------------
def cascade_flat(h_r, g, refl: Reflection, h_d=0.0) -> np.ndarray:
    """Effective channel through the direct link and the IRS.

    With a 1-D ``h_r`` (single-antenna receiver) the SISO/MISO form
    ``h_r^H diag(c) g + h_d^H`` is returned, where ``g`` is a length-N vector
    or an ``N x M_t`` matrix and ``h_d`` a scalar or length-``M_t`` vector.
    With a 2-D ``h_r`` of shape ``M_r x N`` the MIMO form
    ``H_d + H_r diag(c) G`` is returned.
    """
    coeffs = refl.coefficients if isinstance(refl, Reflection) else np.asarray(refl, dtype=complex)
    h_r = np.asarray(h_r, dtype=complex)
    g = np.asarray(g, dtype=complex)
    h_d = np.asarray(h_d, dtype=complex)
    n = coeffs.size
    if h_r.ndim == 1:
        if h_r.size != n or g.shape[0] != n:
            raise ValueError(f"IRS dimension mismatch: refl {n}, h_r {h_r.shape}, g {g.shape}")
        eff = (h_r.conj() * coeffs) @ g
        direct = h_d.conj()
    else:
        h_r = np.atleast_2d(h_r)
        g = g.reshape(n, -1) if g.ndim == 1 else g
        if h_r.shape[1] != n or g.shape[0] != n:
            raise ValueError(f"IRS dimension mismatch: refl {n}, H_r {h_r.shape}, G {g.shape}")
        eff = (h_r * coeffs) @ g
        direct = h_d
    try:
        return eff + direct
    except ValueError as exc:
        raise ValueError(f"direct channel shape {h_d.shape} does not match {eff.shape}") from exc


def cascade_taps(h_r1, h_r2, coeff: complex = 1.0) -> TapChannel:
    """Cascaded multi-path channel ``coeff * (h_r2 * h_r1)`` (linear convolution)."""
    if abs(coeff) > 1 + 1e-12:
        raise ValueError(f"passivity violated: |coeff| = {abs(coeff)} > 1")
    a = np.asarray(h_r1, dtype=complex).ravel()
    b = np.asarray(h_r2, dtype=complex).ravel()
    return TapChannel(coeff * np.convolve(b, a))


def cfr_from_taps(effective_taps, ofdm: OfdmSpec) -> np.ndarray:
    """Per-subcarrier frequency response ``c_q = f_q^H h`` (unnormalized DFT)."""
    taps = np.asarray(effective_taps, dtype=complex).ravel()
    q = ofdm.num_subcarriers
    if taps.size > q:
        raise ValueError(f"{taps.size} taps exceed {q} subcarriers")
    if taps.size > ofdm.cp_length and np.any(taps[ofdm.cp_length:] != 0):
        raise ValueError(f"delay spread {taps.size} exceeds cyclic prefix {ofdm.cp_length}")
    return np.fft.fft(taps, n=q)
