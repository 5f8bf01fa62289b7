import itertools
import math

import numpy as np
import pytest
from conftest import preset
from hypothesis import given, settings
from hypothesis import strategies as st

from irslab.beamforming import (AoOptions, asymptotic_receive_power, cascaded_tap_matrix, discrete_refine,
                                effective_siso, element_phase, log2det, mimo_ao, mimo_capacity, miso_ao, mrt,
                                ofdm_cfr, ofdm_rate, ofdm_strongest_cir, ofdm_upper_bound, one_bit_amplitude,
                                quantization_loss, quantize_phases, quantize_reflection, rate, receive_snr,
                                required_elements, rotation_candidates, rotation_quantize, siso_align, water_fill,
                                water_filled_rate)
from irslab.channel import OfdmSpec, Reflection, complex_normal, make_rng, trial_rng
from irslab.harness.config import dbm_to_watts
from irslab.harness.experiments import ofdm_trial, run_experiment

seeds = st.integers(min_value=0, max_value=2**63 - 1)


def _cn(seed, *shape):
    return complex_normal(make_rng(seed), shape if shape else ())


# SISO --------------------------------------------------------------------
def test_siso_align_substitution():
    refl = siso_align(np.array([np.exp(-1j * np.pi / 4)]), np.array([np.exp(1j * np.pi / 4)]), 1.0)
    assert refl.phases[0] == pytest.approx(3 * np.pi / 2)
    np.testing.assert_array_equal(refl.amplitudes, [1.0])


def test_siso_align_real_positive_channels():
    refl = siso_align(np.array([1.0, 2.0, 0.5]), np.array([3.0, 1.0, 1.0]), 2.0)
    np.testing.assert_allclose(refl.phases, 0.0, atol=1e-15)


def test_siso_align_coherent_sum_beats_random_phases():
    rng = make_rng(6)
    h_r, g, h_d = complex_normal(rng, 6), complex_normal(rng, 6), complex(complex_normal(rng, ()))
    best = abs(effective_siso(h_r, g, siso_align(h_r, g, h_d), h_d))
    bound = np.sum(np.abs(h_r) * np.abs(g)) + abs(h_d)
    assert best == pytest.approx(bound, rel=1e-12)
    a = h_r.conj() * g
    for _ in range(10):  # 10^6 random phase vectors in batches
        th = rng.uniform(0, 2 * np.pi, (100_000, 6))
        assert np.max(np.abs(np.exp(1j * th) @ a + np.conj(h_d))) <= best


def test_siso_align_length_mismatch():
    with pytest.raises(ValueError):
        siso_align(np.ones(3), np.ones(4))


@given(seeds, st.integers(1, 12), st.floats(0.1, 10), st.floats(-np.pi, np.pi))
@settings(max_examples=40, deadline=None)
def test_argmax_invariance_under_common_scaling(seed, n, mag, ang):
    rng = make_rng(seed)
    h_r, g, h_d = complex_normal(rng, n), complex_normal(rng, n), complex(complex_normal(rng, ()))
    k = mag * np.exp(1j * ang)
    base = siso_align(h_r, g, h_d)
    scaled = siso_align(h_r, k * g, k * h_d)
    snr0 = receive_snr(h_d, h_r, g, base, 1.0, 1.0)
    snr1 = receive_snr(k * h_d, h_r, k * g, scaled, 1.0, 1.0)
    assert snr1 == pytest.approx(mag**2 * snr0, rel=1e-10)
    diff = np.angle(np.exp(1j * (scaled.phases - base.phases)))
    np.testing.assert_allclose(diff, diff[0], atol=1e-9)


def test_receive_snr_no_irs():
    assert receive_snr(1.0, np.zeros(0), np.zeros(0), Reflection(np.zeros(0)), 1.0, 1.0) == pytest.approx(1.0)


def test_receive_snr_coherent_identity():
    h_r, g, h_d = _cn(1, 8), _cn(2, 8), complex(_cn(3))
    snr = receive_snr(h_d, h_r, g, siso_align(h_r, g, h_d), 0.3, 0.01)
    expected = (np.sum(np.abs(h_r * g)) + abs(h_d)) ** 2 * 0.3 / 0.01
    assert snr == pytest.approx(expected, rel=1e-12)
    assert rate(snr) == pytest.approx(math.log2(1 + expected), rel=1e-12)


def test_receive_snr_rejects_bad_power():
    with pytest.raises(ValueError):
        receive_snr(1.0, np.ones(1), np.ones(1), Reflection.unit(1), 0.0, 1.0)


def test_asymptotic_power_examples():
    assert asymptotic_receive_power(4, 1, 1, 1) == pytest.approx(np.pi**2)
    assert asymptotic_receive_power(20, 1, 2, 3) == pytest.approx(4 * asymptotic_receive_power(10, 1, 2, 3))


def test_asymptotic_power_monte_carlo():
    n, trials = 1000, 1000
    rng = make_rng(23)
    vals = [np.sum(np.abs(complex_normal(rng, n)) * np.abs(complex_normal(rng, n))) ** 2 for _ in range(trials)]
    ratio = np.mean(vals) / n**2
    assert ratio == pytest.approx(np.pi**2 / 16, rel=0.02)


def test_required_elements():
    assert required_elements(1.0, 2.0, 3.3) == 4
    a = required_elements(10.0, 2.0, 1.7)
    b = required_elements(40.0, 2.0, 1.7)
    assert 10 * 1.7 <= a < 10 * 1.7 + 1 and 40 * 1.7 <= b < 40 * 1.7 + 1
    ns = [required_elements(d, 2.0, 1.0) for d in (10, 20, 30)]
    assert ns == [10, 20, 30]  # linear growth for a = 2


# MRT ---------------------------------------------------------------------
def test_mrt_examples():
    h = np.array([1, 1j])
    w = mrt(h, 4.0)
    assert abs(np.vdot(h, w)) ** 2 == pytest.approx(8.0)
    assert np.linalg.norm(w) ** 2 == pytest.approx(4.0)


def test_mrt_beats_random_directions():
    rng = make_rng(8)
    h = complex_normal(rng, 8)
    best = abs(np.vdot(h, mrt(h, 2.0))) ** 2
    w = complex_normal(rng, (100_000, 8))
    w *= math.sqrt(2.0) / np.linalg.norm(w, axis=1, keepdims=True)
    assert np.max(np.abs(w @ h.conj()) ** 2) <= best


def test_mrt_zero_channel():
    with pytest.raises(ValueError):
        mrt(np.zeros(3), 1.0)


# MISO AO -----------------------------------------------------------------
def test_miso_single_antenna_matches_siso():
    h_r, g, h_d = _cn(1, 10), _cn(2, 10), complex(_cn(3))
    sol = miso_ao(g[:, None], h_r, np.array([h_d]), 1.0, 1.0)
    expected = (np.sum(np.abs(h_r * g)) + abs(h_d)) ** 2
    assert len(sol.objective_trace) <= 3  # converges in one sweep
    assert sol.objective == pytest.approx(expected, rel=1e-10)


@given(seeds, st.integers(1, 16), st.integers(1, 6), st.sampled_from(["siso-align", "zero-phase", "random"]))
@settings(max_examples=40, deadline=None)
def test_miso_ao_monotone_and_feasible(seed, n, m_t, policy):
    rng = make_rng(seed)
    G, h_r, h_d = complex_normal(rng, (n, m_t)), complex_normal(rng, n), complex_normal(rng, m_t)
    sol = miso_ao(G, h_r, h_d, 2.0, 1.0, AoOptions(init_policy=policy, init_seed=1))
    t = np.array(sol.objective_trace)
    assert np.all(np.diff(t) >= -1e-12 * t[:-1])
    assert np.linalg.norm(sol.transmit) ** 2 <= 2.0 * (1 + 1e-12)
    assert sol.objective == pytest.approx(
        abs((h_r.conj() * sol.reflection.coefficients) @ G @ sol.transmit + np.vdot(h_d, sol.transmit)) ** 2,
        rel=1e-9)


def test_miso_dimension_errors():
    with pytest.raises(ValueError):
        miso_ao(np.ones((3, 2)), np.ones(4), np.ones(2), 1.0, 1.0)
    with pytest.raises(ValueError):
        miso_ao(np.ones((3, 2)), np.ones(3), np.ones(3), 1.0, 1.0)
    with pytest.raises(ValueError):
        miso_ao(np.ones((3, 2)), np.ones(3), np.ones(2), -1.0, 1.0)


def test_fig9_ao_dominates_baselines():
    res = run_experiment("fig9", preset("fig9", trials=50))
    for d, ao, user, irs, none in res.rows:
        assert ao >= max(user, irs, none) - 1e-9, d


# MIMO --------------------------------------------------------------------
def test_mimo_without_irs_is_water_filling_capacity():
    H = _cn(4, 3, 2)
    sol = mimo_ao(H, np.zeros((0, 2)), np.zeros((3, 0)), 5.0, 0.5)
    s = np.linalg.svd(H, compute_uv=False) ** 2
    p = water_fill(s, 5.0, 0.5)
    assert sol.rate == pytest.approx(np.sum(np.log2(1 + p * s / 0.5)), rel=1e-9)


def test_mimo_scalar_matches_siso():
    h_r, g, h_d = _cn(1, 12), _cn(2, 12), complex(_cn(3))
    sol = mimo_ao(np.array([[np.conj(h_d)]]), g[:, None], h_r.conj()[None, :], 2.0, 0.5)
    expected = math.log2(1 + 2.0 * (np.sum(np.abs(h_r * g)) + abs(h_d)) ** 2 / 0.5)
    assert sol.rate == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_element_phase_matches_grid_oracle(seed):
    rng = make_rng(seed)
    rest, r, t = complex_normal(rng, (3, 4)), complex_normal(rng, 3), complex_normal(rng, 4)
    A = complex_normal(rng, (4, 4))
    Q = A @ A.conj().T
    th = element_phase(rest, r, t, Q, 0.7)
    grid = np.linspace(0, 2 * np.pi, 20001)
    vals = [log2det(rest + np.exp(1j * x) * np.outer(r, t), Q, 0.7) for x in grid]
    assert log2det(rest + np.exp(1j * th) * np.outer(r, t), Q, 0.7) >= max(vals) - 1e-9


@given(seeds, st.sampled_from(["closed-form", "grid"]), st.sampled_from(["siso-align", "zero-phase", "random"]))
@settings(max_examples=20, deadline=None)
def test_mimo_ao_monotone_and_feasible(seed, update, policy):
    rng = make_rng(seed)
    H_d, G, H_r = complex_normal(rng, (2, 3)), complex_normal(rng, (6, 3)), complex_normal(rng, (2, 6))
    opts = AoOptions(max_sweeps=10, phase_update=update, init_policy=policy, init_seed=3)
    sol = mimo_ao(H_d, G, H_r, 4.0, 1.0, opts)
    t = np.array(sol.objective_trace)
    assert np.all(np.diff(t) >= -1e-12 * np.abs(t[:-1]))
    Q = sol.transmit
    assert np.trace(Q).real <= 4.0 * (1 + 1e-8)
    assert np.min(np.linalg.eigvalsh((Q + Q.conj().T) / 2)) >= -1e-10


def test_mimo_grid_and_closed_form_agree_closely():
    H_d, G, H_r = _cn(1, 2, 2), _cn(2, 8, 2), _cn(3, 2, 8)
    a = mimo_ao(H_d, G, H_r, 4.0, 1.0, AoOptions(phase_update="closed-form")).rate
    b = mimo_ao(H_d, G, H_r, 4.0, 1.0, AoOptions(phase_update="grid", max_sweeps=30)).rate
    assert a == pytest.approx(b, rel=0.02)


def test_mimo_dimension_error():
    with pytest.raises(ValueError):
        mimo_ao(np.ones((2, 2)), np.ones((3, 2)), np.ones((2, 4)), 1.0, 1.0)


# water-filling -----------------------------------------------------------
def test_water_fill_symmetric():
    np.testing.assert_allclose(water_fill([1, 1], 2.0, [1, 1]), [1, 1], rtol=1e-8)


def test_water_fill_dominant_mode():
    p = water_fill([1, 1e-9], 0.01)
    assert p[1] == 0 and p[0] == pytest.approx(0.01, rel=1e-8)


def test_water_fill_optimal_against_random_allocations():
    rng = make_rng(12)
    g, n = rng.uniform(0.05, 5, 8), rng.uniform(0.5, 2, 8)
    p = water_fill(g, 3.0, n)
    assert p.sum() == pytest.approx(3.0, abs=1e-9 * 3.0)
    best = np.sum(np.log2(1 + g * p / n))
    rand = rng.dirichlet(np.ones(8), 100_000) * 3.0
    assert np.max(np.sum(np.log2(1 + g * rand / n), axis=1)) <= best + 1e-12


@given(seeds, st.integers(1, 12), st.floats(1e-3, 1e3))
@settings(max_examples=60, deadline=None)
def test_water_fill_kkt(seed, m, P):
    rng = make_rng(seed)
    g, n = rng.uniform(1e-3, 10, m), rng.uniform(0.1, 3, m)
    p = water_fill(g, P, n)
    assert abs(p.sum() - P) <= 1e-9 * P
    levels = p + n / g
    active = p > 0
    mu = levels[active].mean()
    assert np.all(np.abs(levels[active] - mu) <= 1e-8 * max(1.0, mu))
    assert np.all(n[~active] / g[~active] >= mu - 1e-8 * max(1.0, mu))


def test_water_fill_rejects_zero_gains():
    with pytest.raises(ValueError):
        water_fill([0, 0], 1.0)


# discrete control --------------------------------------------------------
def test_quantize_examples():
    assert quantize_phases([np.pi], 1)[0] == pytest.approx(np.pi)
    eps = 1e-9
    assert quantize_phases([np.pi / 2 - eps], 1)[0] == 0
    assert quantize_phases([np.pi / 2 + eps], 1)[0] == pytest.approx(np.pi)
    assert quantize_phases([np.pi / 2], 1)[0] == 0  # exact midpoint goes down


def test_quantize_error_bound():
    th = make_rng(3).uniform(-10, 10, 100_000)
    q = quantize_phases(th, 3)
    err = np.abs(np.angle(np.exp(1j * (th - q))))
    assert np.max(err) <= np.pi / 8 + 1e-12
    levels = np.arange(8) * np.pi / 4
    nearest = levels[np.argmin(np.abs(np.angle(np.exp(1j * (th[:, None] - levels[None])))), axis=1)]
    np.testing.assert_allclose(np.exp(1j * q), np.exp(1j * nearest), atol=1e-12)


def test_quantize_reflection_records_bits():
    r = quantize_reflection(Reflection(np.array([0.3, 2.0])), 2)
    assert r.phase_bits == 2


def test_quantization_loss_values():
    assert quantization_loss(1) == pytest.approx(4 / np.pi**2, abs=1e-12)
    assert quantization_loss(1) == pytest.approx(0.4053, abs=1e-4)
    assert 10 * np.log10(quantization_loss(1)) == pytest.approx(-3.92, abs=0.01)
    assert quantization_loss(2) == pytest.approx(0.8106, abs=1e-4)
    assert 10 * np.log10(quantization_loss(2)) == pytest.approx(-0.91, abs=0.01)
    assert quantization_loss(20) == pytest.approx(1.0, abs=1e-10)


def test_one_bit_amplitude_rule():
    assert np.all(one_bit_amplitude(np.array([1.0, 2.0]), np.array([3.0, 1.0])).amplitudes == 1)
    h_r, g = _cn(1, 12), _cn(2, 12)
    refl = one_bit_amplitude(h_r, g)
    for n in range(12):
        on = -np.pi / 2 <= np.angle(np.conj(h_r[n]) * g[n]) <= np.pi / 2
        assert refl.amplitudes[n] == float(on)
    np.testing.assert_array_equal(refl.phases, 0.0)


def test_one_bit_phase_beats_one_bit_amplitude_at_512():
    rng = make_rng(9)
    ph, amp = [], []
    for _ in range(100):
        h_r, g = complex_normal(rng, 512), complex_normal(rng, 512)
        q = quantize_reflection(siso_align(h_r, g), 1)
        ph.append(abs(effective_siso(h_r, g, q)) ** 2)
        amp.append(abs(effective_siso(h_r, g, one_bit_amplitude(h_r, g))) ** 2)
    assert np.mean(ph) > np.mean(amp)


@pytest.mark.parametrize("bits", [1, 2])
def test_quantize_then_evaluate_power_law(bits):
    rng = make_rng(10 + bits)
    cont, quant = [], []
    for _ in range(100):
        h_r, g = complex_normal(rng, 512), complex_normal(rng, 512)
        r = siso_align(h_r, g)
        cont.append(abs(effective_siso(h_r, g, r)) ** 2)
        quant.append(abs(effective_siso(h_r, g, quantize_reflection(r, bits))) ** 2)
    assert np.mean(quant) >= quantization_loss(bits) * np.mean(cont) * 0.95


def test_rotation_candidates_include_plain_rounding():
    th = make_rng(2).uniform(0, 2 * np.pi, 7)
    cands = rotation_candidates(th, 2)
    assert len(cands) == (7 + 1) * 4
    assert any(np.allclose(c, quantize_phases(th, 2)) for c in cands)


@pytest.mark.parametrize("seed", range(6))
def test_rotation_quantize_exact_for_single_antenna(seed):
    rng = make_rng(seed)
    n, bits = 5, 2
    h_r, g, h_d = complex_normal(rng, n), complex_normal(rng, n), 0.2 * complex(complex_normal(rng, ()))

    def obj(c):
        return abs(np.sum(h_r.conj() * c * g) + np.conj(h_d)) ** 2

    got = obj(rotation_quantize(obj, siso_align(h_r, g, h_d), bits).coefficients)
    levels = np.exp(2j * np.pi * np.arange(4) / 4)
    exhaustive = max(obj(np.array(p)) for p in itertools.product(levels, repeat=n))
    assert got == pytest.approx(exhaustive, rel=1e-12)


def test_discrete_refine_never_worse():
    h_r, g = _cn(4, 8), _cn(5, 8)

    def obj(c):
        return abs(np.sum(h_r.conj() * c * g)) ** 2

    start = quantize_reflection(Reflection(make_rng(1).uniform(0, 2 * np.pi, 8)), 1)
    assert obj(discrete_refine(obj, start, 1).coefficients) >= obj(start.coefficients)


# OFDM --------------------------------------------------------------------
def _ofdm_instance(seed, n=4, l1=2, l2=3, l0=4):
    rng = make_rng(seed)
    return complex_normal(rng, l0), cascaded_tap_matrix(complex_normal(rng, (n, l1)), complex_normal(rng, (n, l2)))


def test_strongest_cir_single_tap_is_siso_align():
    h_r, g, h_d = _cn(1, 6), _cn(2, 6), complex(_cn(3))
    cascaded = (h_r.conj() * g)[:, None]
    a = ofdm_strongest_cir(cascaded, np.array([np.conj(h_d)]))
    b = siso_align(h_r, g, h_d)
    np.testing.assert_allclose(np.exp(1j * a.phases), np.exp(1j * b.phases), atol=1e-12)


def test_strongest_cir_picks_dominant_tap():
    cascaded = np.array([[0.1, 2.0], [0.2j, -1.5]])
    refl = ofdm_strongest_cir(cascaded, np.array([0.0, 0.0]))
    aligned = refl.coefficients @ cascaded
    assert abs(aligned[1]) == pytest.approx(3.5)


def test_strongest_cir_tie_goes_to_smallest_delay():
    cascaded = np.array([[1.0, 1j]])
    refl = ofdm_strongest_cir(cascaded, np.array([0.0, 0.0]))
    assert refl.phases[0] == pytest.approx(0.0)


def test_strongest_cir_empty():
    with pytest.raises(ValueError):
        ofdm_strongest_cir(np.zeros((0, 2)), np.zeros(2))


def test_ofdm_rate_flat_reduces_to_single_carrier():
    spec = OfdmSpec(16, 4)
    h_r, g, h_d = _cn(1, 5), _cn(2, 5), complex(_cn(3))
    cascaded = (h_r.conj() * g)[:, None]
    refl = siso_align(h_r, g, h_d)
    r = ofdm_rate(refl, np.full(16, 0.5), np.array([np.conj(h_d)]), cascaded, spec, 0.1)
    assert r == pytest.approx(math.log2(1 + receive_snr(h_d, h_r, g, refl, 0.5, 0.1)), rel=1e-12)
    assert ofdm_rate(refl, np.zeros(16), np.array([np.conj(h_d)]), cascaded, spec, 0.1) == 0.0


def test_ofdm_rate_manual_summation():
    spec = OfdmSpec(8, 8)
    hd, casc = _ofdm_instance(3)
    refl = Reflection(make_rng(1).uniform(0, 2 * np.pi, 4))
    p = make_rng(2).uniform(0, 1, 8)
    cir = np.pad(hd, (0, 0)) + refl.coefficients @ casc
    manual = 0.0
    for q in range(8):
        c = sum(cir[l] * np.exp(-2j * np.pi * q * l / 8) for l in range(cir.size))
        manual += math.log2(1 + p[q] * abs(c) ** 2 / 0.3) / 8
    assert ofdm_rate(refl, p, hd, casc, spec, 0.3) == pytest.approx(manual, rel=1e-12)


def test_ofdm_rate_validation():
    spec = OfdmSpec(8, 8)
    hd, casc = _ofdm_instance(3)
    refl = Reflection.unit(4)
    with pytest.raises(ValueError):
        ofdm_rate(refl, np.ones(7), hd, casc, spec, 1.0)
    with pytest.raises(ValueError):
        ofdm_rate(refl, -np.ones(8), hd, casc, spec, 1.0)
    with pytest.raises(ValueError):
        ofdm_rate(refl, np.ones(8), hd, casc, spec, 1.0, P_t=1.0)


def test_upper_bound_tight_for_flat_channels():
    spec = OfdmSpec(16, 4)
    h_r, g, h_d = _cn(1, 5), _cn(2, 5), complex(_cn(3))
    cascaded = (h_r.conj() * g)[:, None]
    direct = np.array([np.conj(h_d)])
    cir = water_filled_rate(ofdm_cfr(ofdm_strongest_cir(cascaded, direct), direct, cascaded, spec), 1.0, 0.1)
    assert ofdm_upper_bound(direct, cascaded, spec, 1.0, 0.1) == pytest.approx(cir, rel=1e-9)


def test_upper_bound_matches_per_subcarrier_grid():
    spec = OfdmSpec(8, 8)
    rng = make_rng(5)
    direct, cascaded = complex_normal(rng, 2), complex_normal(rng, (1, 2))
    grid = np.exp(1j * np.arange(720) * 2 * np.pi / 720)
    d = np.fft.fft(direct, 8)
    f = np.fft.fft(cascaded[0], 8)
    best_gain = np.max(np.abs(d[:, None] + grid[None, :] * f[:, None]) ** 2, axis=1)
    oracle = water_filled_rate(np.sqrt(best_gain), 1.0, 0.2)
    bound = ofdm_upper_bound(direct, cascaded, spec, 1.0, 0.2)
    assert bound >= oracle - 1e-12
    assert bound == pytest.approx(oracle, rel=1e-4)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_upper_bound_dominates_any_reflection(seed):
    spec = OfdmSpec(16, 8)
    hd, casc = _ofdm_instance(seed)
    bound = ofdm_upper_bound(hd, casc, spec, 1.0, 0.5)
    rng = make_rng(seed + 1)
    for _ in range(5):
        refl = Reflection(rng.uniform(0, 2 * np.pi, 4))
        assert water_filled_rate(ofdm_cfr(refl, hd, casc, spec), 1.0, 0.5) <= bound + 1e-12
    assert water_filled_rate(ofdm_cfr(ofdm_strongest_cir(casc, hd), hd, casc, spec), 1.0, 0.5) <= bound + 1e-12


@pytest.mark.xfail(strict=True, reason="strongest-CIR trails a single random reflection on a few low-power seeds; "
                                        "see decisions ledger")
def test_fig10_strongest_cir_beats_random_on_every_seed():
    sc = preset("fig10")
    for p_dbm in sc.sweep:
        for t in range(50):
            _, cir, rnd, _ = ofdm_trial(sc, dbm_to_watts(p_dbm), trial_rng(sc.seed, t))
            assert cir >= rnd, (p_dbm, t)


def test_mimo_capacity_helper():
    H = _cn(3, 2, 2)
    r, Q = mimo_capacity(H, 1.0, 1.0)
    assert r == pytest.approx(log2det(H, Q, 1.0))


# options -----------------------------------------------------------------
@pytest.mark.parametrize("kw", [{"tol": 0}, {"phase_grid": 4}, {"max_sweeps": 0}, {"init_policy": "magic"},
                                {"phase_update": "newton"}, {"init_policy": "random"}])
def test_ao_options_validation(kw):
    with pytest.raises(ValueError):
        AoOptions(**kw)
