from .discrete import (discrete_refine, one_bit_amplitude, quantization_loss, quantize_phases,
                       quantize_reflection, rotation_candidates, rotation_quantize)
from .mimo import (element_phase, eigenmode_covariance, golden_section_max, log2det, mimo_ao, mimo_capacity,
                   mimo_channel, water_fill)
from .narrowband import (asymptotic_receive_power, coverage_constant, effective_siso, miso_ao,
                         miso_received_power, mrt, rate, receive_snr, required_elements, siso_align)
from .ofdm import (cascaded_tap_matrix, effective_cir, ofdm_cfr, ofdm_rate, ofdm_strongest_cir,
                   ofdm_upper_bound, water_filled_rate)
from .solution import AoOptions, BeamformingSolution

__all__ = [
    "AoOptions", "BeamformingSolution", "element_phase", "asymptotic_receive_power", "cascaded_tap_matrix",
    "coverage_constant", "discrete_refine", "effective_cir", "effective_siso", "eigenmode_covariance",
    "golden_section_max", "log2det", "mimo_ao", "mimo_capacity", "mimo_channel", "miso_ao",
    "miso_received_power", "mrt", "ofdm_cfr", "ofdm_rate", "ofdm_strongest_cir", "ofdm_upper_bound",
    "one_bit_amplitude", "quantization_loss", "quantize_phases", "quantize_reflection", "rate",
    "receive_snr", "required_elements", "rotation_candidates", "rotation_quantize", "siso_align", "water_fill", "water_filled_rate",
]
