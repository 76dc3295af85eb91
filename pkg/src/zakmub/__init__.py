"""Zak-OTFS delay-Doppler link simulator with superposed unbiased bases.

Doubly-spread channels are flattened by a QR precoder with MMSE combining;
extra symbols ride a second, mutually unbiased basis and are recovered by
successive interference cancellation with turbo re-decoding, with trellis
coded modulation lifting both frames above the cross-basis interference
floor. Faster-than-Nyquist OFDM / OTFS baselines are included for matched
spectral-efficiency comparisons.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import (PROFILES, SINGLE_PATH, VEH_A, ChannelRealization, PathProfile,
                      build_time_channel, conjugate_channel, dump_channel, sample_paths)
from .grid import GridParams, as_frame
from .harness import (SCHEMES, ResultRow, SimConfig, load_config, run_sweep,
                      run_trial, verify_suite)
from .mub import BasisPair, MubReport, build_bases, verify_mub
from .precoder import (DegenerateChannelError, PrecoderSet, build_precoder, combine,
                       mmse_combiner, precode, qr_precoder)
from .rates import (DFREE_DEFAULT, DeltaBound, RatePoint, delta_bound, effective_rate,
                    qfunc, rate_point, rate_surface, sinr_frames, write_surface_csv)
from .sic import (QAM4, DetectionResult, SuperposedFrame, cancel, detect_uncoded,
                  frame2_support, frame_amplitudes, matched_filter, qam4_map,
                  sic_receive, transmit)
from .tcm import DEFAULT_CODE, TcmConfig, compute_dfree, tcm_encode, viterbi_decode
from .transforms import dzt, idzt, itf, tf, unitary_dft

__version__ = "0.1.0"
