"""Zero-frequency filter pipelines and their analytic characterization.

Three related methods share one recursion, a double pole near 0 Hz:

    y[n] = 2r * y[n-1] - r^2 * y[n-2] + x[n]

* zfr: two cascaded double-pole sections at radius r < 1, run causally.
  Stable, but the pole pair bends the phase response, so detected
  epochs land with a systematic shift.
* zff: the same cascade with r = 1. The poles sit on the unit circle,
  the output grows like n^3, and a running-mean detrender recovers the
  oscillation around zero. Linear phase.
* zpzfr: the radius-r double-pole section applied forward and backward
  over the whole buffer, squaring the magnitude and cancelling the
  phase exactly. Non-causal, zero phase.

All pipelines optionally first-difference the input (pre-emphasis),
then filter, then detrend, then trim the edge anomaly. Each stage
returns a new SampledSignal whose start_time_s keeps epoch times in
original-recording coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .core import (
    BadConfig,
    BadMethod,
    BadRadius,
    FilterConfig,
    OmegaOutOfRange,
    SampledSignal,
    TooShort,
    TrimTooLarge,
    WindowTooLarge,
    validate_signal,
)

# The zff recursion is run in segments on long signals: its output grows
# as n^3, and past roughly a minute of audio the trend magnitude starts
# eating double precision. Each segment is padded on both sides; the
# truncated-history transient of the r=1 recursion is a cubic polynomial,
# which two symmetric detrend passes annihilate exactly at points more
# than 2N samples inside the padding.
SEGMENT_THRESHOLD_S = 60.0
SEGMENT_LENGTH_S = 10.0

_TAIL_EPS = 1e-15


@dataclass(frozen=True)
class FrequencyResponse:
    """Analytic filter response sampled on a frequency grid (rad/sample)."""

    omega_rad: np.ndarray
    magnitude: np.ndarray
    phase_rad: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega_rad, dtype=np.float64)
        mag = np.asarray(self.magnitude, dtype=np.float64)
        phase = np.asarray(self.phase_rad, dtype=np.float64)
        if not (omega.shape == mag.shape == phase.shape):
            raise ValueError("omega, magnitude, phase must have equal length")
        for arr, name in ((omega, "omega_rad"), (mag, "magnitude"), (phase, "phase_rad")):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class PoleReport:
    """Pole locations and the stability/causality/phase classification."""

    poles: tuple[tuple[complex, int], ...]
    stable: bool
    causal: bool
    phase_class: str  # "linear" | "nonlinear" | "zero"

    def describe(self) -> str:
        causal = "Causal" if self.causal else "Non-causal"
        phase = {
            "linear": "Linear",
            "nonlinear": "Non-linear",
            "zero": "Linear (Zero Phase)",
        }[self.phase_class]
        stable = "Stable" if self.stable else "Unstable"
        return f"{causal} & {phase} & {stable}"


def differentiate(signal: SampledSignal) -> SampledSignal:
    """First difference, out[k] = in[k+1] - in[k].

    Output is one sample shorter; its first sample corresponds to the
    instant one sample period after the input's start.
    """
    validate_signal(signal)
    if len(signal) < 2:
        raise TooShort("differentiate needs at least 2 samples")
    out = np.diff(signal.samples)
    return SampledSignal(
        out,
        signal.sample_rate_hz,
        start_time_s=signal.start_time_s + 1.0 / signal.sample_rate_hz,
    )


def _resonator_sos(r: float) -> list[float]:
    # denominator of one double-pole section, 1 - 2r z^-1 + r^2 z^-2
    return [1.0, -2.0 * r, r * r]


def cascaded_resonator(signal: SampledSignal, r: float, order_pairs: int) -> SampledSignal:
    """Run the double-pole recursion order_pairs times, zero initial state.

    Each pass contributes a pole pair at z = r, so the cascade has
    2 * order_pairs poles. r = 1 is allowed (the zff case) even though
    the recursion is then unstable; callers are expected to detrend.
    """
    validate_signal(signal)
    if not 0.0 < r <= 1.0:
        raise BadRadius(f"resonator radius needs 0 < r <= 1, got {r}")
    if int(order_pairs) != order_pairs or order_pairs < 1:
        raise BadConfig(f"order_pairs must be an integer >= 1, got {order_pairs}")
    a = _resonator_sos(float(r))
    out = signal.samples
    for _ in range(int(order_pairs)):
        out = lfilter([1.0], a, out)
    return SampledSignal(out, signal.sample_rate_hz, signal.start_time_s)


def _window_half_width(window_s: float, fs: float) -> int:
    return int(round(window_s * fs / 2.0))


def _detrend_array(x: np.ndarray, n_half: int) -> np.ndarray:
    # Running mean over a +/- n_half window, truncated at the ends.
    # Sums come from a direct convolution: a cumulative-sum shortcut
    # cancels catastrophically against the huge r=1 trend.
    width = 2 * n_half + 1
    sums = np.convolve(x, np.ones(width), mode="same")
    idx = np.arange(len(x))
    counts = np.minimum(idx + n_half, len(x) - 1) - np.maximum(idx - n_half, 0) + 1
    return x - sums / counts


def detrend(signal: SampledSignal, window_s: float) -> SampledSignal:
    """Subtract the running mean over a window of window_s seconds.

    The window covers N = round(window_s * fs / 2) samples on each side
    and is truncated where it overhangs the signal ends.
    """
    validate_signal(signal)
    if not window_s > 0.0:
        raise BadConfig(f"window_s must be positive, got {window_s}")
    n_half = _window_half_width(window_s, signal.sample_rate_hz)
    if len(signal) <= 2 * n_half + 1:
        raise WindowTooLarge(
            f"detrend window of {2 * n_half + 1} samples does not fit in "
            f"signal of {len(signal)} samples"
        )
    out = _detrend_array(signal.samples, n_half)
    return SampledSignal(out, signal.sample_rate_hz, signal.start_time_s)


def trim_ends(signal: SampledSignal, trim_s: float) -> SampledSignal:
    """Drop trim_s seconds from each end, keeping the time offset."""
    validate_signal(signal)
    if trim_s < 0.0:
        raise BadConfig(f"trim_s must be >= 0, got {trim_s}")
    if not signal.duration_s > 2.0 * trim_s:
        raise TrimTooLarge(
            f"cannot trim {trim_s} s from each end of a {signal.duration_s} s signal"
        )
    n = int(round(trim_s * signal.sample_rate_hz))
    if n == 0:
        return signal
    out = signal.samples[n:-n]
    return SampledSignal(
        out,
        signal.sample_rate_hz,
        start_time_s=signal.start_time_s + n / signal.sample_rate_hz,
    )


def _ringout_length(r: float) -> int:
    # Smallest K with (K+1) r^K below working precision; the double-pole
    # impulse response envelope is (n+1) r^n.
    if r >= 1.0:
        raise BadRadius("zero-phase section needs r < 1")
    k = max(8, int(math.ceil(math.log(_TAIL_EPS) / math.log(r))))
    while (k + 1) * r**k > _TAIL_EPS:
        k = int(k * 1.2) + 10
    return k


def _zero_phase_double_pole(x: np.ndarray, r: float) -> np.ndarray:
    """One double-pole section forward and backward, tail-extended.

    The forward pass is let ring past the buffer end until its response
    decays below precision before the backward pass runs; truncating the
    tail instead leaves an asymmetric boundary transient far above the
    zero-phase symmetry tolerance.
    """
    a = _resonator_sos(r)
    tail = _ringout_length(r)
    y, state = lfilter([1.0], a, x, zi=np.zeros(2))
    ring, _ = lfilter([1.0], a, np.zeros(tail), zi=state)
    y = np.concatenate([y, ring])
    y = lfilter([1.0], a, y[::-1])[::-1]
    return y[: len(x)]


def _require_method(config: FilterConfig, method: str) -> None:
    if config.method != method:
        raise BadMethod(f"config.method is {config.method!r}, expected {method!r}")


def _preemphasized(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    return differentiate(signal) if config.preemphasis else signal


def _detrend_passes(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    for _ in range(config.detrend_passes):
        signal = detrend(signal, config.detrend_window_s)
    return signal


def zfr_pipeline(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    """Causal radius-r pipeline: difference, resonate, detrend, trim."""
    _require_method(config, "zfr")
    validate_signal(signal)
    out = _preemphasized(signal, config)
    out = cascaded_resonator(out, config.r, order_pairs=2)
    out = _detrend_passes(out, config)
    return trim_ends(out, config.trim_s)


def zff_pipeline(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    """Unit-circle pipeline: difference, resonate at r=1, detrend, trim.

    Long signals are processed in overlapping segments because the r=1
    recursion grows without bound; see SEGMENT_THRESHOLD_S.
    """
    _require_method(config, "zff")
    validate_signal(signal)
    out = _preemphasized(signal, config)
    if out.duration_s > SEGMENT_THRESHOLD_S:
        detrended = _segmented_zff(out, config)
    else:
        detrended = _detrend_passes(cascaded_resonator(out, 1.0, order_pairs=2), config)
    return trim_ends(detrended, config.trim_s)


def _segmented_zff(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    fs = signal.sample_rate_hz
    x = signal.samples
    n_half = _window_half_width(config.detrend_window_s, fs)
    seg = int(round(SEGMENT_LENGTH_S * fs))
    # Padding must cover twice the edge trim and the detrend passes'
    # contamination depth (passes * N samples), whichever is larger.
    pad = max(
        int(round(2.0 * config.trim_s * fs)),
        config.detrend_passes * n_half + 2 * n_half + 2,
    )
    out = np.empty_like(x)
    for start in range(0, len(x), seg):
        stop = min(start + seg, len(x))
        lo = max(start - pad, 0)
        hi = min(stop + pad, len(x))
        piece = x[lo:hi]
        for _ in range(2):
            piece = lfilter([1.0], _resonator_sos(1.0), piece)
        for _ in range(config.detrend_passes):
            piece = _detrend_array(piece, n_half)
        out[start:stop] = piece[start - lo : stop - lo]
    return SampledSignal(out, fs, signal.start_time_s)


def zpzfr_pipeline(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    """Zero-phase pipeline: forward-backward resonate, detrend, trim.

    Pre-emphasis is off by default for this method; the symmetric,
    zero-phase output puts a clean negative peak at each excitation
    instant, and a first-difference stage would skew that symmetry.
    """
    _require_method(config, "zpzfr")
    validate_signal(signal)
    if not 0.0 < config.r < 1.0:
        raise BadRadius(f"zpzfr needs 0 < r < 1, got {config.r}")
    out = _preemphasized(signal, config)
    filtered = _zero_phase_double_pole(out.samples, config.r)
    out = SampledSignal(filtered, out.sample_rate_hz, out.start_time_s)
    out = _detrend_passes(out, config)
    return trim_ends(out, config.trim_s)


_PIPELINES = {
    "zfr": zfr_pipeline,
    "zff": zff_pipeline,
    "zpzfr": zpzfr_pipeline,
}


def run_pipeline(signal: SampledSignal, config: FilterConfig) -> SampledSignal:
    """Dispatch to the pipeline named by config.method."""
    return _PIPELINES[config.method](signal, config)


def _check_omega(omega: np.ndarray) -> np.ndarray:
    omega = np.asarray(omega, dtype=np.float64)
    if omega.size and (np.min(omega) <= 0.0 or np.max(omega) > np.pi):
        raise OmegaOutOfRange("omega grid must lie in (0, pi]")
    return omega


def frequency_response(method: str, r: float, omega_grid) -> FrequencyResponse:
    """Analytic magnitude and phase of the resonator core on a grid.

    All three methods share the magnitude form 1 / (1 - 2r cos w + r^2)^2
    (with r = 1 for zff). Phase: zfr bends as -4 atan(r sin w / (1 - r cos w)),
    zff is the exactly linear r=1 limit 2w - 2pi, zpzfr is identically zero.
    """
    method = str(method).strip().lower()
    omega = _check_omega(omega_grid)
    if method == "zff":
        if r != 1.0:
            raise BadRadius("zff response is defined at r = 1.0")
        magnitude = (2.0 - 2.0 * np.cos(omega)) ** -2.0
        phase = 2.0 * omega - 2.0 * np.pi
    elif method == "zfr":
        if not 0.0 < r < 1.0:
            raise BadRadius(f"zfr needs 0 < r < 1, got {r}")
        magnitude = (1.0 - 2.0 * r * np.cos(omega) + r * r) ** -2.0
        phase = -4.0 * np.arctan2(r * np.sin(omega), 1.0 - r * np.cos(omega))
    elif method == "zpzfr":
        if not 0.0 < r < 1.0:
            raise BadRadius(f"zpzfr needs 0 < r < 1, got {r}")
        magnitude = (1.0 - 2.0 * r * np.cos(omega) + r * r) ** -2.0
        phase = np.zeros_like(omega)
    else:
        raise BadMethod(f"unknown method {method!r}")
    return FrequencyResponse(omega, magnitude, phase)


def pole_report(method: str, r: float) -> PoleReport:
    """Pole layout and Table-style classification for a method.

    zfr: four poles at z = r, causal, phase bent by the pole angle.
    zff: four poles pinned at z = 1 regardless of r, causal, linear
    phase, unstable. zpzfr: double poles at r and 1/r, realized
    non-causally, zero phase.
    """
    method = str(method).strip().lower()
    if not 0.0 < r <= 1.0:
        raise BadRadius(f"pole_report needs 0 < r <= 1, got {r}")
    if method == "zfr":
        poles = ((complex(r), 4),)
        causal, phase_class = True, "nonlinear"
    elif method == "zff":
        poles = ((complex(1.0), 4),)
        causal, phase_class = True, "linear"
    elif method == "zpzfr":
        if r >= 1.0:
            raise BadRadius("zpzfr needs r < 1 so the mirrored pole sits outside")
        poles = ((complex(r), 2), (complex(1.0 / r), 2))
        causal, phase_class = False, "zero"
    else:
        raise BadMethod(f"unknown method {method!r}")
    # A non-causal zero-phase run is stable when the causal half is; its
    # mirrored pole at 1/r belongs to the anti-causal direction.
    if method == "zpzfr":
        stable = r < 1.0
    else:
        stable = max(abs(p) for p, _ in poles) < 1.0
    return PoleReport(poles=poles, stable=stable, causal=causal, phase_class=phase_class)
