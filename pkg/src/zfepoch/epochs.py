"""Epoch detection in filtered outputs and EGG references, plus scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BadConfig, EpochSequence, FilterConfig, SampledSignal, TooShort, validate_signal
from .filters import differentiate, run_pipeline

DEFAULT_EGG_PROMINENCE = 0.05

# Which detector reads epochs off each pipeline's output: the causal
# methods put a positive-going zero crossing at each excitation instant,
# while the zero-phase method centers a symmetric negative lobe there.
DETECTOR_FOR_METHOD = {
    "zfr": "crossings",
    "zff": "crossings",
    "zpzfr": "negative_peaks",
}


@dataclass(frozen=True)
class EvalReport:
    """Detected-vs-reference scoring summary."""

    reference_count: int
    detected_count: int
    matched_count: int
    mean_abs_error_s: float
    tolerance_s: float


def detect_positive_zero_crossings(filtered: SampledSignal) -> EpochSequence:
    """Times where the signal crosses from negative to >= 0.

    Each crossing between samples k and k+1 is placed by linear
    interpolation; a zero sample after a negative one counts.
    """
    validate_signal(filtered)
    y = filtered.samples
    k = np.nonzero((y[:-1] < 0.0) & (y[1:] >= 0.0))[0]
    frac = -y[k] / (y[k + 1] - y[k])
    times = filtered.start_time_s + (k + frac) / filtered.sample_rate_hz
    return EpochSequence(times, filtered.sample_rate_hz)


def detect_negative_peaks(filtered: SampledSignal) -> EpochSequence:
    """Times of strict local minima with negative value.

    The minimum is refined by fitting a parabola through the three
    surrounding samples; the refinement never moves a peak by more than
    half a sample.
    """
    validate_signal(filtered)
    y = filtered.samples
    if len(y) < 3:
        return EpochSequence(np.empty(0), filtered.sample_rate_hz)
    mid = y[1:-1]
    k = np.nonzero((mid < y[:-2]) & (mid < y[2:]) & (mid < 0.0))[0] + 1
    curvature = y[k - 1] - 2.0 * y[k] + y[k + 1]
    shift = np.clip(0.5 * (y[k - 1] - y[k + 1]) / curvature, -0.5, 0.5)
    times = filtered.start_time_s + (k + shift) / filtered.sample_rate_hz
    return EpochSequence(times, filtered.sample_rate_hz)


def extract_epochs(
    signal: SampledSignal, config: FilterConfig, detector: str | None = None
) -> EpochSequence:
    """Filter a signal and read epochs off the output.

    detector is "crossings" or "negative_peaks"; None picks the default
    for config.method (crossings for zfr/zff, negative peaks for zpzfr).
    """
    if detector is None:
        detector = DETECTOR_FOR_METHOD[config.method]
    if detector not in ("crossings", "negative_peaks"):
        raise BadConfig(f"unknown detector {detector!r}")
    filtered = run_pipeline(signal, config)
    if detector == "crossings":
        return detect_positive_zero_crossings(filtered)
    return detect_negative_peaks(filtered)


def egg_reference_epochs(
    egg: SampledSignal,
    prominence_fraction: float = DEFAULT_EGG_PROMINENCE,
) -> EpochSequence:
    """Reference epochs from an electroglottograph trace.

    Glottal closures show up as sharp falls of the EGG, i.e. negative
    peaks of its derivative. Minima shallower than prominence_fraction
    of the deepest one are treated as noise and dropped.
    """
    validate_signal(egg)
    if len(egg) < 3:
        raise TooShort("EGG reference extraction needs at least 3 samples")
    derivative = differentiate(egg)
    peaks = detect_negative_peaks(derivative)
    if len(peaks) == 0:
        return peaks
    # depth of each detected minimum, for the prominence floor
    idx = np.round((peaks.times_s - derivative.start_time_s) * derivative.sample_rate_hz)
    idx = idx.astype(int).clip(0, len(derivative) - 1)
    depth = -derivative.samples[idx]
    keep = depth >= prominence_fraction * depth.max()
    return EpochSequence(peaks.times_s[keep], peaks.source_sample_rate_hz)


def greedy_nearest_match(a: np.ndarray, b: np.ndarray, tolerance: float) -> list[tuple[int, int]]:
    """One-to-one greedy matching of two value sequences.

    Candidate pairs within tolerance are taken nearest-first (ties in
    order of position), each element used at most once. Returns index
    pairs (i, j) into a and b.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) == 0 or len(b) == 0:
        return []
    pairs_i = []
    pairs_j = []
    dists = []
    # chunk the |a_i - b_j| table so dense sequences stay in bounded memory
    chunk = max(1, int(4e6) // max(len(b), 1))
    for lo in range(0, len(a), chunk):
        block = np.abs(a[lo : lo + chunk, None] - b[None, :])
        ii, jj = np.nonzero(block <= tolerance)
        pairs_i.append(ii + lo)
        pairs_j.append(jj)
        dists.append(block[ii, jj])
    cand_i = np.concatenate(pairs_i)
    cand_j = np.concatenate(pairs_j)
    cand_d = np.concatenate(dists)
    order = np.lexsort((cand_j, cand_i, cand_d))
    used_a = np.zeros(len(a), dtype=bool)
    used_b = np.zeros(len(b), dtype=bool)
    matches = []
    for idx in order:
        i = cand_i[idx]
        j = cand_j[idx]
        if not used_a[i] and not used_b[j]:
            used_a[i] = True
            used_b[j] = True
            matches.append((int(i), int(j)))
    return matches


def evaluate(
    detected: EpochSequence, reference: EpochSequence, tolerance_s: float
) -> EvalReport:
    """Score detected epochs against a reference sequence.

    Pairs are formed by greedy one-to-one nearest matching within
    tolerance_s; mean_abs_error_s averages over matched pairs (NaN when
    nothing matched).
    """
    if not tolerance_s > 0.0:
        raise ValueError(f"tolerance_s must be positive, got {tolerance_s}")
    matches = greedy_nearest_match(detected.times_s, reference.times_s, tolerance_s)
    if matches:
        errors = [abs(detected.times_s[i] - reference.times_s[j]) for i, j in matches]
        mean_err = float(np.mean(errors))
    else:
        mean_err = float("nan")
    return EvalReport(
        reference_count=len(reference),
        detected_count=len(detected),
        matched_count=len(matches),
        mean_abs_error_s=mean_err,
        tolerance_s=float(tolerance_s),
    )
