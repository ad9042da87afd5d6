"""
Epoch extraction measured against a known excitation
====================================================

The synthesizer plants glottal impulses at exactly known instants, so we
can score each extraction method against ground truth instead of against
another algorithm. This is the core accuracy story: the zero-phase
variant recovers the instants to within a fraction of a sample, while
the causal variant drags them several milliseconds late.
"""

import numpy as np

from zfepoch import FilterConfig, evaluate, extract_epochs, speaker, synth_voice

# ten seconds of speaker A: 110 Hz pitch with a slow vibrato, 2% jitter,
# one formant resonance; the returned truth holds the exact impulse times
signal, truth = synth_voice(speaker("A", 10.0, seed=1))
print(f"synthesized {signal.duration_s:g} s at {signal.sample_rate_hz:g} Hz "
      f"with {len(truth)} known excitation instants")

# extract with each method and score at a quarter-millisecond tolerance
for method in ("zfr", "zff", "zpzfr"):
    detected = extract_epochs(signal, FilterConfig(method))
    report = evaluate(detected, truth, tolerance_s=0.00025)
    rate = report.matched_count / report.reference_count
    print(f"{method:6s} detected {report.detected_count:4d}  "
          f"matched {report.matched_count:4d} ({rate:6.1%})  "
          f"mean |err| {report.mean_abs_error_s * 1e3:7.4f} ms")

# zfr scores near zero above: its phase lag shifts every mark by a few
# milliseconds. Widen the tolerance and most marks reappear, just late.
detected = extract_epochs(signal, FilterConfig("zfr"))
report = evaluate(detected, truth, tolerance_s=0.006)
print(f"\nzfr at 6 ms tolerance: matched {report.matched_count} "
      f"with mean |err| {report.mean_abs_error_s * 1e3:.3f} ms (a systematic lag)")

# noise robustness: 20 dB SNR barely moves the zero-phase result
noisy, _ = synth_voice(speaker("A", 10.0, seed=1, noise_snr_db=20.0))
for method in ("zff", "zpzfr"):
    detected = extract_epochs(noisy, FilterConfig(method))
    report = evaluate(detected, truth, tolerance_s=0.0005)
    rate = report.matched_count / report.reference_count
    print(f"{method:6s} at 20 dB SNR: matched {rate:6.1%} within 0.5 ms")

# the intervals between epochs are the speaker-dependent quantity used
# by the comparison tools in the next demo
intervals = np.diff(truth.times_s)
print(f"\nground-truth intervals: mean {np.mean(intervals) * 1e3:.2f} ms, "
      f"spread {np.std(intervals) * 1e3:.2f} ms (pitch wobble + jitter)")
