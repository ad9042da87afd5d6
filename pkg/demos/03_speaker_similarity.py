"""
Delta-sequence similarity: telling two voices apart
===================================================

Absolute epoch times depend on when a recording started; the intervals
between them (the delta sequence) do not. Counting how many intervals
of two utterances agree within half a millisecond gives a score that is
large for the same voice and collapses to zero for a different one.
"""

from zfepoch import (
    FilterConfig,
    MatchConfig,
    confidence,
    delta12_count,
    deltas,
    extract_epochs,
    speaker,
    synth_voice,
)

config = FilterConfig("zpzfr")

# two different utterances from speaker A and one from speaker B
utter_a1, _ = synth_voice(speaker("A", 2.0, seed=7))
utter_a2, _ = synth_voice(speaker("A", 2.0, seed=8))
utter_b, _ = synth_voice(speaker("B", 2.0, seed=9))

epochs_a1 = extract_epochs(utter_a1, config)
epochs_a2 = extract_epochs(utter_a2, config)
epochs_b = extract_epochs(utter_b, config)
print(f"epochs: A#1 {len(epochs_a1)}, A#2 {len(epochs_a2)}, B {len(epochs_b)}")

# pairwise interval agreement at the default half-millisecond epsilon
same = delta12_count(deltas(epochs_a2), deltas(epochs_a1))
cross = delta12_count(deltas(epochs_b), deltas(epochs_a1))
print(f"A vs A: {same.delta12_count} of {same.compared_pairs} intervals agree")
print(f"B vs A: {cross.delta12_count} of {cross.compared_pairs} intervals agree")

# a lock is just several enrolled utterances; confidence averages the
# counts so one unlucky recording cannot swing the decision
lock_epochs = []
for seed in (10, 11, 12, 13, 14):
    signal, _ = synth_voice(speaker("A", 2.0, seed=seed))
    lock_epochs.append(extract_epochs(signal, config))

score_same = confidence(epochs_a2, lock_epochs)
score_other = confidence(epochs_b, lock_epochs)
print(f"\nconfidence of another A utterance: per-lock {score_same.per_lock_counts}"
      f" -> average {score_same.average:.1f}")
print(f"confidence of a B utterance:       per-lock {score_other.per_lock_counts}"
      f" -> average {score_other.average:.1f}")
print("an open/closed threshold of 7 sits comfortably between the two")

# index alignment compares intervals in order; nearest alignment pairs
# each interval with the closest unused one and so survives a dropped or
# inserted epoch at the cost of ignoring order
nearest = MatchConfig(alignment="nearest")
same_nearest = delta12_count(deltas(epochs_a2), deltas(epochs_a1), nearest)
print(f"\nA vs A with nearest alignment: {same_nearest.delta12_count} "
      f"(index alignment gave {same.delta12_count})")
