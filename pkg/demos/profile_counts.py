"""
Profiles stop growing with window length
========================================

The bundled rewrite model has five normal forms ("", a, b, ab, ba).  Once
every interface has had a chance to reach its final type, longer windows add
no new histograms.
"""

from spdp.localwidth import (count_kappa_step_sequences, count_profiles, default_model,
                             realized_profiles, round_transitions)

model = default_model()
print("normal forms:", model.normal_forms(), " S' =", model.S_prime)

for R in (4, 8):
    T = round_transitions(model, R)
    print(f"\nR={R}: histogram ceiling C(R+S'-1, S'-1) = {count_profiles(R, model.S_prime)}")
    for kappa in range(1, 7):
        got = len(realized_profiles(model, kappa, R))
        seqs = count_kappa_step_sequences(T, kappa)
        print(f"  kappa={kappa}: realized {got:4d}   ordered step sequences {seqs:.3e}")
