#!/usr/bin/env python3
"""Every closed form against the photon-level Monte Carlo, side by side.

Runs one session per attack strategy and compares the sifted-key error rate,
the eavesdropper's accuracy, the non-empty-pulse rate and the coincidence
rate against their analytic expectations, quoting the distance in binomial
standard errors.  Ends with the photon-number-splitting detection signature:
the coincidence deficit that survives even a perfectly calibrated attack.
"""

import bb84eve as bb
from bb84eve.engine import SessionConfig, analytic_expectations, run_sharded
from bb84eve.pulse_optics import OpticalConfig

N_PULSES = 1_000_000
SHARDS = 4

kappa = bb.kappa_for_channel(1.0, 0.9).kappa
sessions = [
    ("quiet line", OpticalConfig(mu=1.0, eta=0.9), None),
    ("intercept-resend, eps=0.6", OpticalConfig(mu=0.8, eta=0.9), bb.InterceptResend(eps=0.6)),
    ("probe attack, d=0.1", OpticalConfig(mu=0.6, eta=0.9), bb.OptimalIncoherent(d=0.1)),
    ("splitter + intercept-resend", OpticalConfig(mu=1.0, eta=0.9), bb.BsInterceptResend(t=0.9, d=0.1)),
    ("splitter + probe", OpticalConfig(mu=1.0, eta=0.9), bb.BsOptimal(t=0.9, d=0.1)),
    ("photon-number splitting", OpticalConfig(mu=1.0, eta=0.9), bb.Pns(kappa=kappa, d=0.1)),
]

for name, optics, attack in sessions:
    config = SessionConfig(optics=optics, attack=attack, n_pulses=N_PULSES, seed=12)
    stats = run_sharded(config, SHARDS)
    expected = analytic_expectations(config)
    print(f"\n{name}  (mu={optics.mu}, eta={optics.eta}, {N_PULSES} pulses)")
    for metric, value, stderr in (
        ("qber", stats.qber, stats.qber_stderr),
        ("eve_accuracy", stats.eve_accuracy, stats.eve_accuracy_stderr),
        ("nonempty_rate", stats.nonempty_rate, stats.nonempty_stderr),
        ("coincidence_rate", stats.coincidence_rate, stats.coincidence_stderr),
    ):
        analytic = expected[metric]
        if analytic is None:
            print(f"  {metric:<17} {value:.6f}   (no closed form here)")
            continue
        sigma = abs(value - analytic) / stderr if stderr > 0 else 0.0
        print(f"  {metric:<17} {value:.6f}  vs  {analytic:.6f}   ({sigma:.2f} sigma)")

# --- The detection signature the blocking attack cannot hide. -----------------

print("\ncoincidence monitor at mu=1, eta=0.9:")
no_attack = bb.coincidence_prob(0.9, 1.0)
config = SessionConfig(
    optics=OpticalConfig(mu=1.0, eta=0.9),
    attack=bb.Pns(kappa=kappa, d=0.0),
    n_pulses=N_PULSES,
    seed=13,
)
stats = run_sharded(config, SHARDS)
sigma = (no_attack - stats.coincidence_rate) / stats.coincidence_stderr
print(f"  expected without attack: {no_attack:.6f}")
print(f"  measured under PNS:      {stats.coincidence_rate:.6f}  ({sigma:.0f} sigma low)")
print("  the non-empty rate matches perfectly, but the skimmed photons are")
print("  missing from the multi-photon tail: that is what gives the attack away.")
