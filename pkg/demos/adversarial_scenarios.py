"""
What the simulator's attackers manage
=====================================

Runs every scenario on a few seeds and prints the outcome line.
"""

from dtms.sim import SCENARIOS, SimConfig, simulate

for scenario in SCENARIOS:
    for seed in range(3):
        t = simulate(SimConfig(scenario, seed=seed)).transcript
        print(f"{scenario:20} seed {seed}: {t.outcome:6} {t.reason}")

# with the fixed challenge of the worked example, forging is trivial
t = simulate(SimConfig("forge_signature", fixture=True)).transcript
print("\nfixture hash, forge_signature:", t.outcome, "-", t.reason)

# colluders pooling masked shares land on f(0) + sum K_i lambda_i, not f(0)
res = simulate(SimConfig("collude_reconstruct", fixture=True))
print("pooled reconstruction:", res.reconstruction, "(group secret is 13)")
