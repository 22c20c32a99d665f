"""
Redundancy is not symmetric
===========================

With scalar variables and a message correlated with both sources, neither
source has unique information.  The unsymmetrized redundancies then equal
the plain mutual informations, which differ whenever the two correlations do.
"""

from markov_pid import counterexample_family, pid_terms_gaussian

for d in ("tmxy", "myxt"):
    t = pid_terms_gaussian(counterexample_family(d, (0.6, 0.3)), d)
    print(f"{d}: UI_X={t.ui_x:.4f} UI_Y={t.ui_y:.4f} R_X={t.r_x:.4f} R_Y={t.r_y:.4f} gap={abs(t.r_x - t.r_y):.4f} bits")

# The gap grows with the difference in correlation strength.
for rho in (0.3, 0.5, 0.7, 0.9):
    t = pid_terms_gaussian(counterexample_family("tmxy", (rho, 0.1)), "tmxy")
    print(f"rho_x={rho:.1f}, rho_y=0.1: R_X - R_Y = {t.r_x - t.r_y:.4f} bits")
