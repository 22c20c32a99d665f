"""
Running the verification suites
===============================

Every suite is seeded per trial, so a failure line carries enough to rebuild
the offending instance.  The independent-sums probe only reports.
"""

from markov_pid.verify import (
    determinant_step_suite,
    gaussian_closed_form_vs_numeric_suite,
    independent_sums_probe,
    nonnegativity_suite,
)

for rep in (
    nonnegativity_suite("gaussian", 20, seed=1),
    nonnegativity_suite("discrete", 10, seed=1),
    determinant_step_suite(100, seed=1),
    gaussian_closed_form_vs_numeric_suite(5, (2, 2, 2), seed=1),
    independent_sums_probe("gaussian", 3, seed=1),
):
    print(rep.summary_line())

probe = independent_sums_probe("discrete", 1, seed=1)
for row in probe.rows:
    print(row["definition"], row["t_card"], row["method"], f"{row['deviation']:+.2e}")
