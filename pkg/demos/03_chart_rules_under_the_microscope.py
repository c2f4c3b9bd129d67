"""Every rewriting rule, re-derived exactly by the polynomial engine.

A chart descriptor stands for the local normal form

    prod x_i = t * det(y_rs) * prod z_j^(a_j)

and each rule replaces it by the charts of one blow-up.  Instead of
trusting the printed child formulas, the verifier substitutes the actual
coordinate changes into the actual equation, divides out the exceptional
coordinate, and compares.  This settles, among other things, what the
exceptional coefficient of the determinant rule really is.
"""

from sncresolve.chart_calculus import (ChartState, RuleApplication, children,
                                       exceptional_coefficient, is_resolved,
                                       local_equation, mdeg)
from sncresolve.poly_oracle import grid_table, verify_rule

# The smallest interesting singularity: two factors and a 2x2 determinant.
chart = ChartState.of(["E1", "E2"], 2, {})
print("equation:", local_equation(chart))
print("mdeg:", tuple(mdeg(chart)), "resolved?", is_resolved(chart))

# The determinant rule on this chart.  Direct substitution scales each
# matrix entry by the exceptional coordinate, so det picks up m powers,
# the left side picks up 2, and the residual exponent is m - 2.
app = RuleApplication("DET", ("E1", "E2"), det_size=2)
report = verify_rule(app, chart)
print("\nverification passed:", report.passed)
for note in report.notes:
    print("  ", note)

# The two candidate coefficients diverge at every m >= 2; the library
# ships with the measured one as the default policy.
for m in (2, 3):
    print(f"m={m}: measured m-2 = {exceptional_coefficient('DET', det_size=m)}"
          f", alternate m^2-2 = "
          f"{exceptional_coefficient('DET', det_size=m, policy='paper')}")

# Children are stored one representative per permutation family, with
# the family size as a multiplicity: 2 charts split an x-factor, m^2
# charts shrink the determinant.
print("\nchildren of", chart, "under DET:")
for kid in children(chart, app):
    print(f"  {kid.state}  x{kid.multiplicity}  ({kid.family}-family), "
          f"mdeg {tuple(mdeg(kid.state))}")

# A monomial rule: exponent a splits as (a) kept + (a-2) exceptional in
# the x-charts and drops to a - 2 in the divisor chart.
m1_chart = ChartState.of(["E1", "E2"], 0, {"f1": 3})
m1_app = RuleApplication("MON1", ("E1", "E2"), divisors=("f1",),
                         new_divisor=("w", 1))
print("\nMON1 on", m1_chart)
for kid in children(m1_chart, m1_app):
    print(f"  {kid.state}  x{kid.multiplicity}, mdeg {tuple(mdeg(kid.state))}")

# A one-line summary table over a small grid, the same view the
# command-line `verify` subcommand prints.
reports = []
for d in (2, 3):
    comps = [f"E{i}" for i in range(1, d + 1)]
    reports.append(verify_rule(RuleApplication("DET", ("E1", "E2"), det_size=2),
                               ChartState.of(comps, 2, {})))
    reports.append(verify_rule(RuleApplication("BIN", ("E1",)),
                               ChartState.of(comps, 1, {})))
print()
print(grid_table(reports))
