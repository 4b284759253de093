"""
Certifying convexity on a grid
==============================

``scan`` evaluates a signed margin with an error bound on every grid cell.
A cell Holds only when the margin clears the bound.  The same scan that
certifies a property on its proved region finds violations outside it.
"""

# %%
import numpy as np

from gentrig.convexity import Verdict, find_p0, scan, turan_margin
from gentrig.report import exit_status, scan_to_csv

rep = scan("LogConcave", np.geomspace(0.25, 16, 8), np.linspace(0.05, 0.95, 5), kind="sin")
print(rep.counts(), "exit", exit_status(rep))

# %%
# log-convexity of tan_p(y) in p is proved for p > 1 only; below 1 it breaks.
neg = scan("LogConvex", np.geomspace(0.05, 0.95, 6), [0.2, 0.4, 0.6], kind="tan")
print(neg.verdicts())
print("exit", exit_status(neg))

# %%
# Turan-type margins, oriented so that positive is the conjectured direction.
for kind, y in (("sin", 0.5), ("cos", 0.5), ("tan", 0.5), ("sinh", 2.0), ("tanh", 2.0)):
    m = turan_margin(kind, 3.0, y)
    print(f"{kind:5s} {m.value:+.4e} +- {m.err_bound:.1e}  {m.verdict.value}")

# %%
# Reports serialise to a stable CSV.
print(scan_to_csv(scan("Concave", [1.0, 4.0], [0.5, 2.0], kind="tanh")))

# %%
# Exploratory: where does concavity of sin_p(y) in p start?
res = find_p0(np.linspace(0.1, 0.9, 5))
print(f"p0 estimate {res.p0_estimate:.4f}")
for y, w in res.witness.items():
    print(f"  y={y:.2f}: {w}")
assert all(m.verdict is Verdict.HOLDS for _, _, m in rep.cells())
