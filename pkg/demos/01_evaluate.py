"""
Evaluating the generalized functions
====================================

Each generalized function is the inverse of an integral.  For example
``arcsin_p(x)`` is the integral of ``(1 - t^p)^(-1/p)`` from 0 to x, and
``sin_p`` inverts it.  At ``p = 2`` every function reduces to its classical
namesake.
"""

# %%
# The half period ``pi_p`` has a closed form; the quadrature route agrees.
import math

import numpy as np

from gentrig import core

for p in (1.5, 2.0, 4.0, 10.0):
    q = core.pi_p_quadrature(p)
    print(f"p={p:5.1f}  pi_p={core.pi_p(p):.15f}  quadrature={q.value:.15f}  err~{q.err_estimate:.1e}")

# %%
# Classical reduction at p = 2.
for y in (0.3, 1.0, 1.4):
    print(f"y={y}: sin_2 - sin = {core.sin_p(2, y) - math.sin(y):+.1e}, "
          f"tanh_2 - tanh = {core.tanh_p(2, y) - math.tanh(y):+.1e}")

# %%
# ``evaluate`` also reports how well the inverse was resolved.
ev = core.evaluate("sin", 3.0, 0.8)
print(ev)

# %%
# The p-circle identity ``|sin_p|^p + |cos_p|^p = 1`` holds to rounding.
p = 3.0
ys = np.linspace(0, core.pi_p(p) / 2, 6)
print([abs(core.sin_p(p, y) ** p + core.cos_p(p, y) ** p - 1) for y in ys])

# %%
# For small y and large p, sin_p(y) differs from y by far less than one ulp.
# ``log_deviation`` still resolves the gap.
lv = core.log_deviation("sin", 16, 0.05)
print(f"log(sin_16(0.05)/0.05) = {lv.value:.6e}  (err {lv.err:.1e})")
