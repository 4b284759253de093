"""
Derivatives in the parameter
============================

With ``x = g(p, y)`` the inverse of ``y = f(p, x)``, the p-derivatives of g
follow from partial derivatives of f.  Here f is the defining integral, so
``f_p`` and ``f_pp`` are integrals of the differentiated kernel.
"""

# %%
import numpy as np

from gentrig.calculus import derivative_report

for kind, y in (("sin", 0.5), ("tan", 0.5), ("sinh", 2.0), ("tanh", 2.0), ("cos", 0.5), ("cosh", 2.0)):
    r = derivative_report(kind, 3.0, y)
    print(f"{kind:5s} g={r.g:.6f} dg/dp={r.dg_dp:+.3e} d2g/dp2={r.d2g_dp2:+.3e} "
          f"d2log/dp2={r.d2logg_dp2:+.3e} (+-{r.quad_err:.0e})")

# %%
# Cross-check against a second central difference of the forward values.
from gentrig.core import sin_p

p, y, h = 2.5, 0.6, 1e-3
fd = (sin_p(p + h, y) - 2 * sin_p(p, y) + sin_p(p - h, y)) / h**2
print("analytic", derivative_report("sin", p, y).d2g_dp2, "finite difference", fd)

# %%
# Below p close to 1/3 sin_p(y) stops being concave in p for some y.
for p in np.geomspace(0.2, 0.6, 5):
    print(f"p={p:.3f}  d2 sin_p(0.5)/dp2 = {derivative_report('sin', p, 0.5).d2g_dp2:+.3e}")
