"""Show the rescaled solution collapsing onto its limit profile.

e^{-bt} u(t, x) tends to alpha_0 f_0(x) + alpha_1 f_1(x) ... but only the
first term survives the rescaling; the stationary mode 1 component stays
put, so the limit is alpha_0 f_0 + alpha_1 f_1 evaluated without growth.
Here we subtract both known components and plot what is left shrinking.
"""
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import mitospec as ms

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

p = ms.ModelParams()
grid = ms.make_grid(30.0, 6000)
u0 = np.exp(-0.5 * (grid.nodes - 5.0) ** 2)

alphas = ms.expansion_coefficients(u0, grid, p, 1)
f0 = ms.sample(ms.primal_eigenfunction(0, p), grid)
f1 = ms.sample(ms.primal_eigenfunction(1, p), grid)
print(f"expansion coefficients: alpha_0 = {alphas[0]:.4f}, alpha_1 = {alphas[1]:.4f}")

times = [0.0, 1.0, 2.0, 3.0, 5.0]
res = ms.solve(u0, grid, p, times[-1], snapshot_times=times)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
for t, u in zip(res.times, res.states):
    ax1.plot(grid.nodes, np.exp(-p.b * t) * u, label=f"t = {t:g}")
ax1.plot(grid.nodes, alphas[0] * f0, "k--", lw=1.2, label=r"$\alpha_0 f_0$ limit")
ax1.set_xlim(0, 12)
ax1.set_xlabel("size x")
ax1.set_ylabel("e^{-bt} u(t, x)")
ax1.set_title("Rescaled profiles approach the leading mode")
ax1.legend(fontsize=8)

for t, u in zip(res.times, res.states):
    remainder = u - alphas[0] * np.exp(p.b * t) * f0 - alphas[1] * f1
    ax2.plot(grid.nodes, remainder, label=f"t = {t:g}")
ax2.set_xlim(0, 12)
ax2.set_xlabel("size x")
ax2.set_ylabel("remainder")
ax2.set_title("After removing modes 0 and 1")
ax2.legend(fontsize=8)

fig.tight_layout()
fig.savefig(os.path.join(OUT, "malthus_convergence.png"), dpi=150)
print("wrote", os.path.join(OUT, "malthus_convergence.png"))
