# %% [markdown]
# # Szegedy number versus the projection bound on two cliques
#
# For the disjoint union of two cliques the projection bound (evaluated at the
# complement) has the closed form `(n1^2 + n2^2) / (n1 + n2)`, while the
# Szegedy number equals the chromatic number `max(n1, n2)`.  This script checks
# the closed form against the solver and looks at how the gap grows.

# %%
import numpy as np

from projtheta.graph import clique_union, complement
from projtheta.theta import (gap_asymptotics, gap_ratio, hat_theta, theta_plus,
                             two_clique_closed_form, worst_case_gap)

# %%
for n1, n2 in [(4, 5), (6, 2), (12, 5)]:
    g = complement(clique_union(n1, n2))
    cert = two_clique_closed_form(n1, n2)
    print(f"({n1},{n2})  that={hat_theta(g):.6f}  closed form={float(cert.value):.6f}  "
          f"theta+={theta_plus(g):.6f}  gap={float(worst_case_gap(n1, n2)):.6f}")

# %% [markdown]
# The optimal matrix has the block form `[[a I, b J], [b J, c I]]`; its Schur
# complement condition is tight.

# %%
cert = two_clique_closed_form(12, 5)
print(cert.alpha, cert.beta, cert.gamma, cert.alpha * cert.gamma == cert.beta ** 2 * 12 * 5)
print("smallest eigenvalue", np.linalg.eigvalsh(cert.matrix())[0])

# %% [markdown]
# With `n2 = mu * n1` the gap is `gap_ratio(mu) * n1`, largest at `mu = sqrt(2) - 1`.

# %%
mus = np.linspace(0.05, 0.95, 19)
for mu in mus[::3]:
    print(f"mu={mu:.2f}  gap/n1={gap_ratio(mu):.5f}")
print(gap_asymptotics())
