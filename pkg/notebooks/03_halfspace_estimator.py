"""
Estimating a disk from noisy samples
====================================

Directional maxima minus the noise bias give M halfspaces; their intersection,
clipped to a ball around the sample mean, estimates the body.
"""

import numpy as np

from noisy_support import (Ball, EstimatorConfig, GaussianNoise, build_estimator,
                           choose_M, sphere_net)
from noisy_support.estimator import hausdorff_to_body, simulate_cloud

rng = np.random.default_rng(2)
G = Ball([0.0, 0.0], 1.0)
noise = GaussianNoise(0.01)
net = sphere_net(2, 0.01)
for n in (10 ** 3, 10 ** 4, 10 ** 5):
    Y = simulate_cloud(G, n, noise, rng)
    est = build_estimator(Y, EstimatorConfig(2, noise, "auto", n=n), rng)
    br, R = hausdorff_to_body(est, G, net)
    print(f"n={n:>6}: M={est.M:>3} (choose_M={choose_M(n, 0.01, 2)}), d_H in [{br.lower:.4f}, {br.upper:.4f}]")

# %% Membership queries cost one pass over the halfspaces
print("origin inside:", est.membership(np.zeros(2)), "| (2, 0) inside:", est.membership(np.array([2.0, 0.0])))
