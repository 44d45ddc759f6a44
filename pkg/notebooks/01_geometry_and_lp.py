"""
Convex bodies, support functions and the LP oracle
==================================================

Bodies answer support-function queries; polytopes route them through the
active-set simplex solver, and a ball constraint is handled by cutting planes.
"""

import numpy as np

from noisy_support import Ball, Box, Polytope, hausdorff_support, sphere_net
from noisy_support.linprog import support_over_polytope_ball

# %% A square as a polytope and as a box agree on every direction
square = Polytope.from_vertices_2d([[-1, -1], [1, -1], [1, 1], [-1, 1]])
box = Box([-1, -1], [1, 1])
U = sphere_net(2, 0.05).directions
print("max support mismatch:", np.max(np.abs(square.support(U) - box.support(U))))

# %% Support over the square clipped to a ball of radius 1.2
A = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
b = np.ones(4)
print("h(1/sqrt2, 1/sqrt2) on square ∩ B(0, 1.2):",
      support_over_polytope_ball((A, b), [0, 0], 1.2, np.array([1, 1]) / np.sqrt(2)))

# %% A certified Hausdorff bracket between the unit disk and the square
br = hausdorff_support(Ball([0, 0], 1), box, sphere_net(2, 0.01), R=np.sqrt(2))
print(f"{br.lower:.5f} <= d_H <= {br.upper:.5f}  (exact {np.sqrt(2) - 1:.5f})")

# %% Uniform samples from a polygon by rejection
rng = np.random.default_rng(0)
tri = Polytope.from_vertices_2d([[0, 0], [1, 0], [0, 1]])
print("triangle sample mean:", tri.sample_uniform(rng, 100_000).mean(axis=0), "(centroid 1/3, 1/3)")
