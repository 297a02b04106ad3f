"""
Signatures of piecewise-linear paths
====================================

Build a few paths, compute their truncated signatures, and see which
features of the path each level records.
"""

import numpy as np

from loopsig import PiecewiseLinearPath, path_concat, path_inverse, path_signature

# a unit square traversed counterclockwise, starting at the origin
square = PiecewiseLinearPath([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
sig = path_signature(square, 3)

# level 1 is the total increment, zero for a closed loop
print("level 1:", sig.levels[1])

# level 2 holds twice the signed area in its antisymmetric part
print("level 2:", sig.level_tensor(2))
print("signed area:", 0.5 * (sig["12"] - sig["21"]))

# reparametrizing (here: adding a vertex mid-segment) changes nothing
print("subdivided equal:", path_signature(square.subdivide(0, 0.3), 3).allclose(sig))

# going out and coming back is invisible to the signature
rng = np.random.default_rng(0)
walk = PiecewiseLinearPath(np.cumsum(rng.normal(size=(6, 3)), axis=0))
there_and_back = path_concat(walk, path_inverse(walk))
print("mass of walk * walk^-1 above level 0:",
      float(np.abs(path_signature(there_and_back, 4).flat()[1:]).sum()))

# the dense coefficient layout is the C-order index of the level tensor
print("coefficient of 121:", path_signature(walk, 3)["121"])
