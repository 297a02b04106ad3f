"""
Holonomy as a signature
=======================

Transporting along a path with the universal connection reproduces the
signature. Integrating the transport equation with RK4 shows fourth-order
convergence toward the exact product of segment exponentials.
"""

import numpy as np
from numpy.linalg import det

from loopsig import (
    MatrixConnection,
    PiecewiseLinearPath,
    holonomy_matrix,
    holonomy_truncated,
    path_signature,
    picard_partial_sum,
    signature_distance,
)

square = PiecewiseLinearPath([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
sig = path_signature(square, 4)

# with the smooth time profile the step-halving ratio approaches 2^4 = 16
for steps in (16, 32, 64, 128):
    res = holonomy_truncated(square, 4, steps, profile="smooth")
    print(steps, "steps: distance", signature_distance(res.value, sig), "order", res.order)

# a matrix-valued connection: traceless forms keep the determinant at 1
a1 = np.array([[0.3, 1.0], [-0.5, -0.3]])
a2 = np.array([[0.0, -0.4], [0.8, 0.0]])
conn = MatrixConnection.constant([a1, a2])
hol = holonomy_matrix(conn, square, 64)
print("holonomy:\n", hol.value, "\ndet:", det(hol.value))

# the Picard series converges to the same matrix; the tail shrinks factorially
for q in (2, 4, 6, 8, 10):
    print("Picard order", q, "error", np.abs(picard_partial_sum(conn, square, q) - hol.value).max())
