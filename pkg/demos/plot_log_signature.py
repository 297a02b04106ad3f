"""
Log-signatures in the Lyndon basis
==================================

The logarithm of a signature is a Lie series. Its coordinates in the
Lyndon bracket basis are a compact, redundancy-free summary of the path.
"""

import numpy as np

from loopsig import (
    LyndonBasis,
    PiecewiseLinearPath,
    TensorSeries,
    is_group_like,
    log_signature_coords,
    lyndon_words,
    path_signature,
    ts_exp,
)

# Lyndon words over two letters, shortest first
print([''.join(map(str, w)) for w in lyndon_words(2, 4)])

# the square loop: the only nonzero coordinate at depth 2 is the area bracket [1,2]
square = PiecewiseLinearPath([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
logsig = log_signature_coords(path_signature(square, 2))
print({''.join(map(str, w)): round(v, 12) for w, v in logsig.coords.items()})
print("residual:", logsig.residual)

# a random Lie element survives the trip through exp and back to coordinates
rng = np.random.default_rng(1)
basis = LyndonBasis.build(3, 4)
coords = {w: rng.normal() for w in basis.words}
back = log_signature_coords(ts_exp(basis.combine(coords)))
print("round-trip error:", max(abs(back[w] - c) for w, c in coords.items()))

# signatures satisfy the shuffle identity; an arbitrary series does not
print("signature group-like:", bool(is_group_like(path_signature(square, 4))))
bumped = path_signature(square, 4) + TensorSeries.from_words(2, 4, {"11": 0.1})
check = is_group_like(bumped)
print("perturbed group-like:", bool(check), "witness:", check.witness)
