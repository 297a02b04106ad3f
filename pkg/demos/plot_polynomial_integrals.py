"""
Iterated integrals of polynomial one-forms
==========================================

Any iterated integral of polynomial one-forms along a path is a fixed
linear combination of signature coefficients. Reduce symbolically once,
then evaluate on any path with the same start point.
"""

import numpy as np

from loopsig import (
    MonomialOneForm,
    PiecewiseLinearPath,
    iterated_integral,
    reduce_polynomial_integral,
)

# x dy followed by y^2 dx, on paths in the plane starting at (1, 0)
forms = [MonomialOneForm((1, 0), 1, 2), MonomialOneForm((0, 2), 1, 1)]
combo = reduce_polynomial_integral(forms, basepoint=(1, 0))
print(combo.to_dict())

rng = np.random.default_rng(2)
for _ in range(3):
    steps = rng.normal(size=(4, 2))
    path = PiecewiseLinearPath(np.vstack([[1, 0], [1, 0] + np.cumsum(steps, axis=0)]))
    print("reduced:", combo.evaluate_on(path), " quadrature:", iterated_integral(path, forms))

# a single closed form: x dy around the unit square is its area
square = PiecewiseLinearPath([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
print("area:", iterated_integral(square, [MonomialOneForm((1, 0), 1, 2)]))
