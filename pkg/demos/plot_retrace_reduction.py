"""
Retrace reduction
=================

Cancelling immediate backtracks gives a canonical representative of a
path up to tree-like pieces, both for words in edge labels and for
piecewise-linear paths.
"""

from loopsig import (
    EdgePath,
    PiecewiseLinearPath,
    geometric_retrace_reduce,
    is_tree_like_edge_path,
    path_signature,
    retrace_reduce,
)

for text in ("a b b' a'", "a b a' b'", "c a b b' a' c' d"):
    w = EdgePath.parse(text)
    print(f"{text!r:22} -> {str(retrace_reduce(w))!r:10} tree-like: {is_tree_like_edge_path(w)}")

# edges may carry endpoints; then only composable words are accepted
edges = {"e": ("p", "q"), "f": ("q", "r")}
print("e f f' e' ->", repr(str(retrace_reduce(EdgePath.parse("e f f' e'", edges)))))

# a walk with a spike: the excursion to (2, 1) and back is removed
walk = PiecewiseLinearPath([(0, 0), (1, 0), (2, 1), (1, 0), (1, 1)])
reduced = geometric_retrace_reduce(walk)
print(reduced)
print("same signature:", path_signature(reduced, 4).allclose(path_signature(walk, 4)))
