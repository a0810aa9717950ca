"""
Directed graphs and push-sum weights
====================================

Each sender splits its mass evenly over itself and its out-neighbors. On an
unbalanced graph the weights y drift away from one, but their sum stays m
and they never fall below delta.
"""

import numpy as np

from uncertain_learning.netgraph import (
    check_b_strong_connectivity,
    delta_bound,
    delta_diagnostic,
    random_b_connected,
    ring_snapshot,
    star_snapshot,
    static,
    weight_matrix,
)

print(weight_matrix(star_snapshot(4)))
print("column sums:", weight_matrix(star_snapshot(4)).sum(axis=0))

for name, seq in [
    ("ring", static(ring_snapshot(8))),
    ("star", static(star_snapshot(8))),
    ("random B=3", random_b_connected(8, 3, seed=2)),
]:
    ok = check_b_strong_connectivity(seq, 300)
    d = delta_diagnostic(seq, 300)
    y = np.ones(8)
    for k in range(300):
        y = seq.weight_matrix(k) @ y
    print(f"{name:>10}: connected={ok}  delta={d:.4f}  bound={delta_bound(8, seq.window):.1e}"
          f"  y={y.round(3)}  sum={y.sum():.12f}")

# one snapshot of the random sequence alone is rarely strongly connected
seq = random_b_connected(8, 3, seed=2)
print(seq.snapshot(0).to_edge_list())
