"""Exact solving on a directed acyclic graph, across failure budgets.

The solver stretches the DAG into layers (long edges become zero-cost
chains), enumerates per-layer demand vectors summing to k+1, and runs a
shortest path over those configurations.  Here a small supply network is
solved at budgets 0..2 to show how the purchase hardens as we insure
against more simultaneous failures.
"""

from ftpath import Infeasible, build_instance, layerize, solve_kftp_dag

# A 6-vertex shipping DAG: cheap faulty hops, pricier safe backbone.
edges = [
    (0, 1, 1, True),    # 0
    (0, 1, 1, True),    # 1
    (0, 2, 3, False),   # 2
    (1, 3, 1, True),    # 3
    (1, 3, 1, True),    # 4
    (2, 3, 2, False),   # 5
    (3, 5, 1, True),    # 6
    (3, 5, 1, True),    # 7
    (3, 5, 1, True),    # 8
    (0, 4, 2, False),   # 9
    (4, 5, 9, False),   # 10
]

for k in (0, 1, 2):
    instance = build_instance(True, 6, 0, 5, k, edges)
    try:
        solution = solve_kftp_dag(instance)
        print(f"k={k}: buy {sorted(solution.edges)} for {solution.cost}")
    except Infeasible:
        print(f"k={k}: infeasible")

instance = build_instance(True, 6, 0, 5, 1, edges)
layered = layerize(instance)
print()
print("layer sizes after stretching:", [len(layer) for layer in layered.layers])
print("layered edges:", len(layered.edges),
      "(chains keep the original cost on their first hop only)")
