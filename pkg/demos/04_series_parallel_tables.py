"""Series-parallel graphs: one pass, optimal answers for every budget.

On graphs built from single edges by series and parallel composition,
the table solver returns optima for all budgets 0..k in one bottom-up
sweep over the decomposition tree.  Decomposition is automatic, or an
explicit expression (e<id>, S(a,b), P(a,b)) can be supplied.
"""

from ftpath import (build_instance, decompose_srp, parse_decomposition,
                    solve_ftp_srp)
from ftpath.srp import format_decomposition

# Two stages in series; each stage is a bundle of parallel links.
#   stage 1 (0 -> 1): three faulty links, costs 1, 2, 4
#   stage 2 (1 -> 2): one safe link (cost 5) parallel to faulty (cost 1)
instance = build_instance(
    False, 3, 0, 2, 2,
    edges=[
        (0, 1, 1, True), (0, 1, 2, True), (0, 1, 4, True),
        (1, 2, 5, False), (1, 2, 1, True),
    ])

tree = decompose_srp(instance)
print("recognized decomposition:", format_decomposition(tree))

table = solve_ftp_srp(instance, tree)
for budget, entry in enumerate(table.entries):
    if entry is None:
        print(f"budget {budget}: infeasible")
    else:
        print(f"budget {budget}: edges {sorted(entry[0])} cost {entry[1]}")

print()
print("same thing from an explicit decomposition text:")
explicit = parse_decomposition("S(P(P(e0,e1),e2), P(e3,e4))", instance)
print("cost at full budget:", solve_ftp_srp(instance, explicit).cost(2))
