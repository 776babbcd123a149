"""First contact: build an instance, test feasibility, solve it exactly.

The scenario: a small undirected network where two of the five links run
through a flaky conduit (faulty), and we may lose any one of them after
committing to a purchase.  We want the cheapest edge set that keeps the
two endpoints connected no matter which single faulty link dies.
"""

from ftpath import build_instance, enumerate_scenarios, is_feasible, solve_1ftp

#       1
#     /   \          edges 0,1: safe detour of total cost 7
#    0     3         edge 2: cheap faulty direct link (cost 2)
#     \   /          edge 3: second faulty direct link (cost 3)
#       2            edge 4: safe spur into the detour (cost 1)
instance = build_instance(
    directed=False, vertex_count=4, s=0, t=3, k=1,
    edges=[
        (0, 1, 4, False),
        (1, 3, 3, False),
        (0, 3, 2, True),
        (0, 3, 3, True),
        (0, 2, 1, False),
    ])

print("failure scenarios (any subset of faulty edges up to size k):")
for scenario in enumerate_scenarios(instance):
    print("   failed =", sorted(scenario.failed) or "nothing")

print()
print("is the cheap faulty link alone enough?",
      is_feasible(instance, {2}))
print("are the two faulty links together enough?",
      is_feasible(instance, {2, 3}))

solution = solve_1ftp(instance)
print()
print("optimal robust purchase:", sorted(solution.edges),
      "cost", solution.cost, "status", solution.status)
print("the two faulty directs (2+3=5) beat the safe detour (4+3=7)")
