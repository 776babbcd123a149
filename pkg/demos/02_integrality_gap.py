"""The fractional relaxation and how far it can sit below the integer optimum.

Allowing fractional capacities x in [0,1] (each post-failure max flow
must stay >= 1) can be cheaper than buying whole edges.  The worst case
is the parallel-edge family: D faulty unit edges between s and t.  The
integral optimum must buy k+1 edges; the relaxation spreads capacity
1/(D-k) over all of them and pays only D/(D-k).  The ratio climbs toward
k+1 as D grows, and never beyond: scaling any fractional solution by k+1
(clipped at 1 on faulty edges) supports an integral k+1-unit flow whose
support is feasible.
"""

from fractions import Fraction

from ftpath import brute_force_opt, gap_family, rounding_vector, solve_frac

k = 2
print(f"budget k = {k}; D parallel faulty unit edges")
print(f"{'D':>4} {'fractional':>12} {'integral':>9} {'ratio':>8} {'toward':>7}")
for d in (3, 4, 6, 10, 20, 50, 100):
    instance = gap_family(d, k)
    frac = solve_frac(instance)
    integral = brute_force_opt(instance, edge_cap=d).best
    ratio = Fraction(integral.cost) / frac.value
    print(f"{d:>4} {str(frac.value):>12} {integral.cost:>9} "
          f"{str(ratio):>8} {float(ratio):>7.3f}")

print()
print("limit of the ratio is k+1 =", k + 1)

instance = gap_family(4, 1)
frac = solve_frac(instance)
print()
print("rounding certificate for D=4, k=1: x =", [str(x) for x in frac.x])
print("scaled vector y =", [str(y) for y in rounding_vector(frac, instance)],
      "-- every s-t cut now carries at least k+1 = 2")
