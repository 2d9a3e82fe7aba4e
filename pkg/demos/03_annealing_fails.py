"""Simulated and quantum annealing struggle on the same instances.

The target sits at the bottom of a narrow well at distance 0, while a
broad local minimum at distance n/2 holds almost all of the states.
Thermal annealing falls into the broad minimum.  A linear quantum anneal
at fixed total time loses success probability quickly as n grows.
"""

from qsep import build_hard_instance, qa_symmetric, sa_success_probability
from qsep.dynamics import AnnealSchedule, qa_statevector
from qsep.sa import default_schedule

print("simulated annealing (default schedule, 300 runs each):")
for n in (2, 6, 10, 20, 30):
    inst = build_hard_instance(n)
    est = sa_success_probability(inst, default_schedule(inst), runs=300)
    print(f"  n={n:2d}: {est.successes:3d}/300 successes, 95% interval [{est.wilson_low:.4f}, {est.wilson_high:.4f}]")

print("\nquantum annealing, T=20, 4000 steps (symmetric subspace):")
for n in (8, 16, 32, 64):
    print(f"  n={n:2d}: success probability {qa_symmetric(build_hard_instance(n)):.3e}")

# The full 2^n simulation agrees with the reduced one.
short = AnnealSchedule(2.0, 100)
inst = build_hard_instance(8)
print(f"\nn=8, T=2: symmetric {qa_symmetric(inst, short):.12f}, full space {qa_statevector(inst, short):.12f}")
