"""Periodic measures, refinement consistency, and periodic approximation.

Loop-length-6 balloons host exactly periodic measures of every period
dividing 6.  Their cell masses refine consistently across tower levels,
arbitrarily small transient perturbations leave the chain-recurrent
candidates, and every recurrent measure is approximated by an exactly
invariant one via loop-class averaging.
"""

from fractions import Fraction

from cantordyn import (
    AdmissibleChoice,
    approx_by_periodic,
    atomic_measure,
    consistency_check,
    enumerate_admissible_choices,
    loop_support_check,
    make_balloon_tower,
    periodic_measure,
    prohorov_distance,
    pushforward_iter,
    recurrence_certificate,
    representative,
    transient_perturbation,
)

tower = make_balloon_tower([(5, 3), (7, 3)], [2, 4])
print("tower: loop length", tower.levels[0].loop_length, "at both levels")

print("\n== periodic measures for each divisor of 6 ==")
for p in (1, 2, 3, 6):
    mu = periodic_measure(tower, AdmissibleChoice((0, 0), period=p), level=0)
    moved = [pushforward_iter(tower.table, mu, j) != mu for j in range(1, p)]
    print(f"period {p}: {len(mu.atoms)} atoms of mass {mu.atoms[0][1]}, "
          f"returns after {p} steps, moves before that: {all(moved)}")

print("\n== distinct nested choices give distinct measures ==")
choices = enumerate_admissible_choices(tower, period=2)
measures = [periodic_measure(tower, c, level=1) for c in choices]
gaps = sorted({prohorov_distance(a, b) for i, a in enumerate(measures) for b in measures[i + 1:]})
print(f"{len(measures)} period-2 measures, pairwise gaps in {gaps}")

print("\n== the fine level aggregates exactly to the coarse one ==")
cert = consistency_check(tower, choices[0], 0, 1)
print(cert.verdict)

print("\n== recurrence and its fragility ==")
mu = periodic_measure(tower, AdmissibleChoice((0,), period=2), level=0)
print("loop support:", loop_support_check(tower, mu).verdict)
print("return distance:", recurrence_certificate(tower, mu, Fraction(1, 4)).witnesses["distance"])
mu_lam, cert = transient_perturbation(tower, mu, Fraction(1, 8))
print("after mixing 1/8 of transient mass:", cert.verdict,
      "| moved by", cert.witnesses["distance"])

print("\n== approximating a recurrent measure by an invariant one ==")
# nearly 2-invariant: alternating masses on the loop, plus a tiny imbalance
loop = tower.levels[0].components[0].loop
imbalance = Fraction(1, 20000)
masses = {representative(c): Fraction(1, 4) if i % 2 else Fraction(1, 12)
          for i, c in enumerate(loop)}
masses[representative(loop[0])] += imbalance
masses[representative(loop[2])] -= imbalance
mu = atomic_measure(masses)
mu_prime, cert = approx_by_periodic(tower, mu, Fraction(1, 4))
print("return time:", cert.parameters["return_time"],
      "| distance moved by the class averaging:", cert.witnesses["distance"])
print("exactly invariant:",
      pushforward_iter(tower.table, mu_prime, cert.parameters["return_time"]) == mu_prime)
