"""Orbit summaries, distance profiles and the padded-cycle certificate."""

from fractions import Fraction

import pytest

from cantordyn.cantor import representative
from cantordyn.errors import ResourceBudgetError
from cantordyn.maps import PrefixTableMap
from cantordyn.measures import (
    atomic_measure,
    convex_combine,
    dirac,
    prohorov_distance,
    pushforward,
)
from cantordyn.orbits import (
    PairClass,
    DistanceProfile,
    distance_profile,
    distributional_densities,
    li_yorke_classify,
    lower_density,
    orbit_distance_to_target,
    orbit_summary,
    upper_density,
)
from cantordyn.towers import make_balloon_tower, make_dumbbell_tower

IDENTITY = PrefixTableMap((("", ""),))
SWAP = PrefixTableMap((("0", "1"), ("1", "0")))


def test_orbit_summary_examples():
    assert (orbit_summary(IDENTITY, dirac("01")).preperiod,
            orbit_summary(IDENTITY, dirac("01")).period) == (0, 1)
    summary = orbit_summary(SWAP, dirac(""))
    assert (summary.preperiod, summary.period) == (0, 2)


def test_orbit_summary_balloon_path_dirac():
    tower = make_balloon_tower([(5, 3)], [1])
    comp = tower.levels[0].components[0]
    m = len(comp.loop)
    for j, cell in enumerate(comp.path, start=1):
        summary = orbit_summary(tower.table, dirac(representative(cell)))
        assert summary.preperiod == m - j + 1  # steps to reach the loop
        assert m % summary.period == 0


def test_orbit_summary_budget():
    tower = make_dumbbell_tower((4, 2), 1, bar_length=1)
    bar = dirac(representative(tower.levels[0].components[0].bar[0]))
    # bar orbits never literally repeat under a homeomorphism
    with pytest.raises(ResourceBudgetError):
        orbit_summary(tower.table, bar, budget=60)


def test_distance_profile_examples():
    mu = dirac("0")
    prof = distance_profile(SWAP, mu, mu)
    assert prof.liminf == prof.limsup == 0
    prof = distance_profile(SWAP, dirac(""), dirac("1"))
    assert prof.liminf == prof.limsup == 1
    assert li_yorke_classify(prof) is PairClass.SEPARATED_BELOW


def test_profile_lookup_and_extremes_against_unrolled_orbit():
    tower = make_dumbbell_tower((4, 2), 2, bar_length=1)
    h = tower.table
    comp0, comp1 = tower.levels[0].components
    mu = dirac(representative(comp0.bar[0]))
    nu = convex_combine(
        [
            (Fraction(1, 2), dirac(representative(comp1.left[0]))),
            (Fraction(1, 2), dirac(representative(comp0.right[0]))),
        ]
    )
    prof = distance_profile(h, mu, nu)
    # brute-force unroll well past preperiod + 2 periods
    horizon = prof.preperiod + 3 * prof.period + 2
    a, b = mu, nu
    values = []
    for _ in range(horizon):
        values.append(prohorov_distance(a, b))
        a, b = pushforward(h, a), pushforward(h, b)
    assert values[: len(prof.values)] == list(prof.values)
    assert all(prof.value_at(n) == values[n] for n in range(horizon))
    tail = values[prof.preperiod:]
    assert min(tail) == prof.liminf
    assert max(tail) == prof.limsup


def test_classify_thresholds():
    prof = DistanceProfile((Fraction(0),), 0, 1, "state-cycle")
    assert li_yorke_classify(prof) is PairClass.ASYMPTOTIC
    prof = DistanceProfile((Fraction(1, 2), Fraction(1)), 0, 2, "state-cycle")
    assert li_yorke_classify(prof) is PairClass.SEPARATED_BELOW
    prof = DistanceProfile((Fraction(0), Fraction(1, 2)), 0, 2, "state-cycle")
    assert li_yorke_classify(prof) is PairClass.LI_YORKE_PAIR


def test_upper_density_examples():
    assert upper_density([], [1, 1, 1]) == 1
    assert upper_density([], [0]) == 0
    assert upper_density([1, 1], [1, 0]) == Fraction(1, 2)
    assert lower_density([], [1, 0]) == Fraction(1, 2)


def test_density_complement():
    cycle = [1, 0, 0, 1, 0]
    complement = [1 - b for b in cycle]
    assert upper_density([], cycle) + upper_density([], complement) == 1
    assert upper_density([], complement) == 1 - lower_density([], cycle)


def test_distributional_densities():
    prof = DistanceProfile(
        (Fraction(1), Fraction(0), Fraction(1), Fraction(0)), 0, 4, "state-cycle"
    )
    hi, lo = distributional_densities(prof, Fraction(1, 2), Fraction(1, 4))
    assert hi == Fraction(1, 2)
    assert lo == Fraction(1, 2)


def test_padded_cycle_profile_on_absorbing_orbit():
    tower = make_dumbbell_tower((4, 2), 1, bar_length=1)
    comp = tower.levels[0].components[0]
    mu = dirac(representative(comp.bar[0]))
    nu = dirac(representative(comp.left[0]))
    prof = distance_profile(tower.table, mu, nu)
    assert prof.certificate == "padded-cycle"
    assert li_yorke_classify(prof) is not PairClass.LI_YORKE_PAIR


def test_orbit_distance_to_target_infimum():
    tower = make_dumbbell_tower((4, 2), 2, bar_length=1)
    comp0, comp1 = tower.levels[0].components
    eta = dirac(representative(comp0.left[0]))
    target = dirac(representative(comp0.left[1]))
    prof = orbit_distance_to_target(tower.table, eta, target)
    assert prof.infimum() == 0  # the orbit passes through the target
    far = dirac(representative(comp1.left[0]))
    prof = orbit_distance_to_target(tower.table, eta, far)
    assert prof.infimum() == 1  # never leaves its own component
