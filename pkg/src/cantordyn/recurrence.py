"""Periodic measures from nested component choices, loop-support checks,
recurrence certificates, and periodic approximation of recurrent measures.

A periodic measure is built from an *admissible choice*: one component per
certified tower level, each initial vertex nested in its predecessor's,
together with a loop offset t and a period p dividing the loop length.  The
measure puts mass p/m on the loop cells at positions t, t+p, ... (m the
loop length of the chosen level); its cell masses refine consistently
across levels, and on towers whose loop length is constant the measure is
exactly p-periodic under the induced map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .cantor import representative
from .certs import Certificate
from .errors import ParameterError, ResourceBudgetError
from .measures import (
    AtomicMeasure,
    atomic_measure,
    cell_masses,
    convex_combine,
    dirac,
    prohorov_distance,
    pushforward,
    pushforward_iter,
)
from .orbits import orbit_summary
from .towers import BalloonComponent, DumbbellComponent, MapTower


@dataclass(frozen=True)
class AdmissibleChoice:
    """A nested component selection with a loop offset and period.

    ``components[k]`` indexes a component of tower level k; each must be a
    child of the previous one.  ``loop`` selects which loop carries the mass
    on dumbbell towers ("right" or "left"); offset is 1-based.
    """

    components: tuple[int, ...]
    offset: int = 1
    period: int = 1
    loop: str = "right"


def _loop_cells(component, which: str) -> tuple[str, ...]:
    if isinstance(component, BalloonComponent):
        return component.loop
    if isinstance(component, DumbbellComponent):
        return component.right if which == "right" else component.left
    raise ParameterError(f"unsupported component type {type(component).__name__}")


def _validate_choice(tower: MapTower, choice: AdmissibleChoice) -> None:
    if not 1 <= len(choice.components) <= len(tower.levels):
        raise ParameterError("choice must select components for a prefix of the levels")
    prev = None
    for k, ci in enumerate(choice.components):
        comps = tower.levels[k].components
        if not 0 <= ci < len(comps):
            raise ParameterError(f"no component {ci} at level {k}")
        if prev is not None and comps[ci].parent != prev:
            raise ParameterError("choice components are not nested (parent mismatch)")
        prev = ci
    if choice.loop not in ("right", "left"):
        raise ParameterError("loop must be 'right' or 'left'")
    if choice.loop == "left" and tower.kind != "dumbbell":
        raise ParameterError("left loops exist only on dumbbell towers")


def periodic_measure(tower: MapTower, choice: AdmissibleChoice, level: int) -> AtomicMeasure:
    """The level truncation of the choice's periodic measure.

    Mass p/m on loop cells at positions offset, offset+p, ... (1-based,
    wrapping), atoms at cell representatives.  The result is verified to be
    exactly p-periodic under the induced map and an error is raised if it is
    not (this needs equal loop lengths at and below the chosen level).
    """
    _validate_choice(tower, choice)
    if not 0 <= level < len(choice.components):
        raise ParameterError("level must index a chosen component")
    m = tower.levels[level].loop_length
    p, t = choice.period, choice.offset
    if p < 1 or m % p != 0:
        raise ParameterError(f"period {p} does not divide the loop length {m}")
    if not 1 <= t <= m:
        raise ParameterError(f"offset {t} outside 1..{m}")
    comp = tower.levels[level].components[choice.components[level]]
    loop = _loop_cells(comp, choice.loop)
    mu = atomic_measure(
        {
            representative(loop[(t - 1 + j * p) % m]): Fraction(p, m)
            for j in range(m // p)
        }
    )
    push = pushforward_iter(tower.table, mu, p)
    if push != mu:
        raise ParameterError(
            "measure is not exactly periodic at this level; the tower's loop "
            "lengths must be constant at and below the chosen level"
        )
    for j in range(1, p):
        if pushforward_iter(tower.table, mu, j) == mu:
            raise ParameterError(f"period is not exact: invariant already under {j} steps")
    return mu


def enumerate_admissible_choices(
    tower: MapTower, period: int, depth: int | None = None, loops: tuple[str, ...] = ("right",)
) -> list[AdmissibleChoice]:
    """All nested component chains of the given depth with all offsets in
    1..period; distinct choices yield pairwise distinct periodic measures."""
    depth = len(tower.levels) if depth is None else depth
    chains: list[tuple[int, ...]] = [(i,) for i in range(len(tower.levels[0].components))]
    for k in range(1, depth):
        comps = tower.levels[k].components
        chains = [
            chain + (ci,)
            for chain in chains
            for ci, comp in enumerate(comps)
            if comp.parent == chain[-1]
        ]
    return [
        AdmissibleChoice(components=chain, offset=t, period=period, loop=which)
        for chain, t, which in product(chains, range(1, period + 1), loops)
    ]


def consistency_check(
    tower: MapTower, choice: AdmissibleChoice, level_lo: int, level_hi: int
) -> Certificate:
    """The finer level's measure must aggregate exactly to the coarser one.

    Compares the coarse-partition cell masses of the fine truncation with
    those of the coarse truncation; exact equality is required.
    """
    if not 0 <= level_lo < level_hi < len(tower.levels):
        raise ParameterError("need two certified levels with level_lo < level_hi")
    coarse = tower.levels[level_lo].partition()
    mu_lo = periodic_measure(tower, choice, level_lo)
    mu_hi = periodic_measure(tower, choice, level_hi)
    masses_lo = cell_masses(mu_lo, coarse)
    masses_hi = cell_masses(mu_hi, coarse)
    diffs = {
        c: (masses_lo[c], masses_hi[c])
        for c in coarse.cells
        if masses_lo[c] != masses_hi[c]
    }
    return Certificate(
        operation="consistency_check",
        passed=not diffs,
        verdict="refinement_consistent" if not diffs else "refinement_inconsistent",
        parameters={
            "levels": [level_lo, level_hi],
            "period": choice.period,
            "offset": choice.offset,
        },
        witnesses={"mismatched_cells": diffs},
        details={"coarse_masses": {c: masses_lo[c] for c in coarse.cells}},
    )


def _transient_cells(tower: MapTower, level: int) -> list[tuple[str, str]]:
    """Cells that chain-recurrent measures must not charge: balloon paths,
    dumbbell bars."""
    out = []
    for comp in tower.levels[level].components:
        if isinstance(comp, BalloonComponent):
            out.extend(("path", c) for c in comp.path)
        else:
            out.extend(("bar", c) for c in comp.bar)
    return out


def loop_support_check(
    tower: MapTower, mu: AtomicMeasure, level: int = 0, preimage_horizon: int | None = None
) -> Certificate:
    """Necessary condition for chain recurrence of the induced map: zero
    mass on every transient cell.

    On dumbbell towers the preimages h^{-n} of the first bar cells must also
    carry zero mass, up to a horizon defaulting to bar length plus plate
    weight (beyond it those preimages recede into the left loops).
    """
    violations = []
    for kind, cell in _transient_cells(tower, level):
        mass = mu.mass_of_cylinders([cell])
        if mass != 0:
            violations.append({"cell": cell, "kind": kind, "mass": mass})
    if tower.kind == "dumbbell":
        level_obj = tower.levels[level]
        if preimage_horizon is None:
            bar_max = max(len(c.bar) for c in level_obj.components)
            preimage_horizon = bar_max + level_obj.loop_length
        for comp in level_obj.components:
            region = (comp.bar[0],)
            for n in range(1, preimage_horizon + 1):
                pieces = []
                for cyl in region:
                    pieces.extend(tower.table.preimage_cylinders(cyl))
                region = tuple(pieces)
                mass = mu.mass_of_cylinders(region)
                if mass != 0:
                    violations.append(
                        {"cell": comp.bar[0], "kind": f"preimage_{n}", "mass": mass}
                    )
                    break
    return Certificate(
        operation="loop_support_check",
        passed=not violations,
        verdict="loop_supported" if not violations else "transient_mass_found",
        parameters={"level": level},
        witnesses={"violations": violations},
        details={},
    )


def recurrence_certificate(
    tower: MapTower, mu: AtomicMeasure, eps: Fraction, backend: str = "auto"
) -> Certificate:
    """d(f~^{m}(mu), mu) < eps at the first level of mesh below eps, m the
    level's loop length; requires a loop-supported measure."""
    eps = Fraction(eps)
    support = loop_support_check(tower, mu)
    if not support.passed:
        raise ParameterError("measure charges transient cells; recurrence check declined")
    level = tower.level_with_mesh_below(eps)
    m = tower.levels[level].loop_length
    dist = prohorov_distance(pushforward_iter(tower.table, mu, m), mu, backend)
    return Certificate(
        operation="recurrence_certificate",
        passed=dist < eps,
        verdict="returns_within_eps" if dist < eps else "return_too_far",
        parameters={"eps": eps, "level": level, "power": m},
        witnesses={"distance": dist},
        details={},
    )


def transient_perturbation(
    tower: MapTower, mu: AtomicMeasure, lam: Fraction, backend: str = "auto"
) -> tuple[AtomicMeasure, Certificate]:
    """Mix lambda of a transient unit mass into mu.

    The perturbed measure is within lambda of mu (verified exactly) and
    fails the loop-support check with at least lambda of transient mass:
    arbitrarily small perturbations leave the chain-recurrent candidates.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ParameterError("lambda must lie strictly between 0 and 1")
    comp = tower.levels[0].components[0]
    if isinstance(comp, BalloonComponent):
        if len(comp.path) < 2:
            raise ParameterError(
                "perturbation needs a path of length at least 2 so the mass "
                "lands in a transient cell"
            )
        # image of the initial vertex's representative: sits in the second path cell
        z = tower.table.apply(representative(comp.path[0]))
        target_cell = comp.path[1]
    else:
        z = representative(comp.bar[0])
        target_cell = comp.bar[0]
    mu_lam = convex_combine([(1 - lam, mu), (lam, dirac(z))])
    dist = prohorov_distance(mu_lam, mu, backend)
    support = loop_support_check(tower, mu_lam)
    bar_mass = mu_lam.mass_of_cylinders([target_cell])
    passed = dist <= lam and not support.passed and bar_mass >= lam
    cert = Certificate(
        operation="transient_perturbation",
        passed=passed,
        verdict="leaves_recurrent_set" if passed else "perturbation_inconclusive",
        parameters={"lambda": lam},
        witnesses={
            "distance": dist,
            "transient_cell": target_cell,
            "transient_mass": bar_mass,
        },
        details={"support_verdict": support.verdict},
    )
    return mu_lam, cert


@dataclass(frozen=True)
class LoopDecomposition:
    """Per component: the loop split into classes closed under stepping the
    return time, with the measure's class sums."""

    component: int
    loop: str
    class_cells: tuple[tuple[str, ...], ...]
    class_sums: tuple[Fraction, ...]
    class_size: int


def _loop_classes(loop_cells: tuple[str, ...], p: int) -> list[tuple[int, ...]]:
    m = len(loop_cells)
    g = gcd(p, m)
    return [tuple((r + t * p) % m for t in range(m // g)) for r in range(g)]


def approx_by_periodic(
    tower: MapTower,
    mu: AtomicMeasure,
    eps: Fraction,
    return_time: int | None = None,
    budget: int = 400,
    backend: str = "auto",
) -> tuple[AtomicMeasure, Certificate]:
    """Build an exactly invariant measure within eps of a recurrent one.

    Finds a return time p with d(f~^p(mu), mu) below the level modulus,
    splits every loop into classes closed under p steps, and replaces mu on
    each class by its average.  The result is exactly invariant under p
    steps of the induced map and provably within eps of mu.
    """
    eps = Fraction(eps)
    support = loop_support_check(tower, mu)
    if not support.passed:
        raise ParameterError("measure charges transient cells; approximation declined")
    level = tower.level_with_mesh_below(eps)
    level_obj = tower.levels[level]
    partition = level_obj.partition()
    m = level_obj.loop_length
    delta = min(partition.min_gap(), partition.mesh() / (2 * m * len(partition)))
    f = tower.table

    if return_time is None:
        summary = orbit_summary(f, mu, budget)
        candidates = range(1, summary.preperiod + 2 * summary.period + 1)
        return_time = next(
            (
                p
                for p in candidates
                if prohorov_distance(pushforward_iter(f, mu, p), mu, backend) < delta
            ),
            None,
        )
        if return_time is None:
            raise ResourceBudgetError("no return time within the orbit budget")
    p = return_time
    return_dist = prohorov_distance(pushforward_iter(f, mu, p), mu, backend)
    if not return_dist < delta:
        raise ParameterError(f"return distance {return_dist} is not below the modulus {delta}")

    masses = cell_masses(mu, partition)
    pieces: list[tuple[Fraction, AtomicMeasure]] = []
    decompositions = []
    loops = ("right", "left") if tower.kind == "dumbbell" else ("right",)
    for ci, comp in enumerate(level_obj.components):
        for which in loops:
            cells = _loop_cells(comp, which)
            classes = _loop_classes(cells, p)
            k = len(classes[0])
            sums = []
            for cls in classes:
                cls_cells = tuple(cells[i] for i in cls)
                total = sum((masses[c] for c in cls_cells), Fraction(0))
                sums.append(total)
                if total:
                    uniform = atomic_measure(
                        {representative(c): Fraction(1, k) for c in cls_cells}
                    )
                    pieces.append((total, uniform))
            decompositions.append(
                LoopDecomposition(
                    component=ci,
                    loop=which,
                    class_cells=tuple(
                        tuple(cells[i] for i in cls) for cls in classes
                    ),
                    class_sums=tuple(sums),
                    class_size=k,
                )
            )
    mu_prime = convex_combine(pieces)
    if pushforward_iter(f, mu_prime, p) != mu_prime:
        raise ParameterError("constructed measure is not exactly invariant")
    dist = prohorov_distance(mu_prime, mu, backend)
    mesh = partition.mesh()
    bound = mesh / len(partition)
    masses_prime = cell_masses(mu_prime, partition)
    cellwise_ok = all(
        abs(masses_prime[c] - masses[c]) <= bound for c in partition.cells
    )
    passed = dist < eps and cellwise_ok
    cert = Certificate(
        operation="approx_by_periodic",
        passed=passed,
        verdict="approximated" if passed else "approximation_failed",
        parameters={"eps": eps, "level": level, "return_time": p, "modulus": delta},
        witnesses={"distance": dist, "return_distance": return_dist},
        details={
            "cellwise_bound": bound,
            "cellwise_ok": cellwise_ok,
            "classes": [
                {
                    "component": d.component,
                    "loop": d.loop,
                    "class_size": d.class_size,
                    "class_sums": list(d.class_sums),
                }
                for d in decompositions
            ],
        },
    )
    return mu_prime, cert
