"""Certificates for chain behaviour, equicontinuity, entropy and shadowing.

Every check here returns a :class:`~cantordyn.certs.Certificate` whose
payload carries exact rationals only.  Chains are verified step by step
with the exact Prohorov solver, never assumed from the construction that
produced them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cantor import cell_distance, representative
from .certs import Certificate
from .errors import CertificationError, ParameterError
from .maps import PrefixTableMap, eventual_image, graph_of
from .measures import (
    AtomicMeasure,
    convex_combine,
    dirac,
    prohorov_distance,
    pushforward,
    pushforward_iter,
)
from .orbits import DistanceProfile, distance_profile, orbit_distance_to_target
from .towers import MapTower


# ---------------------------------------------------------------------------
# delta-chains between measures


@dataclass(frozen=True)
class Chain:
    """A verified delta-chain: d(f~(points[n]), points[n+1]) < delta for all n."""

    points: tuple[AtomicMeasure, ...]
    delta: Fraction
    step_distances: tuple[Fraction, ...]

    @property
    def length(self) -> int:
        return len(self.points) - 1


def verify_chain(f: PrefixTableMap, points, delta: Fraction, backend: str = "auto") -> Chain:
    """Independent step verification with the exact solver; raises on failure."""
    pts = tuple(points)
    dists = []
    for a, b in zip(pts, pts[1:]):
        d = prohorov_distance(pushforward(f, a), b, backend)
        if not d < delta:
            raise CertificationError(f"chain step distance {d} is not below {delta}")
        dists.append(d)
    return Chain(pts, Fraction(delta), tuple(dists))


def largest_fraction_below(delta: Fraction, max_denominator: int) -> Fraction:
    """The largest p/q < delta with q <= max_denominator."""
    best = Fraction(0)
    for q in range(1, max_denominator + 1):
        p = (delta.numerator * q - 1) // delta.denominator
        if p >= 1 and Fraction(p, q) > best:
            best = Fraction(p, q)
    return best


def default_gamma(delta: Fraction) -> Fraction:
    """Canonical mixing step below delta: the largest fraction under delta
    with denominator at most twice delta's."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ParameterError("delta must lie strictly between 0 and 1")
    gamma = largest_fraction_below(delta, 2 * delta.denominator)
    assert 0 < gamma < delta
    return gamma


def chain_step_count(delta: Fraction, gamma: Fraction | None = None) -> int:
    """The least k0 with (k0 - 1) * gamma < 1 <= k0 * gamma.

    Depends only on delta once gamma is derived canonically from it.
    """
    gamma = default_gamma(delta) if gamma is None else Fraction(gamma)
    k0 = -((-gamma.denominator) // gamma.numerator)  # ceil(1/gamma)
    assert (k0 - 1) * gamma < 1 <= k0 * gamma
    return k0


def chain_connect_map(
    f: PrefixTableMap,
    mu: AtomicMeasure,
    nu: AtomicMeasure,
    delta: Fraction,
    k: int,
    gamma: Fraction | None = None,
    backend: str = "auto",
) -> Chain:
    """A verified delta-chain of length k from mu that ends exactly at the
    k-th pushforward of nu.

    Interpolates (1 - j*gamma) f~^j(mu) + j*gamma f~^j(nu) until the mixing
    weight reaches 1, jumps to the pure nu orbit, then follows it exactly.
    """
    delta = Fraction(delta)
    gamma = default_gamma(delta) if gamma is None else Fraction(gamma)
    if not 0 < gamma < delta:
        raise ParameterError("gamma must lie strictly between 0 and delta")
    k0 = chain_step_count(delta, gamma)
    if k < k0:
        raise ParameterError(f"chain length {k} is below the minimum {k0}")
    points = [mu]
    mu_j, nu_j = mu, nu
    for j in range(1, k0):
        mu_j, nu_j = pushforward(f, mu_j), pushforward(f, nu_j)
        points.append(convex_combine([(1 - j * gamma, mu_j), (j * gamma, nu_j)]))
    nu_j = pushforward(f, nu_j)
    points.append(nu_j)
    for _ in range(k0 + 1, k + 1):
        nu_j = pushforward(f, nu_j)
        points.append(nu_j)
    chain = verify_chain(f, points, delta, backend)
    if chain.points[-1] != pushforward_iter(f, nu, k):
        raise CertificationError("chain endpoint is not the exact image of nu")
    return chain


def chain_connect_homeo(
    h: PrefixTableMap,
    mu: AtomicMeasure,
    nu: AtomicMeasure,
    delta: Fraction,
    k: int,
    gamma: Fraction | None = None,
    backend: str = "auto",
) -> Chain:
    """A verified delta-chain from mu ending exactly at nu, for invertible h."""
    h_inv = h.invert()
    nu_pre = pushforward_iter(h_inv, nu, k)
    chain = chain_connect_map(h, mu, nu_pre, delta, k, gamma, backend)
    if chain.points[-1] != nu:
        raise CertificationError("homeomorphism chain endpoint is not exactly nu")
    return chain


# ---------------------------------------------------------------------------
# equicontinuity of the induced map (balloon towers)


def equicontinuity_modulus(partition) -> Fraction:
    """min{gap, mesh / (2 card)} for a partition: the uniform modulus that
    controls every forward distance of the induced map on a balloon tower."""
    mesh = partition.mesh()
    return min(partition.min_gap(), mesh / (2 * len(partition)))


def sample_modulus_pairs(
    tower: MapTower, eps: Fraction, count: int, rng, resolution: int = 8
) -> list[tuple[AtomicMeasure, AtomicMeasure]]:
    """Random measure pairs within the equicontinuity modulus of the level
    whose mesh is below eps: nu = (1 - a) mu + a eta with a < delta."""
    from .grids import random_cell_measure

    level = tower.level_with_mesh_below(Fraction(eps))
    partition = tower.levels[level].partition()
    delta = equicontinuity_modulus(partition)
    pairs = []
    for _ in range(count):
        mu = random_cell_measure(partition, rng, resolution)
        eta = random_cell_measure(partition, rng, resolution)
        alpha = delta * Fraction(rng.randint(1, 7), 8)
        nu = convex_combine([(1 - alpha, mu), (alpha, eta)])
        pairs.append((mu, nu))
    return pairs


def equicontinuity_certificate(
    tower: MapTower,
    eps: Fraction,
    pairs: list[tuple[AtomicMeasure, AtomicMeasure]],
    budget: int = 400,
) -> Certificate:
    """Verify sup_n d(f~^n mu, f~^n nu) < eps for pairs within the modulus.

    The supremum over all n >= 0 is exact: each pair orbit is certified
    eventually periodic and the maximum is taken over one full cycle.
    Pairs must satisfy d(mu, nu) < delta, delta the partition modulus; this
    is checked, not assumed.
    """
    if tower.kind != "balloon":
        raise ParameterError("equicontinuity certificate applies to balloon towers")
    eps = Fraction(eps)
    level = tower.level_with_mesh_below(eps)
    partition = tower.levels[level].partition()
    delta = equicontinuity_modulus(partition)
    checked = []
    passed = True
    for mu, nu in pairs:
        d0 = prohorov_distance(mu, nu)
        if not d0 < delta:
            raise ParameterError(f"pair at distance {d0} is not within the modulus {delta}")
        prof = distance_profile(tower.table, mu, nu, budget)
        sup = prof.supremum()
        checked.append({"initial": d0, "sup": sup})
        if not sup < eps:
            passed = False
    return Certificate(
        operation="equicontinuity_certificate",
        passed=passed,
        verdict="equicontinuous_at_modulus" if passed else "modulus_violated",
        parameters={"eps": eps, "delta": delta, "level": level, "pairs": len(pairs)},
        witnesses={"max_sup": max((c["sup"] for c in checked), default=Fraction(0))},
        details={"pairs": checked},
    )


# ---------------------------------------------------------------------------
# entropy evidence via separated sets


def _max_clique_size(adj: list[set[int]], n: int) -> int:
    best = 0

    def expand(candidates: set[int], size: int):
        nonlocal best
        if size + len(candidates) <= best:
            return
        if not candidates:
            best = max(best, size)
            return
        pivot = max(candidates, key=lambda v: len(adj[v] & candidates))
        for v in sorted(candidates - adj[pivot]):
            expand(candidates & adj[v], size + 1)
            candidates = candidates - {v}
            if size + len(candidates) <= best:
                return

    expand(set(range(n)), 0)
    return best


def _greedy_separated(adj: list[set[int]], n: int) -> int:
    chosen: list[int] = []
    for v in range(n):
        if all(v in adj[u] for u in chosen):
            chosen.append(v)
    return len(chosen)


@dataclass
class EntropyTable:
    """Counts N(n, eps) of maximum (n, eps)-separated subsets of a grid."""

    grid_size: int
    eps_list: tuple[Fraction, ...]
    horizons: tuple[int, ...]
    counts: dict[tuple[int, Fraction], int]
    exact: bool

    def is_monotone_in_n(self, eps: Fraction) -> bool:
        vals = [self.counts[(n, eps)] for n in self.horizons]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def normalized_log_nonincreasing(self, eps: Fraction) -> bool:
        """(1/n) log N(n) non-increasing, checked as N(n+1)^n <= N(n)^(n+1)."""
        vals = [(n, self.counts[(n, eps)]) for n in self.horizons]
        return all(
            nb ** na <= nav ** nb_
            for (na, nav), (nb_, nb) in zip(vals, vals[1:])
        )

    def slope_zero_at_horizon(self, eps: Fraction) -> bool:
        if len(self.horizons) < 2:
            return False
        n1, n2 = self.horizons[-2], self.horizons[-1]
        return self.counts[(n1, eps)] == self.counts[(n2, eps)]


def entropy_estimate(
    f: PrefixTableMap,
    grid: list[AtomicMeasure],
    eps_list,
    n_max: int,
    budget: int = 400,
    exact_limit: int = 25,
) -> EntropyTable:
    """Maximum sizes of (n, eps)-separated subsets of the grid, for n up to
    n_max; exact (branch and bound) for grids of at most ``exact_limit``
    measures, a greedy lower bound beyond that."""
    eps_list = tuple(Fraction(e) for e in eps_list)
    profiles: dict[tuple[int, int], DistanceProfile] = {}
    for i, j in combinations(range(len(grid)), 2):
        profiles[(i, j)] = distance_profile(f, grid[i], grid[j], budget)
    exact = len(grid) <= exact_limit
    counts: dict[tuple[int, Fraction], int] = {}
    running: dict[tuple[int, int], Fraction] = {k: Fraction(0) for k in profiles}
    for n in range(1, n_max + 1):
        for key, prof in profiles.items():
            running[key] = max(running[key], prof.value_at(n - 1))
        for eps in eps_list:
            adj: list[set[int]] = [set() for _ in grid]
            for (i, j), dn in running.items():
                if dn >= eps:
                    adj[i].add(j)
                    adj[j].add(i)
            if exact:
                counts[(n, eps)] = _max_clique_size(adj, len(grid))
            else:
                counts[(n, eps)] = _greedy_separated(adj, len(grid))
    return EntropyTable(
        grid_size=len(grid),
        eps_list=eps_list,
        horizons=tuple(range(1, n_max + 1)),
        counts=counts,
        exact=exact,
    )


# ---------------------------------------------------------------------------
# chain continuity and transitivity


def chain_continuity_test(
    f: PrefixTableMap,
    depth: int,
    eps: Fraction = Fraction(1, 4),
    delta: Fraction = Fraction(1, 2),
    backend: str = "auto",
) -> Certificate:
    """Decide partition-level chain continuity of the induced map.

    Computes the surviving cell sets at depths 1..depth.  If every level
    survives as a single cell and the cells nest, the map funnels everything
    toward one point and the verdict is chain continuous everywhere.
    Otherwise two verified delta-chains of equal length are produced from
    one starting measure whose endpoints are at least 2*eps apart, refuting
    chain continuity at that point.
    """
    eps, delta = Fraction(eps), Fraction(delta)
    survivors = {d: sorted(eventual_image(f, d)) for d in range(1, depth + 1)}
    singleton = all(len(s) == 1 for s in survivors.values())
    nested = all(
        survivors[d + 1][0].startswith(survivors[d][0]) for d in range(1, depth)
    ) if singleton else False
    if singleton and nested:
        return Certificate(
            operation="chain_continuity_test",
            passed=True,
            verdict="chain_continuous_everywhere",
            parameters={"depth": depth},
            witnesses={"nested_cells": [survivors[d][0] for d in sorted(survivors)]},
            details={"survivor_counts": {d: len(s) for d, s in survivors.items()}},
        )
    cells = survivors[depth]
    far_pair = None
    for a, b in combinations(cells, 2):
        if cell_distance(a, b) >= 2 * eps:
            far_pair = (a, b)
            break
    witnesses: dict = {"survivors_at_depth": cells}
    details: dict = {"survivor_counts": {d: len(s) for d, s in survivors.items()}}
    if far_pair is not None:
        a, b = far_pair
        k = chain_step_count(delta)
        start = convex_combine(
            [(Fraction(1, 2), dirac(representative(a))), (Fraction(1, 2), dirac(representative(b)))]
        )
        chain_a = chain_connect_map(f, start, dirac(representative(a)), delta, k, backend=backend)
        chain_b = chain_connect_map(f, start, dirac(representative(b)), delta, k, backend=backend)
        end_gap = prohorov_distance(chain_a.points[-1], chain_b.points[-1], backend)
        if not end_gap >= 2 * eps:
            raise CertificationError(
                f"divergence witness endpoints are only {end_gap} apart"
            )
        witnesses.update(
            {
                "start": start,
                "delta": delta,
                "chain_length": k,
                "endpoint_gap": end_gap,
                "endpoint_a": chain_a.points[-1],
                "endpoint_b": chain_b.points[-1],
            }
        )
        details["step_distances_a"] = chain_a.step_distances
        details["step_distances_b"] = chain_b.step_distances
    return Certificate(
        operation="chain_continuity_test",
        passed=True,
        verdict="not_chain_continuous_anywhere",
        parameters={"depth": depth, "eps": eps, "delta": delta},
        witnesses=witnesses,
        details=details,
    )


def transitivity_check(f: PrefixTableMap, partition_or_depth) -> Certificate:
    """Cell-level topological transitivity via digraph reachability.

    Verdict is transitive when every ordered pair of distinct cells is
    connected by a directed path; otherwise an unreachable pair is returned.
    """
    graph = graph_of(f, partition_or_depth)
    cells = graph.partition.cells
    out = graph.out_map()
    witness = None
    for a in cells:
        reach: set[str] = set()
        frontier = set(out[a])
        while frontier:
            reach |= frontier
            frontier = {c for b in frontier for c in out[b]} - reach
        missing = [b for b in cells if b != a and b not in reach]
        if missing:
            witness = (a, missing[0])
            break
    return Certificate(
        operation="transitivity_check",
        passed=True,
        verdict="transitive" if witness is None else "not_transitive",
        parameters={"cells": len(cells)},
        witnesses={} if witness is None else {"unreachable_pair": list(witness)},
        details={},
    )


# ---------------------------------------------------------------------------
# weak-shadowing refutation for dumbbell homeomorphisms


@dataclass(frozen=True)
class Pseudotrajectory:
    """A bi-infinite delta-pseudotrajectory through two designated measures.

    The finite core is a verified chain from ``first_anchor`` to
    ``second_anchor``; both tails follow exact orbits (step error zero), so
    only the core steps carry positive error.
    """

    core: Chain
    first_anchor: AtomicMeasure
    second_anchor: AtomicMeasure
    delta: Fraction


def weak_shadowing_refutation(
    tower: MapTower,
    eps: Fraction,
    delta: Fraction,
    grid: list[AtomicMeasure],
    budget: int = 400,
    backend: str = "auto",
) -> Certificate:
    """Refute weak eps-shadowing of a cross-component pseudotrajectory.

    Requires a dumbbell tower that is not transitive at the certified cell
    level (at least two components).  Builds a delta-pseudotrajectory whose
    anchors are unit masses on loop representatives in two different
    dumbbells, then shows that no grid measure's full orbit (both time
    directions, exact eventual periodicity) comes within eps of both
    anchors.
    """
    eps, delta = Fraction(eps), Fraction(delta)
    if tower.kind != "dumbbell":
        raise ParameterError("weak-shadowing refutation needs a dumbbell tower")
    comps = tower.levels[0].components
    if len(comps) < 2:
        raise ParameterError("need at least two dumbbell components")
    trans = transitivity_check(tower.table, tower.levels[0].partition())
    if trans.verdict != "not_transitive":
        raise ParameterError("map is transitive at the cell level; refutation declined")
    h = tower.table
    h_inv = h.invert()
    mu_star = dirac(representative(comps[0].left[0]))
    nu_star = dirac(representative(comps[1].left[0]))
    k0 = chain_step_count(delta)
    core = chain_connect_homeo(h, mu_star, nu_star, delta, k0, backend=backend)
    pseudo = Pseudotrajectory(core, mu_star, nu_star, delta)
    anchor_gap = prohorov_distance(mu_star, nu_star, backend)
    rows = []
    refuted_all = True
    for idx, eta in enumerate(grid):
        mins = {}
        for name, anchor in (("first", mu_star), ("second", nu_star)):
            forward = orbit_distance_to_target(h, eta, anchor, budget, backend)
            backward = orbit_distance_to_target(h_inv, eta, anchor, budget, backend)
            mins[name] = min(forward.infimum(), backward.infimum())
        shadows_both = mins["first"] < eps and mins["second"] < eps
        refuted_all &= not shadows_both
        rows.append(
            {"measure": idx, "min_to_first": mins["first"], "min_to_second": mins["second"]}
        )
    return Certificate(
        operation="weak_shadowing_refutation",
        passed=refuted_all,
        verdict="refuted_on_grid" if refuted_all else "shadowed_by_grid_measure",
        parameters={
            "eps": eps,
            "delta": delta,
            "grid_size": len(grid),
            "core_length": pseudo.core.length,
        },
        witnesses={
            "anchor_gap": anchor_gap,
            "core_steps": pseudo.core.step_distances,
        },
        details={"grid_minima": rows},
    )
