"""Measure families over a partition: simplex grids, random sampling, and a
vectorized all-pairs scan of exact distance profiles.

Grid measures place their mass on cell representatives (prefix plus zero
tail).  For an all-pairs scan the atoms of every grid measure ride on the
same tracked point family -- the orbits of the cell representatives -- so a
single certified trajectory matrix serves every pair.  Each pairwise
Prohorov value then reduces to integer subset maximization over the common
support; masses are small integers over one denominator, so the whole scan
runs in numpy int arithmetic and ranks into a short list of exact rationals.
No floats are involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cantor import CylinderPartition, first_difference, representative
from .errors import ParameterError, ResourceBudgetError
from .maps import PrefixTableMap
from .measures import AtomicMeasure, atomic_measure
from .orbits import DistanceProfile, PairClass

DEFAULT_BUDGET = 400
MAX_TRACKED_POINTS = 12


def simplex_grid(partition: CylinderPartition, resolution: int) -> list[AtomicMeasure]:
    """All measures with masses in {0, 1/m, ..., 1} on the cell representatives.

    ``resolution`` is m; the grid has C(m + k - 1, k - 1) points for k cells.
    """
    if resolution < 1:
        raise ParameterError("resolution must be positive")
    cells = partition.cells
    out: list[AtomicMeasure] = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(cells) - 1:
            out.append(_cell_measure(cells, acc + [left], resolution))
            return
        for c in range(left + 1):
            rec(i + 1, left - c, acc + [c])

    rec(0, resolution, [])
    return out


def _cell_measure(cells, counts, resolution) -> AtomicMeasure:
    return atomic_measure(
        {representative(c): Fraction(k, resolution) for c, k in zip(cells, counts) if k}
    )


def random_cell_measure(
    partition: CylinderPartition, rng, resolution: int = 16
) -> AtomicMeasure:
    """A random measure with denominator ``resolution`` on cell representatives."""
    counts = [0] * len(partition.cells)
    for _ in range(resolution):
        counts[rng.randrange(len(counts))] += 1
    return _cell_measure(partition.cells, counts, resolution)


def random_atomic_measure(rng, max_atoms: int = 8, max_depth: int = 4) -> AtomicMeasure:
    """A random measure on random points, masses with denominator 64."""
    k = rng.randint(1, max_atoms)
    points = set()
    while len(points) < k:
        depth = rng.randint(0, max_depth)
        points.add("".join(rng.choice("01") for _ in range(depth)).rstrip("0"))
    counts = [1] * len(points)
    for _ in range(64 - len(points)):
        counts[rng.randrange(len(counts))] += 1
    return atomic_measure({p: Fraction(c, 64) for p, c in zip(sorted(points), counts)})


# ---------------------------------------------------------------------------
# shared trajectories of the cell representatives


@dataclass(frozen=True)
class TrajectoryFamily:
    """Orbits of a point family with a certified eventually periodic
    distance matrix: matrix(n + period) == matrix(n) for n >= preperiod."""

    points: tuple[str, ...]
    preperiod: int
    period: int
    matrices: tuple

    def matrix_at(self, n: int):
        if n < len(self.matrices):
            return self.matrices[n]
        return self.matrices[self.preperiod + (n - self.preperiod) % self.period]


def _matrix_of(words) -> tuple:
    n = len(words)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            fd = first_difference(words[i], words[j])
            d = Fraction(0) if fd is None else Fraction(1, fd + 1)
            rows[i][j] = rows[j][i] = d
    return tuple(tuple(r) for r in rows)


def _pad_descriptor(f: PrefixTableMap, w_old: str, w_new: str) -> tuple[int, int] | None:
    if w_new == w_old:
        return (len(w_old), 0)
    g = len(w_new) - len(w_old)
    if g <= 0:
        return None
    c = 0
    while c < len(w_old) and w_old[c] == w_new[c]:
        c += 1
    if w_new[c: c + g] != "0" * g or w_new[c + g:] != w_old[c:]:
        return None
    dom, _ = f.matching_rule(w_old)
    if c < len(dom):
        return None
    return (c, g)


def track_representatives(
    f: PrefixTableMap, partition: CylinderPartition, budget: int = DEFAULT_BUDGET
) -> TrajectoryFamily:
    """Evolve all cell representatives jointly and certify the eventual
    periodicity of their pairwise distance matrix.

    Uses the same two mechanisms as the measure-orbit engine: literal
    repetition of the word tuple, or the zero-run padding certificate
    verified across a full period window.
    """
    start = tuple(representative(c) for c in partition.cells)
    trajs: list[tuple[str, ...]] = [start]
    matrices = [_matrix_of(start)]
    exact_seen = {start: 0}
    sig_seen: dict = {matrices[0]: [0]}
    failed: set = set()

    def ensure(k):
        while len(trajs) <= k:
            nxt = tuple(f.apply(w) for w in trajs[-1])
            trajs.append(nxt)
            matrices.append(_matrix_of(nxt))

    def verify(rho, tau) -> bool:
        ensure(rho + 2 * tau)
        for j in range(rho, rho + tau + 1):
            ws_a, ws_b = trajs[j], trajs[j + tau]
            inserts = []
            for wa, wb in zip(ws_a, ws_b):
                desc = _pad_descriptor(f, wa, wb)
                if desc is None:
                    return False
                if desc[1] > 0:
                    inserts.append(desc[0])
            if matrices[j] != matrices[j + tau]:
                return False
            if inserts:
                min_insert = min(inserts)
                for i, k in combinations(range(len(ws_a)), 2):
                    d = matrices[j][i][k]
                    if d > 0 and d.denominator - 1 >= min_insert:
                        return False
        return True

    for n in range(1, budget + 1):
        ensure(n)
        st = trajs[n]
        rho = exact_seen.get(st)
        if rho is not None:
            return TrajectoryFamily(start, rho, n - rho, tuple(matrices[:n]))
        exact_seen[st] = n
        sig = matrices[n]
        for rho in reversed(sig_seen.get(sig, ())):
            tau = n - rho
            if (rho, tau) in failed or rho + 2 * tau > budget:
                continue
            if verify(rho, tau):
                return TrajectoryFamily(start, rho, tau, tuple(matrices[: rho + tau]))
            failed.add((rho, tau))
        sig_seen.setdefault(sig, []).append(n)
    raise ResourceBudgetError(f"representative family not certified within {budget} steps")


# ---------------------------------------------------------------------------
# exact all-pairs scan over a common support


class CommonSupportScanner:
    """Exact pairwise Prohorov values for measures on a tracked point family.

    For each time step and each inter-threshold interval the one-sided
    maximum max_X [mu(X) - nu(X^delta)] is evaluated over all subsets of the
    family at once in integer arithmetic, then clamped per interval exactly
    as the scalar solver does.  Distances are ranked into a short sorted
    list of exact rationals so that whole-grid minima and maxima stay in
    small integers.
    """

    def __init__(self, family: TrajectoryFamily, measures: list[AtomicMeasure], resolution: int):
        k = len(family.points)
        if k > MAX_TRACKED_POINTS:
            raise ParameterError(f"scanner limited to {MAX_TRACKED_POINTS} tracked points")
        self.family = family
        self.resolution = resolution
        index = {p: i for i, p in enumerate(family.points)}
        self.mass = np.zeros((len(measures), k), dtype=np.int64)
        for r, mu in enumerate(measures):
            for p, m in mu.atoms:
                scaled = m * resolution
                if p not in index or scaled.denominator != 1:
                    raise ParameterError("measure does not live on the tracked grid")
                self.mass[r, index[p]] = int(scaled)
        subsets = np.zeros((1 << k, k), dtype=bool)
        for s in range(1 << k):
            for i in range(k):
                if s >> i & 1:
                    subsets[s, i] = True
        self.subsets = subsets
        self.subset_mass = subsets.astype(np.int64) @ self.mass.T  # (S, R)
        # global value list: every distance a scan can output
        vals = {Fraction(0)} | {Fraction(g, resolution) for g in range(1, resolution + 1)}
        for mat in family.matrices:
            vals |= {d for row in mat for d in row}
        self.values: list[Fraction] = sorted(vals)
        self.rank = {v: r for r, v in enumerate(self.values)}
        self.invalid_rank = len(self.values)

    def thresholds_at(self, n: int) -> list[Fraction]:
        mat = self.family.matrix_at(n)
        k = len(self.family.points)
        return sorted({mat[i][j] for i in range(k) for j in range(k)} | {Fraction(0)})

    def _adjacency(self, n: int, c: Fraction) -> np.ndarray:
        mat = self.family.matrix_at(n)
        k = len(self.family.points)
        adj = np.zeros((k, k), dtype=bool)
        for i in range(k):
            for j in range(k):
                if mat[i][j] <= c:
                    adj[i, j] = True
        return adj

    def rank_matrix_at(self, n: int) -> np.ndarray:
        """(R, R) uint16 matrix of ranked d(mu_i(n), mu_j(n)) for all pairs."""
        thresholds = self.thresholds_at(n)
        res = self.resolution
        nmeas = self.mass.shape[0]
        best = np.full((nmeas, nmeas), self.invalid_rank, dtype=np.uint16)
        for t, c_t in enumerate(thresholds):
            upper = thresholds[t + 1] if t + 1 < len(thresholds) else None
            # rank lookup per possible integer g in [-res, res]
            lut = np.empty(2 * res + 1, dtype=np.uint16)
            for g_num in range(-res, res + 1):
                g = Fraction(g_num, res)
                if upper is not None and g > upper:
                    lut[g_num + res] = self.invalid_rank
                else:
                    lut[g_num + res] = self.rank[max(g, c_t)]
            nbr = (self.subsets @ self._adjacency(n, c_t)) > 0
            nbr_mass = nbr.astype(np.int64) @ self.mass.T  # (S, R)
            g_cols = np.empty((nmeas, nmeas), dtype=np.int64)
            for j in range(nmeas):
                g_cols[:, j] = (self.subset_mass - nbr_mass[:, j][:, None]).max(axis=0)
            best = np.minimum(best, lut[g_cols + res])
        assert int(best.max()) < self.invalid_rank
        return best

    def distance(self, i: int, j: int, n: int) -> Fraction:
        """Exact d(mu_i(n), mu_j(n)) for one pair, without the batch tables."""
        thresholds = self.thresholds_at(n)
        res = self.resolution
        best: Fraction | None = None
        for t, c_t in enumerate(thresholds):
            nbr = (self.subsets @ self._adjacency(n, c_t)) > 0
            nbr_mass = nbr.astype(np.int64) @ self.mass[j]
            g = Fraction(int((self.subset_mass[:, i] - nbr_mass).max()), res)
            if t + 1 < len(thresholds) and g > thresholds[t + 1]:
                continue
            cand = max(g, c_t)
            if best is None or cand < best:
                best = cand
        assert best is not None
        return best

    def pair_profile(self, i: int, j: int) -> DistanceProfile:
        rho, tau = self.family.preperiod, self.family.period
        values = tuple(self.distance(i, j, n) for n in range(rho + tau))
        return DistanceProfile(values, rho, tau, "shared-trajectory")


@dataclass
class LiYorkeScan:
    """Result of the exhaustive pair classification over a simplex grid."""

    grid: list[AtomicMeasure]
    family: TrajectoryFamily
    scanner: CommonSupportScanner
    counts: dict[str, int]
    liminf_ranks: np.ndarray
    limsup_ranks: np.ndarray

    @property
    def pair_count(self) -> int:
        n = len(self.grid)
        return n * (n - 1) // 2

    def liminf(self, i: int, j: int) -> Fraction:
        return self.scanner.values[int(self.liminf_ranks[i, j])]

    def limsup(self, i: int, j: int) -> Fraction:
        return self.scanner.values[int(self.limsup_ranks[i, j])]

    def classify(self, i: int, j: int) -> PairClass:
        if self.limsup(i, j) == 0:
            return PairClass.ASYMPTOTIC
        if self.liminf(i, j) > 0:
            return PairClass.SEPARATED_BELOW
        return PairClass.LI_YORKE_PAIR


def li_yorke_scan(
    f: PrefixTableMap,
    partition: CylinderPartition,
    resolution: int,
    budget: int = DEFAULT_BUDGET,
) -> LiYorkeScan:
    """Classify every unordered pair of simplex-grid measures exactly.

    liminf and limsup of each pair's distance sequence are taken over one
    certified period of the shared trajectory family.
    """
    family = track_representatives(f, partition, budget)
    grid = simplex_grid(partition, resolution)
    scanner = CommonSupportScanner(family, grid, resolution)
    rho, tau = family.preperiod, family.period
    liminf_ranks = None
    limsup_ranks = None
    for n in range(rho, rho + tau):
        ranks = scanner.rank_matrix_at(n)
        if liminf_ranks is None:
            liminf_ranks = ranks.copy()
            limsup_ranks = ranks.copy()
        else:
            np.minimum(liminf_ranks, ranks, out=liminf_ranks)
            np.maximum(limsup_ranks, ranks, out=limsup_ranks)
    zero = scanner.rank[Fraction(0)]
    iu = np.triu_indices(len(grid), k=1)
    li, ls = liminf_ranks[iu], limsup_ranks[iu]
    counts = {
        PairClass.ASYMPTOTIC.value: int((ls == zero).sum()),
        PairClass.SEPARATED_BELOW.value: int((li > zero).sum()),
        PairClass.LI_YORKE_PAIR.value: int(((li == zero) & (ls > zero)).sum()),
    }
    return LiYorkeScan(grid, family, scanner, counts, liminf_ranks, limsup_ranks)
