"""Finitely supported probability measures and the exact Prohorov metric.

Measures are finite lists of (point, mass) atoms with rational masses
summing to one; points are canonical words (zero tails stripped).  The
Prohorov distance

    d(mu, nu) = inf{ delta > 0 : mu(X) <= nu(X^delta) + delta for all X }

is computed exactly.  Because the strict neighborhood operator X -> X^delta
is constant between consecutive atom-pair distances, the infimum restricted
to one such interval equals the clamped value of

    g(delta) = max over X subset supp(mu) of  mu(X) - nu(X^delta),

and the answer is the least clamped value over intervals.  g is evaluated by
two independent backends: brute subset enumeration, and a min-cut / max-flow
computation expressing the feasibility of a partial coupling supported on
pairs closer than delta.  Both are exact over the integers after clearing
denominators, and they must always agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cantor import CylinderPartition, canonical_point, point_distance, point_in_cylinder
from .errors import BackendSelectionError, CertificationError, ParameterError

ENUMERATION_LIMIT = 16


@dataclass(frozen=True)
class AtomicMeasure:
    """A probability measure with finitely many rational point masses.

    ``atoms`` is the canonical form: points canonicalized, duplicates merged,
    zero masses dropped, sorted lexicographically, masses summing to one.
    """

    atoms: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        merged: dict[str, Fraction] = {}
        for point, mass in self.atoms:
            mass = Fraction(mass)
            if mass < 0:
                raise ParameterError("negative atom mass")
            if mass == 0:
                continue
            key = canonical_point(point)
            merged[key] = merged.get(key, Fraction(0)) + mass
        if sum(merged.values(), Fraction(0)) != 1:
            raise ParameterError("atom masses must sum to exactly 1")
        object.__setattr__(
            self, "atoms", tuple(sorted(merged.items()))
        )

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.atoms)

    def mass_at(self, point: str) -> Fraction:
        key = canonical_point(point)
        for p, m in self.atoms:
            if p == key:
                return m
        return Fraction(0)

    def mass_of_cylinders(self, prefixes) -> Fraction:
        """Mass of a union of cylinders."""
        total = Fraction(0)
        for p, m in self.atoms:
            if any(point_in_cylinder(p, c) for c in prefixes):
                total += m
        return total

    def __len__(self) -> int:
        return len(self.atoms)


def atomic_measure(pairs) -> AtomicMeasure:
    """Build a measure from an iterable or dict of (point, mass) pairs."""
    if isinstance(pairs, dict):
        pairs = pairs.items()
    return AtomicMeasure(tuple((p, Fraction(m)) for p, m in pairs))


def dirac(point: str) -> AtomicMeasure:
    """Unit mass concentrated at a point."""
    return atomic_measure([(point, Fraction(1))])


def pushforward(f, mu: AtomicMeasure) -> AtomicMeasure:
    """Image measure: each atom moves to its image point, collisions merge."""
    out: dict[str, Fraction] = {}
    for p, m in mu.atoms:
        q = f.apply(p)
        out[q] = out.get(q, Fraction(0)) + m
    return atomic_measure(out)


def pushforward_iter(f, mu: AtomicMeasure, n: int) -> AtomicMeasure:
    for _ in range(n):
        mu = pushforward(f, mu)
    return mu


def convex_combine(weighted: list[tuple[Fraction, AtomicMeasure]]) -> AtomicMeasure:
    """Convex combination of measures; weights must be >= 0 and sum to 1."""
    weights = [Fraction(w) for w, _ in weighted]
    if any(w < 0 for w in weights):
        raise ParameterError("weights must be nonnegative")
    if sum(weights, Fraction(0)) != 1:
        raise ParameterError("weights must sum to exactly 1")
    out: dict[str, Fraction] = {}
    for (w, mu) in weighted:
        if w == 0:
            continue
        for p, m in mu.atoms:
            out[p] = out.get(p, Fraction(0)) + Fraction(w) * m
    return atomic_measure(out)


def cell_masses(mu: AtomicMeasure, partition: CylinderPartition) -> dict[str, Fraction]:
    """mu(a) for every cell a of the partition; values sum to 1."""
    out = {c: Fraction(0) for c in partition.cells}
    for p, m in mu.atoms:
        out[partition.cell_of(p)] += m
    return out


# ---------------------------------------------------------------------------
# exact Prohorov solver


@dataclass(frozen=True)
class ProhorovResult:
    """Exact distance plus the binding subset found at the optimal interval."""

    value: Fraction
    witness_set: tuple[str, ...]
    backend: str


def _scaled_masses(mu: AtomicMeasure, nu: AtomicMeasure) -> tuple[list[int], list[int], int]:
    denom = lcm(*[m.denominator for m in mu.masses + nu.masses])
    return (
        [int(m * denom) for m in mu.masses],
        [int(m * denom) for m in nu.masses],
        denom,
    )


def _distance_matrix(mu: AtomicMeasure, nu: AtomicMeasure) -> list[list[Fraction]]:
    return [[point_distance(p, q) for q, _ in nu.atoms] for p, _ in mu.atoms]


def _g_enumeration(mu_int, nu_int, adj_masks, denom) -> tuple[Fraction, tuple[int, ...]]:
    """max over subsets X of mu's support of mu(X) - nu(neighborhood(X))."""
    k = len(mu_int)
    if k > ENUMERATION_LIMIT:
        raise BackendSelectionError(
            f"enumeration backend limited to {ENUMERATION_LIMIT} atoms, got {k}"
        )
    l = len(nu_int)
    nu_sum = [0] * (1 << l)
    for mask in range(1, 1 << l):
        low = mask & -mask
        nu_sum[mask] = nu_sum[mask ^ low] + nu_int[low.bit_length() - 1]
    best, best_mask = 0, 0
    mu_sum = [0] * (1 << k)
    nbr = [0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        i = low.bit_length() - 1
        mu_sum[mask] = mu_sum[mask ^ low] + mu_int[i]
        nbr[mask] = nbr[mask ^ low] | adj_masks[i]
        val = mu_sum[mask] - nu_sum[nbr[mask]]
        if val > best:
            best, best_mask = val, mask
    witness = tuple(i for i in range(k) if best_mask >> i & 1)
    return Fraction(best, denom), witness


class _Dinic:
    """Max flow with exact integer capacities on a tiny graph."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for e in self.head[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    e = self.head[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 62)
                if not pushed:
                    break
                flow += pushed

    def source_side(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def _g_flow(mu_int, nu_int, adj_masks, denom) -> tuple[Fraction, tuple[int, ...]]:
    """Same maximum as the enumeration backend, via min-cut duality.

    The uncoupled mass of a maximum partial coupling supported on adjacent
    pairs equals max_X [mu(X) - nu(neighborhood(X))] by max-flow/min-cut.
    """
    k, l = len(mu_int), len(nu_int)
    net = _Dinic(k + l + 2)
    src, snk = k + l, k + l + 1
    for i in range(k):
        net.add_edge(src, i, mu_int[i])
        mask = adj_masks[i]
        for j in range(l):
            if mask >> j & 1:
                net.add_edge(i, k + j, denom)
    for j in range(l):
        net.add_edge(k + j, snk, nu_int[j])
    flow = net.max_flow(src, snk)
    cut = net.source_side(src)
    witness = tuple(i for i in range(k) if i in cut)
    return Fraction(denom - flow, denom), witness


def _one_sided_value(
    mu: AtomicMeasure, nu: AtomicMeasure, backend: str
) -> tuple[Fraction, tuple[str, ...]]:
    mu_int, nu_int, denom = _scaled_masses(mu, nu)
    dist = _distance_matrix(mu, nu)
    thresholds = sorted({Fraction(0)} | {d for row in dist for d in row})
    best: tuple[Fraction, tuple[str, ...]] | None = None
    for t, c_t in enumerate(thresholds):
        adj_masks = [
            sum(1 << j for j, d in enumerate(row) if d <= c_t) for row in dist
        ]
        if backend == "enumeration":
            g, wit = _g_enumeration(mu_int, nu_int, adj_masks, denom)
        else:
            g, wit = _g_flow(mu_int, nu_int, adj_masks, denom)
        upper = thresholds[t + 1] if t + 1 < len(thresholds) else None
        if upper is not None and g > upper:
            continue
        value = max(g, c_t)
        if best is None or value < best[0]:
            best = (value, tuple(mu.support[i] for i in wit))
    assert best is not None
    return best


def _auto_backend(mu: AtomicMeasure, nu: AtomicMeasure) -> str:
    if max(len(mu), len(nu)) <= 10:
        return "enumeration"
    return "flow"


def prohorov(mu: AtomicMeasure, nu: AtomicMeasure, backend: str = "auto") -> ProhorovResult:
    """Exact Prohorov distance via the one-sided condition.

    ``backend`` is "enumeration", "flow", "auto" (pick by support size), or
    "both" (run both and insist on exact agreement).
    """
    if backend == "auto":
        backend = _auto_backend(mu, nu)
    if backend == "both":
        v1, w1 = _one_sided_value(mu, nu, "enumeration")
        v2, _ = _one_sided_value(mu, nu, "flow")
        if v1 != v2:
            raise CertificationError(f"backends disagree: {v1} vs {v2}")
        return ProhorovResult(v1, w1, "both")
    if backend not in ("enumeration", "flow"):
        raise BackendSelectionError(f"unknown backend {backend!r}")
    value, witness = _one_sided_value(mu, nu, backend)
    return ProhorovResult(value, witness, backend)


def prohorov_distance(mu: AtomicMeasure, nu: AtomicMeasure, backend: str = "auto") -> Fraction:
    """The distance alone, without the witness payload."""
    return prohorov(mu, nu, backend).value


def prohorov_two_sided(mu: AtomicMeasure, nu: AtomicMeasure, backend: str = "auto") -> Fraction:
    """Infimum of the symmetric condition; equals the one-sided value.

    Kept as an independent computation so the equality of the two
    formulations can be cross-checked on every input.
    """
    if backend == "auto":
        backend = _auto_backend(mu, nu)
    if backend == "both":
        a = prohorov_two_sided(mu, nu, "enumeration")
        b = prohorov_two_sided(mu, nu, "flow")
        if a != b:
            raise CertificationError(f"backends disagree: {a} vs {b}")
        return a
    mu_int, nu_int, denom = _scaled_masses(mu, nu)
    dist = _distance_matrix(mu, nu)
    thresholds = sorted({Fraction(0)} | {d for row in dist for d in row})
    g_of = _g_enumeration if backend == "enumeration" else _g_flow
    best: Fraction | None = None
    for t, c_t in enumerate(thresholds):
        adj = [sum(1 << j for j, d in enumerate(row) if d <= c_t) for row in dist]
        adj_T = [
            sum(1 << i for i in range(len(mu_int)) if dist[i][j] <= c_t)
            for j in range(len(nu_int))
        ]
        g1, _ = g_of(mu_int, nu_int, adj, denom)
        g2, _ = g_of(nu_int, mu_int, adj_T, denom)
        g = max(g1, g2)
        upper = thresholds[t + 1] if t + 1 < len(thresholds) else None
        if upper is not None and g > upper:
            continue
        value = max(g, c_t)
        if best is None or value < best:
            best = value
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# serialization

EMPTY_WORD_TOKEN = "e"


def measure_to_lines(mu: AtomicMeasure) -> list[str]:
    """Canonical text form: one "<point> <mass>" line per atom."""
    return [f"{p or EMPTY_WORD_TOKEN} {m}" for p, m in mu.atoms]


def measure_from_lines(lines) -> AtomicMeasure:
    atoms = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParameterError(f"line {lineno}: expected '<point> <p/q>', got {raw!r}")
        word, mass = parts
        if word == EMPTY_WORD_TOKEN:
            word = ""
        try:
            atoms.append((word, Fraction(mass)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"line {lineno}: bad mass {mass!r}: {exc}") from exc
    return atomic_measure(atoms)
