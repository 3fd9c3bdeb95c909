"""Generators for maps whose partition digraphs are balloons or dumbbells.

A *balloon tower* is a continuous (non-surjective) map together with a
nested family of cylinder partitions such that at every certified level each
weak component of the transition digraph is a balloon of type (m, m), m the
level's loop length, and every cell image is a proper subcylinder of its
successor cell.  A *dumbbell tower* is a homeomorphism whose digraph at the
certified level consists of balanced dumbbells carrying exactly cycling
"stay" subcylinders in both loops (the left/right loop witnesses).

The balloon construction nests: each component at level k+1 is assigned a
parent at level k, its initial vertex sits inside the parent's initial
vertex, and its path and loop wind through the parent's cells.  Rules are
emitted only for the finest level; one rule per cell, mapping the cell onto
the all-zero subcylinder of its successor cell, which makes every cell
representative (prefix plus zero tail) move to the representative of the
successor cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .cantor import (
    CylinderPartition,
    balanced_code,
    cylinder_contains,
    normalize_cylinder_union,
    union_is_proper_subset,
)
from .errors import CertificationError, ParameterError
from .maps import PrefixTableMap, classify_components, graph_of


@dataclass(frozen=True)
class BalloonComponent:
    """One balloon: path cells v_1..v_m and loop cells w_1..w_m."""

    path: tuple[str, ...]
    loop: tuple[str, ...]
    parent: int | None = None

    @property
    def initial_vertex(self) -> str:
        return self.path[0]

    @property
    def cells(self) -> tuple[str, ...]:
        return self.path + self.loop


@dataclass(frozen=True)
class DumbbellComponent:
    """One balanced dumbbell: left loop, bar, right loop, and the two
    clopen subcylinders that cycle exactly with their loops."""

    left: tuple[str, ...]
    bar: tuple[str, ...]
    right: tuple[str, ...]
    left_witness: str
    right_witness: str
    parent: int | None = None

    @property
    def initial_vertex(self) -> str:
        return self.left[0]

    @property
    def cells(self) -> tuple[str, ...]:
        return self.left + self.bar + self.right


@dataclass(frozen=True)
class TowerLevel:
    q: int
    components: tuple

    @property
    def loop_length(self) -> int:
        return factorial(self.q)

    def partition(self) -> CylinderPartition:
        cells: list[str] = []
        for comp in self.components:
            cells.extend(comp.cells)
        return CylinderPartition(tuple(cells))


@dataclass(frozen=True)
class MapTower:
    """A map together with the levels at which its digraph shape is certified."""

    kind: str  # "balloon" | "dumbbell"
    table: PrefixTableMap
    levels: tuple[TowerLevel, ...]

    def level_with_mesh_below(self, eps: Fraction) -> int:
        for idx, level in enumerate(self.levels):
            if level.partition().mesh() < eps:
                return idx
        raise ParameterError(f"no certified level has mesh below {eps}")


def _wrap(i: int, m: int) -> int:
    """1-based index wrapped into 1..m."""
    return (i - 1) % m + 1


def make_balloon_tower(levels: list[tuple[int, int]], counts: list[int]) -> MapTower:
    """Build a balloon tower.

    ``levels`` lists (max_depth, q) per certified level, depths strictly
    increasing and q nondecreasing; ``counts`` gives the number of balloons
    per level, where each count after the first must be a multiple (ratio at
    least 2) of its predecessor so the partitions refine strongly.  Raises
    ParameterError when the requested cells do not fit within the depth.
    """
    if not levels or len(levels) != len(counts):
        raise ParameterError("levels and counts must be nonempty and equal length")
    for (_, q0), (_, q1) in zip(levels, levels[1:]):
        if q1 < q0:
            raise ParameterError("loop parameters must be nondecreasing")
    for (d0, _), (d1, _) in zip(levels, levels[1:]):
        if d1 <= d0:
            raise ParameterError("depths must be strictly increasing")
    for n0, n1 in zip(counts, counts[1:]):
        if n1 % n0 != 0 or n1 // n0 < 2:
            raise ParameterError(
                "component counts must grow by an integer factor of at least 2 "
                "so that each cell splits properly"
            )
    if counts[0] < 1:
        raise ParameterError("need at least one component")

    ms = [factorial(q) for _, q in levels]
    for (depth, q), n, m in zip(levels, counts, ms):
        need = n * 2 * m
        if need > 2**depth:
            raise ParameterError(
                f"infeasible: {n} balloon(s) of loop length {m} need {need} "
                f"cells, more than the {2**depth} available at depth {depth}"
            )

    # level 0 cells
    comp_prefixes = balanced_code(counts[0])
    components: list[BalloonComponent] = []
    for prefix in comp_prefixes:
        codes = balanced_code(2 * ms[0], prefix=prefix)
        components.append(
            BalloonComponent(path=tuple(codes[: ms[0]]), loop=tuple(codes[ms[0]:]))
        )
    level_list = [TowerLevel(levels[0][1], tuple(components))]

    for k in range(1, len(levels)):
        prev = level_list[-1].components
        m_prev, m_cur = ms[k - 1], ms[k]
        ratio = counts[k] // counts[k - 1]
        children: list[dict] = []
        child_index: dict[tuple[int, int], int] = {}
        for pi in range(len(prev)):
            for c in range(ratio):
                child_index[(pi, c)] = len(children)
                children.append(
                    {"parent": pi, "path": [None] * m_cur, "loop": [None] * m_cur}
                )
        for pi, parent in enumerate(prev):
            for j in range(1, m_prev + 1):
                # slots inside parent path cell v_j: one path position per child
                slots = [("path", c, j) for c in range(ratio)]
                codes = balanced_code(len(slots), prefix=parent.path[j - 1])
                for code, (role, c, pos) in zip(codes, slots):
                    children[child_index[(pi, c)]][role][pos - 1] = code
                # slots inside parent loop cell w_j: per child, the loop
                # positions congruent to j first (aligned position leftmost),
                # then the winding path positions
                slots = []
                for c in range(ratio):
                    slots.extend(
                        ("loop", c, ell) for ell in range(j, m_cur + 1, m_prev)
                    )
                    slots.extend(
                        ("path", c, m_prev + x)
                        for x in range(j, m_cur - m_prev + 1, m_prev)
                    )
                codes = balanced_code(len(slots), prefix=parent.loop[j - 1])
                for code, (role, c, pos) in zip(codes, slots):
                    children[child_index[(pi, c)]][role][pos - 1] = code
        comps = tuple(
            BalloonComponent(
                path=tuple(ch["path"]), loop=tuple(ch["loop"]), parent=ch["parent"]
            )
            for ch in children
        )
        level_list.append(TowerLevel(levels[k][1], comps))

    for (depth, _), level in zip(levels, level_list):
        actual = max(len(c) for c in level.partition().cells)
        if actual > depth:
            raise ParameterError(
                f"construction needs depth {actual}, exceeding the requested {depth}"
            )

    rules = []
    for comp in level_list[-1].components:
        m = len(comp.path)
        for i in range(m - 1):
            rules.append((comp.path[i], comp.path[i + 1] + "0"))
        rules.append((comp.path[m - 1], comp.loop[0] + "0"))
        for i in range(m - 1):
            rules.append((comp.loop[i], comp.loop[i + 1] + "0"))
        rules.append((comp.loop[m - 1], comp.loop[0] + "0"))
    tower = MapTower("balloon", PrefixTableMap(tuple(rules)), tuple(level_list))
    certify_tower(tower)
    return tower


def make_dumbbell_tower(
    level: tuple[int, int], count: int, bar_length: int = 1
) -> MapTower:
    """Build a homeomorphism whose digraph is ``count`` balanced dumbbells.

    Each left loop splits into a "stay" subcylinder cycling exactly with the
    loop (the left-loop witness) and a draining track feeding the bar; bar
    mass enters the right loop through ever-deeper subcylinders so the table
    stays bijective, and the right stay track is the right-loop witness.
    """
    depth, q = level
    if count < 1 or bar_length < 1:
        raise ParameterError("need at least one component and bar length >= 1")
    m = factorial(q)
    need = count * (2 * m + bar_length)
    if need > 2**depth:
        raise ParameterError(
            f"infeasible: {count} dumbbell(s) need {need} cells, more than "
            f"the {2**depth} available at depth {depth}"
        )
    components = []
    rules = []
    for prefix in balanced_code(count):
        codes = balanced_code(2 * m + bar_length, prefix=prefix)
        u = codes[:m]
        v = codes[m: m + bar_length]
        w = codes[m + bar_length:]
        for j in range(m):
            rules.append((u[j] + "0", u[(j + 1) % m] + "0"))
            rules.append((w[j] + "0", w[(j + 1) % m] + "0"))
        rules.append((u[0] + "10", u[1 % m] + "1"))
        rules.append((u[0] + "11", v[0]))
        for j in range(1, m):
            rules.append((u[j] + "1", u[(j + 1) % m] + "1"))
        for j in range(bar_length - 1):
            rules.append((v[j], v[j + 1]))
        rules.append((v[bar_length - 1], w[0] + "11"))
        for j in range(m - 1):
            rules.append((w[j] + "1", w[j + 1] + "1"))
        rules.append((w[m - 1] + "1", w[0] + "10"))
        components.append(
            DumbbellComponent(
                left=tuple(u),
                bar=tuple(v),
                right=tuple(w),
                left_witness=u[0] + "0",
                right_witness=w[0] + "0",
            )
        )
    tower = MapTower(
        "dumbbell", PrefixTableMap(tuple(rules)), (TowerLevel(q, tuple(components)),)
    )
    certify_tower(tower)
    return tower


def _expected_balloon_edges(comp: BalloonComponent) -> set[tuple[str, str]]:
    m = len(comp.path)
    edges = {(comp.path[i], comp.path[i + 1]) for i in range(m - 1)}
    edges.add((comp.path[-1], comp.loop[0]))
    edges |= {(comp.loop[i], comp.loop[(i + 1) % m]) for i in range(m)}
    return edges


def _expected_dumbbell_edges(comp: DumbbellComponent) -> set[tuple[str, str]]:
    r, t = len(comp.left), len(comp.right)
    edges = {(comp.left[i], comp.left[(i + 1) % r]) for i in range(r)}
    edges |= {(comp.right[i], comp.right[(i + 1) % t]) for i in range(t)}
    edges |= {(comp.bar[i], comp.bar[i + 1]) for i in range(len(comp.bar) - 1)}
    edges.add((comp.left[0], comp.bar[0]))
    edges.add((comp.bar[-1], comp.right[0]))
    return edges


def certify_tower(tower: MapTower) -> None:
    """Re-verify every declared level against the map; raise on any mismatch.

    Checks: partitions refine strongly with shrinking mesh; the digraph edge
    set at each level is exactly the declared balloons / dumbbells; balloon
    images are proper subcylinders of their successors; dumbbell tables are
    bijective and their loop witnesses cycle exactly; initial vertices nest
    across levels along the declared parents.
    """
    f = tower.table
    prev_partition = None
    prev_components = None
    for li, level in enumerate(tower.levels):
        m = level.loop_length
        partition = level.partition()
        if prev_partition is not None:
            if not partition.strongly_refines(prev_partition):
                raise CertificationError(f"level {li} does not strongly refine level {li-1}")
            if not partition.mesh() < prev_partition.mesh():
                raise CertificationError(f"mesh does not shrink at level {li}")
        graph = graph_of(f, partition)
        expected: set[tuple[str, str]] = set()
        for comp in level.components:
            if tower.kind == "balloon":
                if not isinstance(comp, BalloonComponent):
                    raise CertificationError("balloon tower with non-balloon component")
                if len(comp.path) != m or len(comp.loop) != m:
                    raise CertificationError(
                        f"component is not of type ({m},{m}) at level {li}"
                    )
                expected |= _expected_balloon_edges(comp)
            else:
                if not isinstance(comp, DumbbellComponent):
                    raise CertificationError("dumbbell tower with non-dumbbell component")
                if len(comp.left) != m or len(comp.right) != m:
                    raise CertificationError(
                        f"component plate weight is not {m} at level {li}"
                    )
                if not comp.bar:
                    raise CertificationError("dumbbell component without a bar")
                expected |= _expected_dumbbell_edges(comp)
        if set(graph.edges) != expected:
            raise CertificationError(
                f"digraph at level {li} does not match the declared shape"
            )
        shapes = classify_components(graph)
        want_kind = "balloon" if tower.kind == "balloon" else "dumbbell"
        for shape in shapes:
            if shape.kind != want_kind:
                raise CertificationError(
                    f"component classified as {shape.kind!r}, expected {want_kind!r}"
                )
            if want_kind == "balloon" and shape.params != (m, m):
                raise CertificationError(
                    f"balloon of type {shape.params}, expected ({m}, {m})"
                )
            if want_kind == "dumbbell" and (shape.params[0] != m or shape.params[2] != m):
                raise CertificationError(
                    f"dumbbell of type {shape.params}, expected plates of weight {m}"
                )
        if tower.kind == "balloon":
            for comp in level.components:
                succ = {}
                for i in range(m - 1):
                    succ[comp.path[i]] = comp.path[i + 1]
                    succ[comp.loop[i]] = comp.loop[i + 1]
                succ[comp.path[-1]] = comp.loop[0]
                succ[comp.loop[-1]] = comp.loop[0]
                for cell, target in succ.items():
                    if not union_is_proper_subset(f.image_cylinders(cell), target):
                        raise CertificationError(
                            f"image of {cell!r} is not a proper subcylinder of {target!r}"
                        )
        else:
            if not f.is_homeomorphism():
                raise CertificationError("dumbbell tower table is not bijective")
            for comp in level.components:
                for witness, cells in (
                    (comp.left_witness, comp.left),
                    (comp.right_witness, comp.right),
                ):
                    period = len(cells)
                    back = f.iterated_image_cylinders((witness,), period)
                    if back != normalize_cylinder_union((witness,)):
                        raise CertificationError(
                            f"loop witness {witness!r} does not return after {period} steps"
                        )
        if prev_components is not None:
            for comp in level.components:
                if comp.parent is None or not (0 <= comp.parent < len(prev_components)):
                    raise CertificationError("missing parent link at refined level")
                parent = prev_components[comp.parent]
                if not cylinder_contains(parent.initial_vertex, comp.initial_vertex):
                    raise CertificationError(
                        "initial vertex does not nest inside its parent's"
                    )
        prev_partition, prev_components = partition, level.components


# ---------------------------------------------------------------------------
# serialization


def tower_to_dict(tower: MapTower) -> dict:
    levels = []
    for level in tower.levels:
        comps = []
        for comp in level.components:
            if tower.kind == "balloon":
                comps.append(
                    {"path": list(comp.path), "loop": list(comp.loop), "parent": comp.parent}
                )
            else:
                comps.append(
                    {
                        "left": list(comp.left),
                        "bar": list(comp.bar),
                        "right": list(comp.right),
                        "left_witness": comp.left_witness,
                        "right_witness": comp.right_witness,
                        "parent": comp.parent,
                    }
                )
        levels.append({"q": level.q, "components": comps})
    return {
        "format": "cantordyn-map-v1",
        "kind": tower.kind,
        "rules": [[d, i] for d, i in tower.table.rules],
        "levels": levels,
    }


def tower_from_dict(data: dict, verify: bool = True) -> MapTower:
    table = PrefixTableMap(tuple((d, i) for d, i in data["rules"]))
    levels = []
    for lv in data["levels"]:
        comps = []
        for c in lv["components"]:
            if data["kind"] == "balloon":
                comps.append(
                    BalloonComponent(
                        path=tuple(c["path"]), loop=tuple(c["loop"]), parent=c["parent"]
                    )
                )
            else:
                comps.append(
                    DumbbellComponent(
                        left=tuple(c["left"]),
                        bar=tuple(c["bar"]),
                        right=tuple(c["right"]),
                        left_witness=c["left_witness"],
                        right_witness=c["right_witness"],
                        parent=c["parent"],
                    )
                )
        levels.append(TowerLevel(lv["q"], tuple(comps)))
    tower = MapTower(data["kind"], table, tuple(levels))
    if verify:
        certify_tower(tower)
    return tower
