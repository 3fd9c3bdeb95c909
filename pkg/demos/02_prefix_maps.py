"""Maps as prefix-rewrite tables and their partition digraphs.

A rule (p -> q) sends every point p.s to q.s; rule domains tile the space,
so the map is everywhere defined and continuous.  Cylinder images and
preimages come out as finite unions of cylinders, which makes the digraph
over any partition exact.
"""

from cantordyn import (
    PrefixTableMap,
    classify_components,
    eventual_image,
    graph_of,
    image_cells,
    preimage_cells,
)

double = PrefixTableMap((("0", "00"), ("1", "01")))
print("rules:", double.rules)
print("apply 1    ->", double.apply("1"))
print("apply 10   ->", double.apply("10"))
print("image cells of [1] at depth 2:", image_cells(double, "1", 2))
print("preimage cells of [1] at depth 1:", preimage_cells(double, "1", 1), "(misses [1])")

print("\n== digraphs and component shapes ==")
swap = PrefixTableMap((("0", "1"), ("1", "0")))
for name, f, depth in [("swap", swap, 1), ("double", double, 2)]:
    graph = graph_of(f, depth)
    shapes = classify_components(graph)
    print(f"{name} at depth {depth}: edges {sorted(graph.edges)}")
    for s in shapes:
        print(f"   component: {s.kind}{s.params}")

print("\n== a contraction funnels the whole space to one point ==")
contraction = PrefixTableMap((("0", "00"), ("1", "000")))
for depth in (1, 2, 3):
    print(f"surviving cells at depth {depth}:", sorted(eventual_image(contraction, depth)))

print("\n== invertible tables ==")
shuffle = PrefixTableMap((("00", "0"), ("01", "10"), ("1", "11")))
print("shuffle is a homeomorphism:", shuffle.is_homeomorphism())
print("inverse rules:", shuffle.invert().rules)
print("double is a homeomorphism:", double.is_homeomorphism(), "(image misses [1])")
