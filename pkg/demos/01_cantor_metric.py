"""A tour of the exact Cantor-space model.

Points are finite binary words with an implicit tail of zeros, distances are
1/n at the first differing coordinate, and everything is a Fraction.
"""

from fractions import Fraction

from cantordyn import (
    CylinderPartition,
    cell_distance,
    cells_meeting,
    partition_stats,
    point_distance,
    standard_partition,
)

print("== points and distances ==")
for u, v in [("", ""), ("0", "1"), ("000", "010"), ("01", "0100")]:
    print(f"d({u or 'e'!s:>5}, {v or 'e'!s:>5}) = {point_distance(u, v)}")

print("\n== cylinders at a common depth are at constant distance ==")
print("d([00], [01]) =", cell_distance("00", "01"))
print("d([01], [11]) =", cell_distance("01", "11"))

print("\n== standard partitions ==")
for depth in (1, 2, 5):
    mesh, gap = partition_stats(standard_partition(depth))
    print(f"depth {depth}: mesh = {mesh}, min inter-cell gap = {gap}")

print("\n== mixed-depth partitions are fine too ==")
mixed = CylinderPartition(("0", "10", "110", "111"))
mesh, gap = partition_stats(mixed)
print(f"cells {mixed.cells}: mesh = {mesh}, gap = {gap}")

print("\n== which cells meet a union of cylinders ==")
hits = cells_meeting(["01", "10"], standard_partition(2))
print("cells of depth 2 meeting [01] u [10]:", sorted(hits))
assert mesh == Fraction(1, 2)
