"""Small named graphs used across the test modules."""

from conftest import G

DISK = "vertex 1 B / vertex 2 D / edge 1 1.1 2.1"
SPHERE = "vertex 1 D / vertex 2 D / edge 1 1.1 2.1"
RP2 = "vertex 1 D / vertex 2 M / edge 1 1.1 2.1"
D_Y3 = "vertex 1 D / vertex 2 Y3 / edge 1 1.1 2.1"
PANTS_3B = "vertex 1 P / vertex 2 B / vertex 3 B / vertex 4 B / edge 1 1.1 2.1 / edge 2 1.2 3.1 / edge 3 1.3 4.1"
ANNULUS = "vertex 1 B / vertex 2 B / edge 1 1.1 2.1"
# two pants joined by two parallel edges, third slots to B's
PANTS_CYCLE = (
    "vertex 1 P / vertex 2 P / vertex 3 B / vertex 4 B / "
    "edge 1 1.1 2.1 / edge 2 1.2 2.2 / edge 3 1.3 3.1 / edge 4 2.3 4.1"
)
# B on the doubled slot of a Y12 whose single slot caps with a disk
B_Y12_D = "vertex 1 B / vertex 2 Y12 / vertex 3 D / edge 1 1.1 2.2 / edge 2 2.1 3.1"
# pants with B, a Y12 on its doubled slot, and a disk; the Y12's single leg capped
C_PATTERN = (
    "vertex 1 B / vertex 2 P / vertex 3 Y12 / vertex 4 D / vertex 5 D / "
    "edge 1 1.1 2.1 / edge 2 2.2 3.2 / edge 3 2.3 4.1 / edge 4 3.1 5.1"
)


def disk():
    return G(DISK)
