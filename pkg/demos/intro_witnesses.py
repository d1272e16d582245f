"""Two partial functions on (Z4,+) that no polynomial interpolates, and the relations that show it."""

import itertools

from malcev_lab import Relation, corpus_algebra, interpolate, is_type_preserving, preserves
from malcev_lab.io import load_function
from pathlib import Path

here = Path(__file__).parent / "data"
z4 = corpus_algebra("z4")

unary = load_function(here / "z4_unary.fn")
binary = load_function(here / "z4_binary.fn")

diff2 = Relation(4, 2, [(x, y) for x in range(4) for y in range(4) if (x - y) % 4 == 2])
parallel = Relation(4, 4, [t for t in itertools.product(range(4), repeat=4) if (t[0] - t[1] - t[2] + t[3]) % 4 == 0])

for label, f, rel, rel_name in (
    ("unary", unary, diff2, "x - y = 2"),
    ("binary", binary, parallel, "x1 - x2 = x3 - x4"),
):
    res = interpolate(z4, f)
    print(f"{label}: interpolable={res.interpolable}, preserves {rel_name}: {preserves(f, rel)}, "
          f"type preserving: {is_type_preserving(z4, f)}")
