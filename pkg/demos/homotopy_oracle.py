"""
Chain homotopy by brute force versus the group engine.

The oracle walks insert/delete moves directly. The group engine instead
turns chains into words over the non-tree edges of the Rips graph and
decides equality in the presented group. Where the oracle finds a homotopy
the engine must agree.
"""

from chaincover.groups import solver
from chaincover.homotopy import RipsEncoding
from chaincover.oracle import enumerate_classes, oracle_homotopic
from chaincover.rips import rips_graph, spanning_tree
from chaincover.fixtures import hexagon
from chaincover.space import entourage_from_scale
from chaincover.words import format_word

hexs = hexagon()

for eps in ("2.1", "1.8", "1.2"):
    E = entourage_from_scale(hexs, eps)
    g = rips_graph(hexs, E)
    enc = RipsEncoding(g, spanning_tree(g, 0))
    group = solver(enc.presentation)
    classes = enumerate_classes(hexs, E, 3, 2)
    print(f"eps={eps}: {enc.presentation}, group kind {group.kind}, {len(classes)} oracle classes")

## One explicit homotopy
E = entourage_from_scale(hexs, "1.8")
v = oracle_homotopic(hexs, E, (0, 2, 4, 0), (0,), 2)
print(v, v.moves)

## Around the circle at the finest scale
E = entourage_from_scale(hexs, "1.2")
g = rips_graph(hexs, E)
enc = RipsEncoding(g, spanning_tree(g, 0))
loop = (0, 1, 2, 3, 4, 5, 0)
print("word:", format_word(enc.word(loop)))
print(oracle_homotopic(hexs, E, loop, (0,), 4))
print(solver(enc.presentation).is_identity(enc.word(loop)))
