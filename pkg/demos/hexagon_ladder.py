"""
Six points on a circle, looked at from coarse to fine.

At scale 2.1 every pair is close, the Rips complex is a simplex and the
chain group is trivial. At 1.8 the antipodal pairs drop out, leaving the
boundary of an octahedron, still simply connected. At 1.2 only the sides
survive and a loop around the circle can no longer be filled in.
"""

from chaincover import analyze_ladder, critical_scales, render_report
from chaincover.covering import build_covering_ball
from chaincover.fixtures import hexagon
from chaincover.space import entourage_from_scale

hexs = hexagon()

## Per-scale invariants
report = analyze_ladder(hexs, ["2.1", "1.8", "1.2"])
print(render_report(report, "csv"))
print("critical positions:", critical_scales(report))

## The covering ball at the finest scale
# Classes of chains of length <= 3 starting at point 0. Around the circle
# the two directions stay distinct, so point 3 is reached twice.
E = entourage_from_scale(hexs, "1.2")
ball = build_covering_ball(hexs, E, 3)
for v in ball.vertices:
    print(v.endpoint, v.chain, v.word)

## Bonding maps
for b in report.bonding:
    print(f"{b['coarse']} <- {b['fine']}: {b['verdict']}  ({b['certificate']})")
