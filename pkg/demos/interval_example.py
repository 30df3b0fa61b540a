"""
The relation x ~ y iff x - y in U = (-1,1) u (2,4) u (-4,-2), on a grid.

U lets a chain jump by about 3 in one step. The class of the one-step chain
{0, 3} cannot be reached by small steps, so it sits outside the component A
that survives when the scale shrinks. Restricting U-steps to A recovers the
smaller relation V = (-1,1).
"""

from chaincover.covering import build_covering_ball, extract, phi_image_check
from chaincover.fixtures import grid, u_relation
from chaincover.space import entourage_from_diff_intervals, entourage_from_scale, fmt_exact

G = grid("0.25", "-6", "6")
U = u_relation(G)
z, three = G.id_of(0), G.id_of(3)
print(G, U)

## Covering ball and its stable component
ball = build_covering_ball(G, U, 12)
ladder = [U, entourage_from_scale(G, "0.6"), entourage_from_scale(G, "0.3")]
res = extract(ball, ladder)
print(ball)
print(res.stability.to_dict())

v03 = ball.vertex_of((z, three))
print("class of {0,3} in A:", v03 in res.component)

## The extracted relation
V = entourage_from_diff_intervals(G, [("-1", "1")])
print("extracted == V:", res.relation == V, len(res.relation.pairs), "pairs")
x, y = res.sorted_pairs()[-1]
print("largest pair:", fmt_exact(G.coords[x][0]), fmt_exact(G.coords[y][0]))

## Small chains miss part of the ball
img = phi_image_check(ball, ladder[-1], probe=(z, three))
print(img.verdict, "witness", ball.vertices[img.witness].chain)
