"""Deepest points of a few small drawings, and how the game sees them.

    python demos/overlap_tour.py
"""

from fractions import Fraction

from gromov_overlap import AffineInstance, build_game, find_overlap_point, solve_game
from gromov_overlap.cli import generate_instance
from gromov_overlap.geometry import gromov_bound, weighted_bound

drawings = {
    "unit square": AffineInstance([(0, 0), (1, 0), (1, 1), (0, 1)]),
    "convex pentagon": AffineInstance([(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]),
    "random n=7": generate_instance(7, 11),
}

for name, inst in drawings.items():
    cert = find_overlap_point(inst)
    print(f"{name}: {cert.count} of {len(inst.skeleton.triangles)} triangles "
          f"meet at {cert.point}")
    # Both diagonals of the pentagon cross inside the centre cell, so two
    # extra triangles pick the point up on their boundary.
    sol = solve_game(build_game(inst))
    print(f"  game value {sol.value}, vertex strategy {[str(x) for x in sol.p_star]}")

n = 30
inst = generate_instance(n, 1)
cert = find_overlap_point(inst)
print(f"\nn={n}: fraction {cert.fraction} = {float(cert.fraction):.3f}, "
      f"guaranteed {gromov_bound(n)} = {float(gromov_bound(n)):.3f}")
print(f"weighted guarantee at n={n}: {weighted_bound(n)}")
