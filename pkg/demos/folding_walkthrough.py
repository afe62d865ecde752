"""Build a dual triangulation, check it, and watch the folding attempt fail.

    python demos/folding_walkthrough.py [n] [seed]
"""

import sys

from gromov_overlap.cli import generate_instance
from gromov_overlap.dual import (
    RefinementExhausted,
    check_duality,
    construct_folding_attempt,
    fundamental_class_check,
    intersection_map,
    refine_until_valid,
    scale_into_half_ball,
)

n = int(sys.argv[1]) if len(sys.argv) > 1 else 5
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 1

inst = scale_into_half_ball(generate_instance(n, seed))
try:
    X, cert, rounds = refine_until_valid(inst, seed)
    print(f"valid dual triangulation after {rounds} round(s): {cert.summary()}")
except RefinementExhausted as exc:
    # n >= 8: too many straight edges leave each vertex for property 7
    X, cert = exc.triangulation, exc.certificate
    print(f"refinement stopped: {exc}")
print(f"  {len(X.vertices)} vertices, {len(X.edges)} edges, {len(X.triangles)} triangles")

imap = intersection_map(inst, X)
print(f"duality identities hold: {check_duality(inst, X, imap).ok}")
print(f"i(t*) sums to V: {fundamental_class_check(imap, X)}")

fold = construct_folding_attempt(inst, X, imap)
print(f"\nfolding attempt from u* = {X.u_star}")
print(f"  defects (b = V): {fold.defects}  -> count {len(fold.defects)}, odd")
for key, value in fold.weights.extremes().items():
    print(f"  {key:>13}: {value}")
print(f"  every weight bound holds: {fold.weights.ok}")
