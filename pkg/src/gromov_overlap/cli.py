"""Command-line front end.

Exit codes: 0 success, 1 property or bound failure, 2 bad input,
3 refinement exhaustion.  Reports go to stdout (or ``--out``) and depend only
on the input bytes, the command and the seed; wall-clock timings are printed
to stderr so reports stay reproducible.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from math import comb

from . import selfcheck
from .dual import (
    RefinementExhausted,
    check_duality,
    construct_folding_attempt,
    fundamental_class_check,
    intersection_map,
    refine_until_valid,
    scale_into_half_ball,
)
from .dual.folding import DualityViolation, ParityViolation
from .f2_complex import VertexDistribution
from .formats import InstanceFile, InstanceFormatError, Report, read_instance, write_instance
from .game import GapDetected, build_game, solve_game, verify_duality_gap
from .geometry import (
    AffineInstance,
    BoundViolation,
    DegenerateInstance,
    find_overlap_point,
    gromov_bound,
    weighted_bound,
)

OK, FAILED, BAD_INPUT, EXHAUSTED = 0, 1, 2, 3
GRID = 4096


class BadInput(Exception):
    pass


def generate_instance(n: int, seed: int, mode: str = "uniform") -> AffineInstance:
    """``n`` generic points on the ``1/4096`` grid in ``[-1, 1]^2``."""
    if n < 3:
        raise BadInput("n must be at least 3")
    rng = random.Random(seed)
    pts: list[tuple[Fraction, Fraction]] = []
    while len(pts) < n:
        q = (Fraction(rng.randint(-GRID, GRID), GRID),
             Fraction(rng.randint(-GRID, GRID), GRID))
        try:
            AffineInstance(pts + [q]) if len(pts) >= 2 else None
        except DegenerateInstance:
            continue
        if q not in pts:
            pts.append(q)
    p = VertexDistribution.random(n, rng) if mode == "random" else None
    return AffineInstance(pts, p)


def _load(path: str, mode: str, seed: int | None) -> InstanceFile:
    try:
        with open(path, encoding="utf-8") as fh:
            f = read_instance(fh.read())
    except OSError as exc:
        raise BadInput(str(exc)) from None
    except (InstanceFormatError, DegenerateInstance) as exc:
        raise BadInput(f"{path}: {exc}") from None
    inst = f.instance
    if mode == "uniform":
        inst = inst.with_distribution(VertexDistribution.uniform(inst.n))
    elif mode == "random":
        rng = random.Random(seed if seed is not None else f.seed)
        inst = inst.with_distribution(VertexDistribution.random(inst.n, rng))
    return InstanceFile(inst, f.seed)


def cmd_gen(args) -> tuple[str, int]:
    inst = generate_instance(args.n, args.seed, args.p)
    return write_instance(inst, args.seed), OK


def cmd_overlap(args) -> tuple[str, int]:
    inst = _load(args.file, args.p, args.seed).instance
    n = inst.n
    rep = Report("overlap")
    rep.add("n", n).add("uniform", "yes" if inst.is_uniform() else "no")
    try:
        cert = find_overlap_point(inst, check_bounds=False)
    except DegenerateInstance as exc:
        raise BadInput(str(exc)) from None
    weighted_ok = cert.weighted >= weighted_bound(n)
    rep.add("point", cert.point).add("count", cert.count)
    rep.add("triangles", comb(n, 3)).add("fraction", cert.fraction)
    rep.add("weighted", cert.weighted)
    rep.add("covering", [list(t) for t in cert.covering.simplices()])
    rep.add("gromov_bound", gromov_bound(n))
    rep.add("weighted_bound", weighted_bound(n))
    ok = weighted_ok
    if inst.is_uniform():
        count_ok = cert.fraction >= gromov_bound(n)
        rep.add("gromov_check", count_ok)
        ok &= count_ok
    rep.add("weighted_check", weighted_ok)
    rep.add("status", ok)
    return rep.render(), OK if ok else FAILED


def cmd_folding(args) -> tuple[str, int]:
    f = _load(args.file, args.p, args.seed)
    inst = scale_into_half_ball(f.instance)
    rep = Report("folding")
    rep.add("n", inst.n).add("seed", args.seed).add("mesh_start", args.mesh_start)
    try:
        X, cert, rounds = refine_until_valid(inst, args.seed, args.mesh_start)
    except RefinementExhausted as exc:
        rep.add("rounds", exc.rounds)
        if exc.certificate is not None:
            rep.add("properties", exc.certificate.summary())
        rep.add("refinement", f"exhausted: {exc}")
        rep.add("status", False)
        return rep.render(), EXHAUSTED
    rep.add("rounds", rounds).add("mesh", X.mesh)
    nv, ne, nt = X.sizes
    rep.add("dual_vertices", nv).add("dual_edges", ne).add("dual_triangles", nt)
    rep.add("properties", cert.summary())
    rep.add("t_star", [cert.t_star[v] for v in range(inst.n)])
    imap = intersection_map(inst, X)
    duality = check_duality(inst, X, imap)
    fundamental = fundamental_class_check(imap, X)
    rep.add("duality", duality.ok).add("fundamental_class", fundamental)
    ok = duality.ok and fundamental
    if ok:
        try:
            fold = construct_folding_attempt(inst, X, imap)
        except (DualityViolation, ParityViolation) as exc:
            rep.add("folding", f"error: {exc}")
            ok = False
        else:
            rep.add("defects", len(fold.defects))
            rep.add("defects_odd", len(fold.defects) % 2 == 1)
            rep.add("defect_triangles", fold.defects)
            for key, value in fold.weights.extremes().items():
                rep.add(key, value)
            rep.add("weight_bounds", fold.weights.ok)
            ok &= len(fold.defects) % 2 == 1 and fold.weights.ok
    rep.add("status", ok)
    if args.triangulation:
        from .dual import write_triangulation
        with open(args.triangulation, "w", encoding="utf-8") as fh:
            fh.write(write_triangulation(X))
    return rep.render(), OK if ok else FAILED


def cmd_game(args) -> tuple[str, int]:
    inst = _load(args.file, "file", None).instance
    g = build_game(inst)
    s = solve_game(g)
    rep = Report("game")
    rep.add("n", inst.n).add("rows", len(g.rows)).add("pivots", s.pivots)
    rep.add("value", s.value)
    rep.add("p_star", list(s.p_star))
    for point, mass in s.support(g):
        rep.add("mu", f"{_q(mass)} at {_pt(point)}")
    try:
        gap = verify_duality_gap(g, s, inst)
    except GapDetected as exc:
        rep.add("gap", f"detected: {exc}").add("status", False)
        return rep.render(), FAILED
    rep.add("mu_guarantee", gap.row_guarantee)
    rep.add("p_star_concedes", gap.column_guarantee)
    rep.add("gap", gap.column_guarantee - gap.row_guarantee)
    rep.add("value_bound", gap.bound)
    rep.add("value_check", s.value >= gap.bound)
    rep.add("status", True)
    return rep.render(), OK


def _q(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _pt(p) -> str:
    return f"({_q(p.x)}, {_q(p.y)})"


def cmd_selfcheck(args) -> tuple[str, int]:
    rep = Report("selfcheck")
    rep.add("max_n", args.max_n).add("seed", args.seed)
    results = selfcheck.run_selfcheck(args.max_n, args.seed)
    for r in results:
        rep.add(r.name, f"{'pass' if r.passed else 'FAIL'} ({r.cases} cases)"
                + (f" {r.detail}" if r.detail else ""))
    ok = all(r.passed for r in results)
    if not ok:
        rep.add("first_failure", results[-1].name)
    rep.add("status", ok)
    return rep.render(), OK if ok else FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gromov-overlap",
                                 description="Exact planar overlap certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--out", help="write the output here instead of stdout")

    g = sub.add_parser("gen", help="random generic instance")
    g.add_argument("n", type=int)
    g.add_argument("--p", choices=["uniform", "random"], default="uniform")
    common(g)
    g.set_defaults(func=cmd_gen)

    o = sub.add_parser("overlap", help="certified deepest point")
    o.add_argument("file")
    o.add_argument("--p", choices=["uniform", "random", "file"], default="file")
    common(o, None)
    o.set_defaults(func=cmd_overlap)

    f = sub.add_parser("folding", help="dual triangulation and folding attempt")
    f.add_argument("file")
    f.add_argument("--p", choices=["uniform", "random", "file"], default="file")
    f.add_argument("--mesh-start", type=Fraction, default=Fraction(1, 4))
    f.add_argument("--triangulation", help="also export the dual triangulation")
    common(f)
    f.set_defaults(func=cmd_folding)

    m = sub.add_parser("game", help="exact minimax distribution")
    m.add_argument("file")
    common(m)
    m.set_defaults(func=cmd_game)

    s = sub.add_parser("selfcheck", help="lemma and claim suites")
    s.add_argument("max_n", type=int, nargs="?", default=5)
    common(s)
    s.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    start = time.perf_counter()
    try:
        text, code = args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (BoundViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT if isinstance(exc, ValueError) else FAILED
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{args.command}: {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
