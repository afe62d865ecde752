"""Plain-text instance files and key/value reports.

Instance files look like::

    overlap-instance v1
    n 4
    seed 7
    point 0 0/1 0/1
    point 1 1/1 0/1
    point 2 1/1 1/1
    point 3 0/1 1/1
    p uniform

``seed`` is optional.  ``p uniform`` may be replaced by one ``p <v> <num/den>``
line per vertex.  Writing a parsed canonical file reproduces it byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .f2_complex import VertexDistribution
from .geometry import AffineInstance, Point

TAG = "overlap-instance v1"


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceFile:
    instance: AffineInstance
    seed: int | None = None


def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    try:
        if not sep:
            raise ValueError
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise InstanceFormatError(f"bad rational {text!r}; expected num/den") from None


def write_instance(inst: AffineInstance, seed: int | None = None) -> str:
    lines = [TAG, f"n {inst.n}"]
    if seed is not None:
        lines.append(f"seed {seed}")
    lines += [f"point {i} {rational(q.x)} {rational(q.y)}"
              for i, q in enumerate(inst.points)]
    if inst.is_uniform():
        lines.append("p uniform")
    else:
        lines += [f"p {v} {rational(w)}" for v, w in enumerate(inst.p.weights)]
    return "\n".join(lines) + "\n"


def read_instance(text: str) -> InstanceFile:
    """Parse an instance file; genericity is enforced by ``AffineInstance``."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != TAG:
        raise InstanceFormatError(f"first line must be {TAG!r}")
    n = seed = None
    points, weights, uniform = {}, {}, False
    for ln in lines[1:]:
        key, *rest = ln.split()
        if key == "n" and len(rest) == 1:
            n = int(rest[0])
        elif key == "seed" and len(rest) == 1:
            seed = int(rest[0])
        elif key == "point" and len(rest) == 3:
            points[int(rest[0])] = (parse_rational(rest[1]), parse_rational(rest[2]))
        elif key == "p" and rest == ["uniform"]:
            uniform = True
        elif key == "p" and len(rest) == 2:
            weights[int(rest[0])] = parse_rational(rest[1])
        else:
            raise InstanceFormatError(f"unrecognised line {ln!r}")
    if n is None or sorted(points) != list(range(n)):
        raise InstanceFormatError("points must be numbered 0..n-1")
    p = None
    if weights:
        if uniform or sorted(weights) != list(range(n)):
            raise InstanceFormatError("give 'p uniform' or one weight per vertex")
        try:
            p = VertexDistribution(tuple(weights[v] for v in range(n)))
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from None
    inst = AffineInstance([points[i] for i in range(n)], p)
    return InstanceFile(inst, seed)


class Report:
    """Ordered ``key: value`` lines; rationals print as ``num/den``."""

    def __init__(self, title: str):
        self.title = title
        self.items: list[tuple[str, str]] = []

    def add(self, key: str, value):
        self.items.append((key, _fmt(value)))
        return self

    def render(self) -> str:
        out = [f"# {self.title}"] + [f"{k}: {v}" for k, v in self.items]
        return "\n".join(out) + "\n"


def _fmt(value) -> str:
    if isinstance(value, Point):
        return f"({rational(value.x)}, {rational(value.y)})"
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return rational(value) if isinstance(value, Fraction) else str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)
