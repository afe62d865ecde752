"""Vectorized exact orientation on a table of rational points.

Coordinates are assumed to lie in ``[-1, 1]``.  The float64 determinant is
then accurate to well under ``FILTER`` in absolute terms, so any value above
it has the right sign; the rest are recomputed with ``Fraction``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .geometry import Point, cross, on_closed_segment

FILTER = 1e-12


class PointTable:
    def __init__(self, points: Sequence[Point]):
        self.points = list(points)
        self.x = np.array([float(q.x) for q in self.points])
        self.y = np.array([float(q.y) for q in self.points])
        if len(self.points) and (np.abs(self.x).max() > 1 or np.abs(self.y).max() > 1):
            raise ValueError("point table expects coordinates in [-1, 1]")

    def orient(self, a, b, c) -> np.ndarray:
        """Sign of ``cross(a, b, c)`` for broadcast index arrays, as int8."""
        a, b, c = np.broadcast_arrays(np.asarray(a), np.asarray(b), np.asarray(c))
        x, y = self.x, self.y
        det = (x[b] - x[a]) * (y[c] - y[a]) - (y[b] - y[a]) * (x[c] - x[a])
        out = np.sign(det).astype(np.int8)
        amb = np.abs(det) <= FILTER
        if amb.any():
            pts = self.points
            for idx in zip(*np.nonzero(amb)):
                d = cross(pts[a[idx]], pts[b[idx]], pts[c[idx]])
                out[idx] = (d > 0) - (d < 0)
        return out

    def segments_meet(self, a, b, c, d) -> np.ndarray:
        """Closed segments ``ab`` and ``cd`` intersect (broadcast indices)."""
        a, b, c, d = np.broadcast_arrays(*(np.asarray(z) for z in (a, b, c, d)))
        s1 = self.orient(a, b, c)
        s2 = self.orient(a, b, d)
        s3 = self.orient(c, d, a)
        s4 = self.orient(c, d, b)
        hit = (s1 * s2 < 0) & (s3 * s4 < 0)
        touch = (s1 == 0) | (s2 == 0) | (s3 == 0) | (s4 == 0)
        if touch.any():
            pts = self.points
            for idx in zip(*np.nonzero(touch)):
                A, B, C, D = (pts[z[idx]] for z in (a, b, c, d))
                hit[idx] = ((s1[idx] == 0 and on_closed_segment(C, A, B))
                            or (s2[idx] == 0 and on_closed_segment(D, A, B))
                            or (s3[idx] == 0 and on_closed_segment(A, C, D))
                            or (s4[idx] == 0 and on_closed_segment(B, C, D)))
        return hit

    def on_segment(self, q, a, b) -> np.ndarray:
        """Point ``q`` lies on closed segment ``ab`` (broadcast indices)."""
        q, a, b = np.broadcast_arrays(np.asarray(q), np.asarray(a), np.asarray(b))
        s = self.orient(a, b, q)
        out = np.zeros(s.shape, dtype=bool)
        pts = self.points
        for idx in zip(*np.nonzero(s == 0)):
            out[idx] = on_closed_segment(pts[q[idx]], pts[a[idx]], pts[b[idx]])
        return out

    def in_triangle(self, q, a, b, c) -> np.ndarray:
        """Closed containment of ``q`` in triangle ``abc`` (either orientation)."""
        s1 = self.orient(a, b, q)
        s2 = self.orient(b, c, q)
        s3 = self.orient(c, a, q)
        pos = (s1 >= 0) & (s2 >= 0) & (s3 >= 0)
        neg = (s1 <= 0) & (s2 <= 0) & (s3 <= 0)
        return pos | neg
