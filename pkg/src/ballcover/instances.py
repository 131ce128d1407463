"""Benchmark regions: five unions of convex polygons.

Vertex lists are entered in the units in which they are usually published and
scaled at load time, so the tables below can be compared against the source
by eye.
"""

import math

from .geometry import Region

__all__ = ["INSTANCE_NAMES", "UnknownInstance", "get_instance", "instance_polygons"]


class UnknownInstance(KeyError):
    pass


_S3 = math.sqrt(3.0)

# scaled by 1/150
_NONCONVEX_HOLES = [
    [(0, 100), (0, 70), (20, 70), (20, 100)],
    [(35, 50), (20, 70), (0, 70), (0, 30), (20, 30)],
    [(0, 30), (0, -40), (20, -40), (20, 30)],
    [(0, -40), (0, -50), (20, -50), (20, -40)],
    [(20, 100), (20, 70), (70, 70), (70, 100)],
    [(70, 70), (80, 70), (90, 100), (70, 100)],
    [(80, 70), (70, 70), (45, 50), (70, 30), (90, 50)],
    [(70, 30), (20, 30), (20, -40), (60, 0)],
    [(110, 20), (90, 50), (70, 30), (60, 0), (90, 0)],
    [(130, -40), (130, -50), (150, -50), (150, -40)],
    [(130, 50), (110, 20), (130, -40), (150, -40), (150, 50)],
    [(130, 100), (120, 100), (110, 80), (130, 50), (150, 50), (150, 80)],
    [(110, 80), (120, 100), (80, 70), (90, 50)],
    [(110, 20), (90, 0), (130, -40)],
]

# scaled by 1/20; A_6 is the triangle closing the gap between A_4 and A_7
_AMERICA = [
    [(4.5, 24), (3.5, 23.8), (2.7, 23), (2.75, 22.15), (3, 21.5), (4, 22)],
    [(4.5, 24), (4, 22), (5.5, 22), (5.8, 23.8)],
    [(6, 21), (6.4, 20), (10, 20)],
    [(5.5, 22), (6, 21), (10, 20), (10, 21.5), (9, 23.5), (7.3, 23.7), (5.8, 23.8)],
    [(10, 20), (11, 19.1), (11.2, 20.2), (10, 21.5)],
    [(10, 21.5), (10, 22.2), (9, 23.5)],
    [(10, 22.2), (10.2, 23.3), (9, 23.5)],
    [(10, 22.2), (11.5, 23), (11, 24.6), (10.2, 23.3)],
    [(11, 19.1), (11.4, 18.4), (12.5, 19.5), (12.4, 19.9), (11.2, 20.2)],
    [(12.4, 19.9), (13.8, 20.6), (11.8, 22.4), (11.2, 20.5), (11.2, 20.2)],
    [(12.5, 19.5), (13.1, 19.5), (12.4, 19.9)],
    [(6.4, 20), (6.1, 19.5), (6, 18.7), (6.2, 18.2), (6.6, 17.6), (6.8, 17.5), (6.9, 17.5),
     (11.3, 17.8), (11.4, 18.4), (11, 19.1), (10, 20)],
    [(6.9, 17.5), (10.7, 17.4), (11.3, 17.8)],
    [(10.4, 17.2), (10.5, 16.6), (10.6, 16.6), (10.7, 17.4)],
    [(6.9, 17.5), (9.3, 17.2), (10.4, 17.2), (10.7, 17.4)],
    [(6.9, 17.5), (8.4, 16.6), (9.3, 17.2)],
    [(6.9, 17.5), (7.4, 16.6), (7.8, 15.9), (8.5, 16), (8.4, 16.6)],
    [(7.8, 15.9), (7.7, 15.8), (8.5, 15.3), (8.9, 15.3), (9, 15.6), (8.5, 16)],
    [(8.9, 15.3), (9.2, 15), (9.4, 15.3), (9.3, 15.5), (9, 15.6)],
    [(9.3, 15.5), (9.7, 15.6), (9.9, 16), (9.5, 16), (9, 15.6)],
    [(6.6, 17.6), (6.8, 16.8), (7, 16.8), (6.8, 17.5)],
    [(6.8, 16.8), (7.1, 16.3), (7.2, 16.3), (7, 16.8)],
    [(9.2, 15), (9.7, 14.7), (10.2, 14.5), (10.2, 15.3), (9.4, 15.3)],
    [(9.7, 14.7), (10, 14.4), (10.8, 14.1), (10.9, 14.2), (10.2, 14.5)],
    [(10.4, 16.2), (11, 15.8), (11.3, 16), (10.4, 16.3)],
    [(10.7, 13.2), (10.5, 12.5), (10.7, 11.25), (11.4, 10.6), (14.2, 9.7), (15, 10), (15.3, 10.8),
     (15.3, 11.3)],
    [(12.2, 5.4), (11.9, 5.3), (12.2, 5.2), (12.2, 5.4)],
    [(15.3, 11.3), (15.7, 12.2), (14.6, 12.8), (10.9, 14.2), (10.8, 14.1), (10.7, 13.2)],
    [(14.6, 12.8), (13.8, 13.5), (12.9, 14.1), (12.1, 14.5), (11.6, 14.6), (10.9, 14.2)],
    [(12.9, 14.1), (12.5, 14.5), (12.1, 14.5)],
    [(11.4, 10.6), (11.4, 7.5), (11.5, 5.7), (11.8, 5.5), (12.1, 5.6), (12.3, 6.7)],
    [(12.3, 6.7), (12.6, 7.7), (11.4, 10.6)],
    [(12.6, 7.7), (13.2, 7.7), (13.1, 8.4), (11.4, 10.6)],
    [(13.1, 8.4), (13.5, 8.3), (13.7, 8.6), (14.2, 9.7), (11.4, 10.6)],
]

_MINKOWSKI_CORNERS = [
    (3, 0), (1, 1), (3, 1), (4, 1), (0, 2), (1, 2), (2, 2), (3, 2),
    (2, 3), (3, 3), (4, 3), (5, 3), (1, 4), (2, 4), (4, 4), (2, 5),
]

# bottom-left group and central square, scaled by 1/18
_CESARO_BASE = [
    [(9, 3 * _S3), (18 - 3 * _S3, 9), (9, 18 - 3 * _S3), (3 * _S3, 9)],
    [(0, 0), (2, 0), (3, _S3), (_S3, 3), (0, 2)],
    [(4, 0), (6, 0), (7, _S3), (6, 2 * _S3), (3, _S3)],
    [(6, 2 * _S3), (8, 2 * _S3), (9, 3 * _S3), (3 * _S3, 9), (2 * _S3, 8), (2 * _S3, 6)],
    [(0, 6), (0, 4), (_S3, 3), (2 * _S3, 6), (_S3, 7)],
    [(3, _S3), (6, 2 * _S3), (2 * _S3, 6), (_S3, 3)],
]


def _scaled(polys, s):
    return [[(x * s, y * s) for x, y in poly] for poly in polys]


def _rotate(poly, angle, cx, cy):
    c, s = math.cos(angle), math.sin(angle)
    # exact quarter turns keep the shared vertices bit-identical
    k = round(angle / (math.pi / 2))
    if abs(angle - k * math.pi / 2) < 1e-15:
        c, s = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][k % 4]
    return [(cx + c * (x - cx) - s * (y - cy), cy + s * (x - cx) + c * (y - cy)) for x, y in poly]


def _star():
    R = 1.0 / (2.0 * math.sin(math.pi / 8))
    octagon = [(R * math.cos(k * math.pi / 4), R * math.sin(k * math.pi / 4)) for k in range(1, 9)]
    mx = 0.5 * (R * math.cos(math.pi / 4) + R * math.cos(math.pi / 2))
    my = 0.5 * (R * math.sin(math.pi / 4) + R * math.sin(math.pi / 2))
    d = math.hypot(mx, my)
    dp = d + 2 * R
    polys = [octagon]
    for k in range(8):
        # triangle on the octagon edge between angles k*pi/4 and (k+1)*pi/4,
        # built from the same octagon vertices so interior edges match exactly
        a = octagon[k % 8]
        b = octagon[(k - 1) % 8]
        phi = math.pi / 8 + k * math.pi / 4
        polys.append([a, b, (dp * math.cos(phi), dp * math.sin(phi))])
    return polys


def _minkowski():
    return [[(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)] for x, y in _MINKOWSKI_CORNERS]


def _cesaro():
    base = _scaled(_CESARO_BASE, 1.0 / 18.0)
    polys = [base[0]]
    for q in range(4):
        for poly in base[1:]:
            polys.append(_rotate(poly, q * math.pi / 2, 0.5, 0.5))
    return polys


def _dedupe(poly):
    out = []
    for p in poly:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


_BUILDERS = {
    "nonconvex_holes": lambda: _scaled(_NONCONVEX_HOLES, 1.0 / 150.0),
    "america": lambda: [_dedupe(p) for p in _scaled(_AMERICA, 1.0 / 20.0)],
    "star": _star,
    "minkowski": _minkowski,
    "cesaro": _cesaro,
}

INSTANCE_NAMES = tuple(_BUILDERS)


def instance_polygons(name):
    """Raw vertex lists of a catalog entry (before Region validation)."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownInstance(name) from None


def get_instance(name):
    return Region.from_polygons(instance_polygons(name))
