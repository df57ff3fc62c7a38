#!/usr/bin/env python3
"""Regenerates fixtures/*.json."""

import json
import math
import pathlib

PI = math.pi
OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
DISK = {"type": "disk"}


def chord(a, b):
    return 2.0 * math.sin(abs(b - a) / 2.0)


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def split_hexagon_angles():
    # Quadrilateral 0, s, pi - s, pi with |p1p2| + |p3p4| = |p2p3| + |p1p4|.
    def green(s):
        return chord(0, s) + chord(PI - s, PI) - chord(s, PI - s) - 2.0

    s = bisect(green, 0.3, 1.5)
    return [0.0, s, PI - s, PI, PI + s, 2 * PI - s]


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write("three_value.json", {
        "name": "three_value",
        "domain": DISK,
        "boundary": [
            {"start_angle": PI / 2, "value": 0.0},
            {"start_angle": 7 * PI / 6, "value": 1.0},
            {"start_angle": 11 * PI / 6, "value": 2.0},
        ],
    })
    write("four_arc_tie.json", {
        "name": "four_arc_tie",
        "domain": DISK,
        "boundary": [
            {"start_angle": PI / 4, "value": 0.0},
            {"start_angle": 3 * PI / 4, "value": 1.0},
            {"start_angle": 5 * PI / 4, "value": 0.0},
            {"start_angle": 7 * PI / 4, "value": 1.0},
        ],
    })
    write("hexagon_equilateral.json", {
        "name": "hexagon_equilateral",
        "domain": DISK,
        "free_vertices": [k * PI / 3 for k in range(6)],
        "side_traces": [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
        "reference_value": 0.0,
        "tv_offset": 0.0,
    })
    write("hexagon_green_split.json", {
        "name": "hexagon_green_split",
        "domain": DISK,
        "free_vertices": split_hexagon_angles(),
        "side_traces": [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
        "reference_value": 0.0,
        "tv_offset": 0.0,
    })
    write("brothers.json", {
        "name": "brothers",
        "domain": DISK,
        "free_vertices": [PI / 4, 3 * PI / 4, 5 * PI / 4, 7 * PI / 4],
        "side_traces": [-1.0, 1.0, -1.0, 1.0],
        "reference_value": 0.0,
        "tv_offset": 16.0 / (3.0 * math.sqrt(2.0)),
    })
    plus = [1.0, 0.0, 0.0, 1.0, 0.0, -1.0]
    minus = [-1.0, 0.0, 0.0, 1.0, 0.0, -1.0]
    write("brothers_problem.json", {
        "name": "brothers_problem",
        "domain": DISK,
        "boundary": [
            {"start_angle": PI / 4, "poly": minus},
            {"start_angle": 3 * PI / 4, "poly": plus},
            {"start_angle": 5 * PI / 4, "poly": minus},
            {"start_angle": 7 * PI / 4, "poly": plus},
        ],
        "probe_vertices": [PI / 4, 3 * PI / 4, 5 * PI / 4, 7 * PI / 4],
    })
    arc = [(math.cos(t), math.sin(t)) for t in (k * (1.5 * PI) / 24 for k in range(25))]
    write("nonconvex_quarter.json", {
        "name": "nonconvex_quarter",
        "domain": {"type": "polygon", "vertices": [[0.0, 0.0]] + [list(p) for p in arc]},
        "boundary": [
            {"start_angle": 0.0, "value": 0.0},
            {"start_angle": PI, "value": 1.0},
        ],
    })


if __name__ == "__main__":
    main()
