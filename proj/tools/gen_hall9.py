#!/usr/bin/env python3
"""Writes the Hall plane of order 9 (the nearfield plane) as an incidence v1 file.

GF(9) = GF(3)[i]/(i^2 + 1); element a + b*i is encoded as a + 3b.
Nearfield product: x o m = x*m when m is a square, x^3 * m otherwise.
Affine points (x, y) get index 9x + y; the point at infinity of slope m is
81 + m, the vertical direction is 90. Lines y = x o m + b come first
(index 9m + b), then x = c (81 + c), then the line at infinity (90).
"""
import sys


def add(u, v):
    return (u % 3 + v % 3) % 3 + 3 * ((u // 3 + v // 3) % 3)


def mul(u, v):
    a, b = u % 3, u // 3
    c, d = v % 3, v // 3
    return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)


def power(u, e):
    r = 1
    for _ in range(e):
        r = mul(r, u)
    return r


SQUARES = {mul(x, x) for x in range(1, 9)}


def near(x, m):
    if m == 0 or m in SQUARES:
        return mul(x, m)
    return mul(power(x, 3), m)


def main():
    lines = []
    for m in range(9):
        for b in range(9):
            pts = [9 * x + add(near(x, m), b) for x in range(9)] + [81 + m]
            lines.append(sorted(pts))
    for c in range(9):
        lines.append(sorted([9 * c + y for y in range(9)] + [90]))
    lines.append(list(range(81, 91)))
    out = sys.stdout if len(sys.argv) < 2 else open(sys.argv[1], "w")
    out.write(f"incidence v1 91 {len(lines)}\n")
    for i, pts in enumerate(lines):
        out.write(f"{i}: {' '.join(map(str, pts))}\n")


if __name__ == "__main__":
    main()
