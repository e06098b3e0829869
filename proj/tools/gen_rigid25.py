#!/usr/bin/env python3
"""Writes a rigid confined configuration as an incidence v1 file.

PG(2,5) with seven points removed (indices in build_pg order: normalized
triples over GF(5), last nonzero coordinate 1, lexicographic). Every line
keeps at least 3 points and every point stays on 6 lines, so the result is
confined; its full automorphism group is trivial.
"""
import sys

Q = 5
REMOVED = [3, 7, 8, 20, 23, 24, 29]


def triples():
    out = []
    for a in range(Q):
        for b in range(Q):
            for c in range(Q):
                t = (a, b, c)
                nz = [x for x in t if x]
                if nz and nz[-1] == 1:
                    out.append(t)
    return out


def main():
    pts = triples()
    keep = [p for p in range(len(pts)) if p not in REMOVED]
    new_index = {p: i for i, p in enumerate(keep)}
    lines = []
    for l in pts:
        on = [new_index[p] for p in keep if sum(x * y for x, y in zip(pts[p], l)) % Q == 0]
        lines.append(on)
    out = sys.stdout
    out.write(f"# PG(2,{Q}) minus points {' '.join(map(str, REMOVED))}\n")
    out.write(f"incidence v1 {len(keep)} {len(lines)}\n")
    for i, on in enumerate(lines):
        out.write(f"{i}: {' '.join(map(str, on))}\n")


if __name__ == "__main__":
    main()
