"""Size statistics for a Bruhat interval and its moment graph.

Counts vertices per length, edges, and an estimate of the linear-system size
at each vertex (sections over the open star times monomials up to the degree
bound).  Useful for deciding budgets before running ``klrtorsion bmp probe``.

    python scripts/s8_interval_stats.py --y 21654387 --w 62845173
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from math import comb

from klrtorsion.bmp import moment_graph
from klrtorsion.weyl import KS_X, KS_Y, Permutation, length


@dataclass
class Config:
    y: str = str(KS_Y)
    w: str = str(KS_X)
    top: int = 10


def monomial_count(n: int, h: int) -> int:
    """Monomials of degree <= h in n variables."""
    return comb(n + h, h)


def run(cfg: Config) -> dict:
    y, w = Permutation.parse(cfg.y), Permutation.parse(cfg.w)
    g = moment_graph(y, w)
    lw = length(w)
    above = {z: set() for z in g.vertices}
    for z in sorted(g.vertices, key=lambda z: -length(z)):
        for e in g.up_edges.get(z, ()):
            above[z] |= {e.upper} | above[e.upper]
    sizes = {}
    for z in g.vertices:
        bound = (lw - length(z)) // 2
        sizes[str(z)] = len(above[z]) * monomial_count(g.n, bound)
    largest = sorted(sizes.items(), key=lambda kv: -kv[1])[: cfg.top]
    return {"y": cfg.y, "w": cfg.w, **g.stats(), "largest_systems": largest}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--y", default=Config.y)
    ap.add_argument("--w", default=Config.w)
    ap.add_argument("--top", type=int, default=Config.top)
    args = ap.parse_args()
    print(json.dumps(run(Config(args.y, args.w, args.top)), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
