"""Run the torsion probe over every Bruhat interval of S_n for several primes.

    python scripts/torsion_sweep.py --n 4 --primes 2 3
"""

from __future__ import annotations

import argparse
import itertools
import json
import time
from collections import Counter
from dataclasses import dataclass, field

from klrtorsion.bmp import torsion_probe
from klrtorsion.weyl import Permutation, bruhat_leq


@dataclass
class Config:
    n: int = 4
    primes: list[int] = field(default_factory=lambda: [2, 3])
    budget: float | None = None


def run(cfg: Config) -> dict:
    start = time.monotonic()
    verdicts: Counter = Counter()
    divergent = []
    for y, w in itertools.product(Permutation.all(cfg.n), repeat=2):
        if y == w or not bruhat_leq(y, w):
            continue
        for p in cfg.primes:
            r = torsion_probe(y, w, p, budget=cfg.budget)
            verdicts[r.verdict] += 1
            if r.verdict == "DIVERGENT":
                divergent.append({"y": str(y), "w": str(w), "p": p, "at": [str(z) for z in r.divergent]})
    return {
        "n": cfg.n,
        "primes": cfg.primes,
        "verdicts": dict(sorted(verdicts.items())),
        "divergent": divergent,
        "seconds": round(time.monotonic() - start, 1),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--budget", type=float, default=None, help="seconds per interval")
    args = ap.parse_args()
    print(json.dumps(run(Config(args.n, args.primes, args.budget)), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
