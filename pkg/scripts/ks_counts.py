"""Tabulate |S(F_q)| for the Kashiwara-Saito variety and fit the count polynomial.

    python scripts/ks_counts.py --max-q 32
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from klrtorsion.exact import poly_eval, prime_power_base
from klrtorsion.ks import (
    BRUTEFORCE_MAX_Q,
    count_points_bruteforce,
    count_points_stratified,
    dimension_estimate,
    lower_bound,
)


@dataclass
class Config:
    max_q: int = 32
    brute: bool = True


def run(cfg: Config) -> dict:
    est = dimension_estimate()
    rows = []
    for q in range(2, cfg.max_q + 1):
        if prime_power_base(q) is None:
            continue
        n = count_points_stratified(q)
        row = {"q": q, "count": n, "fit": int(poly_eval(est.coefficients, q)), "lower_bound": lower_bound(q)}
        if cfg.brute and q <= BRUTEFORCE_MAX_Q:
            row["brute"] = count_points_bruteforce(q)
        rows.append(row)
    return {"config": asdict(cfg), "polynomial": est.to_json(), "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-q", type=int, default=Config.max_q)
    ap.add_argument("--no-brute", action="store_true")
    args = ap.parse_args()
    out = run(Config(args.max_q, not args.no_brute))
    for row in out["rows"]:
        flag = "" if row["count"] == row["fit"] else "  MISMATCH"
        print(f"q={row['q']:3d}  |S(F_q)|={row['count']:>16d}{flag}")
    print(json.dumps(out["polynomial"], sort_keys=True))


if __name__ == "__main__":
    main()
