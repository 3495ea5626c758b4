"""Certify the rank conditions for every tested type and write a summary table."""
import argparse
import json
from pathlib import Path

from fktoda.rankcheck import FULL_MATRIX, certify


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/rank_table.json")
    ap.add_argument("names", nargs="*", help="subset of types, e.g. E8 B5 (default: all)")
    args = ap.parse_args()
    rows = []
    print(f"{'type':<5} {'blocks':>6} {'m_rank':>7} {'expected':>8} {'seconds':>8}  result")
    for name in args.names or FULL_MATRIX:
        r = certify(name)
        rows.append(r)
        print(f"{r['algebra']:<5} {len(r['blocks']):>6} {r['m_rank']:>7} {r['expected']:>8} {r['seconds']:>8.2f}  {'OK' if r['pass'] else 'FAIL'}")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(rows, indent=2) + "\n")
    print(f"{sum(r['pass'] for r in rows)}/{len(rows)} OK, written to {out}")


if __name__ == "__main__":
    main()
