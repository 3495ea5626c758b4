"""Sweep the intermediate phase spaces T^(k) and tabulate the harness verdicts."""
import argparse
import json
from pathlib import Path

from fktoda.tk import conjecture_table

DEFAULT = ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "B5", "B6"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=DEFAULT)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/conjecture_table.json")
    args = ap.parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    print(f"{'type':<4} {'k':>3} {'dim':>4} {'rank':>5} {'target':>6} {'members':>7} {'reduced':>7} {'indep':>5}  "
          f"{'verdict':<12} constant / casimirs (j>=1)")
    for name in args.names:
        for r in conjecture_table([name], args.trials, args.seed):
            c0, c1 = r["conventions"]["j>=0"], r["conventions"]["j>=1"]
            rows.append(r)
            print(f"{r['algebra']:<4} {r['k']:>3} {r['dim']:>4} {r['poisson_rank']:>5} {r['liouville_target']:>6} "
                  f"{c0['size']:>7} {c0['reduced_size']:>7} {c0['independence_rank']:>5}  {c0['verdict']:<12} "
                  f"{','.join(c0['constant']) or '-'} / {','.join(c1['casimir_labels'])}", flush=True)
            out.write_text(json.dumps(rows, indent=2) + "\n")
    bad = [(r["algebra"], r["k"]) for r in rows if r["conventions"]["j>=0"]["verdict"] != "CONSISTENT"]
    print(f"{len(rows) - len(bad)}/{len(rows)} CONSISTENT; INCONSISTENT at {bad or 'none'}")


if __name__ == "__main__":
    main()
