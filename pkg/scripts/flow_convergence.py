"""Invariant drift of the RK4 Lax flow as the step is halved."""
import argparse
import csv
from pathlib import Path

from fktoda.lax import integrate_flow, lax_model, toda_initial_point


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["A1", "A2"])
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--dts", type=float, nargs="+", default=[4e-3, 2e-3, 1e-3, 5e-4])
    ap.add_argument("--scale", type=float, default=2.0)
    ap.add_argument("--out", default="results/flow_convergence.csv")
    args = ap.parse_args()
    rows = []
    for name in args.names:
        model = lax_model(name)
        z0 = toda_initial_point(model, args.scale, 0)
        prev = None
        for dt in args.dts:
            res = integrate_flow(model, z0, args.t_end, dt)
            ratio = prev / res.max_drift if prev and res.max_drift > 0 else None
            rows.append({"algebra": name, "dt": dt, "max_rel_drift": res.max_drift, "ratio": ratio})
            print(f"{name:<4} dt={dt:<8g} drift={res.max_drift:.3e}" + (f"  ratio={ratio:.1f}" if ratio else ""))
            prev = res.max_drift
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
