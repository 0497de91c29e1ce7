"""Complexity table for the bundled synthetic price file.

Equivalent CLI call:
    mfseries analyze --input <sample_prices.csv> --out report_dir --format csv
"""
import sys
import tempfile

from mfseries.io import sample_prices_path
from mfseries.pipeline import PipelineConfig, run_pipeline, write_report

cfg = PipelineConfig(str(sample_prices_path()), n_shuffles=2, seed=10)
report = run_pipeline(cfg)

t = report["tail"]
print(f"{report['data']['n_returns']} returns, tail zeta = {t['zeta']:.2f}")
print(f"ACF of returns: {report['acf']['total']['classification']['law']}\n")


def fmt(v):
    return "  n/a" if v is None else f"{v:5.3f}"


print(f"{'row':<20} {'alpha0':>6} {'W':>6} {'r':>6}   shuffled mean (alpha0, W, r)   verdict")
for row in report["complexity_table"]:
    o, s = row["original"], row.get("shuffled_mean", {})
    verdicts = ",".join(sorted({a["verdict"] for a in row["attribution"]}))
    print(f"{row['row']:<20} {fmt(o['alpha0']):>6} {fmt(o['W']):>6} {fmt(o['r']):>6}   "
          f"({fmt(s.get('alpha0'))}, {fmt(s.get('W'))}, {fmt(s.get('r'))})      {verdicts}"
          + ("" if o["status"] == "ok" else f"  [{o['status']}]"))

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="mfseries_")
paths = write_report(report, out, "csv")
print(f"\nwrote {len(paths)} files to {out}")
