"""Command-line entry point: ``mfseries {analyze,synth,acf,mfdfa,spectrum,convert}``.

Exit codes: 0 success, 2 configuration/validation error, 3 data error,
4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .correlation import autocorrelation, classify_decay
from .errors import ConfigError, MFSeriesError
from .io import convert_currency, ingest_csv, series_to_csv
from .mfdfa import GridSpec, fit_hurst, fluctuation_surface, log_scales, q_grid
from .pipeline import PipelineConfig, _clean, report_files, run_pipeline, write_report
from .series import TimeSeries, log_returns, normalize_returns, profile
from .spectrum import fit_spectrum, legendre_transform
from .synth import GeneratorSpec, generate

log = logging.getLogger("mfseries")


def _region(text: str):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"region must look like lo:hi, got {text!r}") from None
    return lo, hi


def _add_input(p, prices=True):
    p.add_argument("--input", required=True, help="headed UTF-8 CSV")
    p.add_argument("--date-col", default="date")
    p.add_argument("--price-col", default="price")
    if prices:
        p.add_argument("--returns", action="store_true", help="input column already holds returns")
        p.add_argument("--rates", help="CSV of daily exchange rates to convert prices before analysis")
        p.add_argument("--rate-col", help="rate column in --rates (default: --price-col)")


def _add_grid(p):
    p.add_argument("--q-min", type=float, default=-10.0)
    p.add_argument("--q-max", type=float, default=10.0)
    p.add_argument("--q-step", type=float, default=0.5)
    p.add_argument("--s-min", type=int)
    p.add_argument("--s-max", type=int)
    p.add_argument("--n-scales", type=int, default=30, help="log-spaced scales between s-min and s-max")
    p.add_argument("--order", type=int, default=2, help="detrending polynomial order m")
    p.add_argument("--region", type=_region, action="append", metavar="LO:HI",
                   help="fit region (repeatable); default 15:100 and 100:500")


def _add_output(p):
    p.add_argument("--out", help="output directory (default: JSON on stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mfseries", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full pipeline with complexity table")
    _add_input(p)
    _add_grid(p)
    p.add_argument("--window", type=int, action="append", metavar="R",
                   help="extrema window length (repeatable); default 5 and 10")
    p.add_argument("--shuffles", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit-kind", choices=("quadratic", "quartic"), default="quartic")
    _add_output(p)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic series as CSV")
    p.add_argument("--kind", required=True,
                   choices=("gaussian_white", "ar1", "fgn", "binomial_cascade", "pareto"))
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--zeta", type=float)
    p.add_argument("--as-prices", action="store_true",
                   help="emit prices 100*exp(cumsum(scale*x)) instead of the raw values")
    p.add_argument("--scale", type=float, default=0.01)
    p.add_argument("--start", default="2000-01-01", help="date of the first row")
    p.add_argument("--out", help="CSV path (default stdout)")

    p = sub.add_parser("acf", parents=[common], help="autocorrelation and decay classification")
    _add_input(p)
    p.add_argument("--max-lag", type=int, default=100)
    p.add_argument("--fit-range", type=_region, default=(1, 50), metavar="LO:HI")
    _add_output(p)

    for name in ("mfdfa", "spectrum"):
        p = sub.add_parser(name, parents=[common], help=f"{name} stage on one series")
        _add_input(p)
        _add_grid(p)
        if name == "spectrum":
            p.add_argument("--fit-kind", choices=("quadratic", "quartic"), default="quartic")
        _add_output(p)

    p = sub.add_parser("convert", parents=[common], help="convert a price series with daily exchange rates")
    _add_input(p, prices=False)
    p.add_argument("--rates", required=True)
    p.add_argument("--rate-col")
    p.add_argument("--out", help="CSV path (default stdout)")
    return ap


def _load(args) -> TimeSeries:
    ts = ingest_csv(args.input, args.date_col, args.price_col, positive=not args.returns)
    if args.rates:
        rates = ingest_csv(args.rates, args.date_col, args.rate_col or args.price_col)
        ts = convert_currency(ts, rates)
    returns = ts if args.returns else log_returns(ts)
    return normalize_returns(returns)


def _grid(args, n: int) -> GridSpec:
    s_min = args.s_min if args.s_min is not None else max(6, args.order + 2)
    s_max = args.s_max if args.s_max is not None else n // 5
    if s_max <= s_min:
        raise ConfigError(f"series of {n} points too short for scales [{s_min}, {s_max}]")
    g = GridSpec(q_grid(args.q_min, args.q_max, args.q_step), log_scales(s_min, s_max, args.n_scales),
                 args.order)
    g.validate(n)
    return g


def _emit(payload: dict, args, stem: str, csv_files: dict | None = None) -> None:
    text = json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n"
    if not args.out:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.json").write_text(text, encoding="utf-8")
    if args.format == "csv":
        for name, body in (csv_files or {}).items():
            (out / name).write_text(body, encoding="utf-8")


def _rows_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join("" if v is None else repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)
                       for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> None:
    cfg = PipelineConfig(
        input=args.input, price_column=args.price_col, date_column=args.date_col,
        returns_input=args.returns, rates=args.rates, rate_column=args.rate_col,
        q_min=args.q_min, q_max=args.q_max, q_step=args.q_step, s_min=args.s_min, s_max=args.s_max,
        n_scales=args.n_scales, order=args.order, n_shuffles=args.shuffles, seed=args.seed,
        fit_kind=args.fit_kind, out=args.out, format=args.format,
    )
    if args.region:
        cfg.regions = args.region
    if args.window:
        cfg.windows = args.window
    report = run_pipeline(cfg)
    if args.out:
        paths = write_report(report, args.out, args.format)
        log.info("wrote %d files to %s", len(paths), args.out)
    else:
        sys.stdout.write(report_files(report, "json")["report.json"])


def cmd_synth(args) -> None:
    params = {k: getattr(args, k) for k in ("phi", "hurst", "a", "zeta") if getattr(args, k) is not None}
    ts = generate(GeneratorSpec(args.kind, args.length, args.seed, params))
    x = ts.values
    col = "value"
    if args.as_prices:
        x = 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(args.scale * x)]))
        col = "price"
    try:
        start = np.datetime64(args.start, "D")
    except ValueError:
        raise ConfigError(f"bad start date {args.start!r}") from None
    out = TimeSeries(x, start + np.arange(x.size), ts.label)
    text = series_to_csv(out, "date", col)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_acf(args) -> None:
    x = _load(args)
    acf = autocorrelation(x, min(args.max_lag, (len(x) - 1) // 2))
    lo, hi = args.fit_range
    cls = classify_decay(acf, (lo, min(hi, int(acf.lags[-1]))))
    payload = {"lags": acf.lags, "C": acf.values, "n_source": acf.n_source,
               "stderr_white": acf.stderr(), "classification": asdict(cls)}
    _emit(payload, args, "acf", {"acf.csv": _rows_csv(["s", "C"], zip(acf.lags, acf.values))})


def cmd_mfdfa(args, with_spectrum=False) -> None:
    x = _load(args)
    grid = _grid(args, len(x))
    surface = fluctuation_surface(profile(x), grid)
    regions = args.region or [(15, 100), (100, 500)]
    payload = {"n": len(x), "surface": {"q": grid.q_values, "s": grid.scales, "F": surface.values},
               "regions": []}
    files = {"surface.csv": _rows_csv(["s", "q", "F"], [(s, q, surface.values[i, j])
                                                        for j, s in enumerate(grid.scales)
                                                        for i, q in enumerate(grid.q_values)])}
    for k, (lo, hi) in enumerate(regions, start=1):
        hs = fit_hurst(surface, (lo, hi))
        reg = {"fit_range": [lo, hi], "q": hs.q_values, "h": hs.h, "stderr": hs.stderr, "tau": hs.tau,
               "gamma": hs.gamma, "beta": hs.beta}
        files[f"hurst_region{k}.csv"] = _rows_csv(["q", "h", "stderr"], zip(hs.q_values, hs.h, hs.stderr))
        files[f"tau_region{k}.csv"] = _rows_csv(["q", "tau"], zip(hs.q_values, hs.tau))
        if with_spectrum:
            spec = legendre_transform(hs)
            reg["spectrum"] = {"alpha": spec.alpha, "f": spec.f, "q": spec.source_q, "valid": spec.valid}
            cp = fit_spectrum(spec, args.fit_kind)
            reg["complexity"] = cp.as_dict()
            files[f"spectrum_region{k}.csv"] = _rows_csv(["alpha", "f"], zip(spec.alpha, spec.f))
        payload["regions"].append(reg)
    _emit(payload, args, "spectrum" if with_spectrum else "mfdfa", files)


def cmd_convert(args) -> None:
    prices = ingest_csv(args.input, args.date_col, args.price_col)
    rates = ingest_csv(args.rates, args.date_col, args.rate_col or args.price_col)
    out, jr = convert_currency(prices, rates, report=True)
    log.info("matched %d days; dropped %d price days, %d rate days",
             jr.matched, jr.dropped_prices, jr.dropped_rates)
    text = series_to_csv(out, args.date_col, args.price_col)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


COMMANDS = {
    "analyze": cmd_analyze,
    "synth": cmd_synth,
    "acf": cmd_acf,
    "mfdfa": cmd_mfdfa,
    "spectrum": lambda a: cmd_mfdfa(a, with_spectrum=True),
    "convert": cmd_convert,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except MFSeriesError as e:
        print(f"mfseries {args.command}: error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
