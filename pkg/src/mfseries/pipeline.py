"""End-to-end workflow: prices -> returns -> ACF/tail -> MF-DFA -> f(alpha) -> complexity table.

The same chain runs on the full return series (once per fit region), on
every windowed maxima/minima sequence, and on seeded shuffled surrogates of
each. ``run_pipeline`` returns a JSON-ready report; ``write_report`` emits
it together with flat per-plot CSV files.
"""

from __future__ import annotations

import contextlib
import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .correlation import autocorrelation, classify_decay, tail_exponent
from .errors import ConfigError, InsufficientDataError, MFSeriesError, WidthUndefinedError
from .io import convert_currency, ingest_csv
from .mfdfa import GridSpec, fit_hurst, fluctuation_surface, log_scales, q_grid
from .series import TimeSeries, extrema_sequence, log_returns, normalize_returns, profile, shuffle
from .spectrum import compare_surrogate, fit_spectrum, legendre_transform

__all__ = ["PipelineConfig", "analyze_series", "run_pipeline", "write_report", "report_files"]

ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X")


@dataclass
class PipelineConfig:
    input: str
    price_column: str = "price"
    date_column: str = "date"
    returns_input: bool = False
    rates: Optional[str] = None
    rate_column: Optional[str] = None
    q_min: float = -10.0
    q_max: float = 10.0
    q_step: float = 0.5
    s_min: Optional[int] = None
    s_max: Optional[int] = None
    n_scales: int = 30
    order: int = 2
    regions: list = field(default_factory=lambda: [(15, 100), (100, 500)])
    windows: list = field(default_factory=lambda: [5, 10])
    extrema_scales: tuple = (5, 75)
    n_shuffles: int = 1
    seed: int = 0
    acf_max_lag: int = 100
    acf_fit_range: tuple = (1, 50)
    tail_fraction: float = 0.05
    fit_kind: str = "quartic"
    out: Optional[str] = None
    format: str = "json"

    def validate(self) -> None:
        """Parameter checks that do not need the data (grid-vs-length checks happen after ingestion)."""
        q_grid(self.q_min, self.q_max, self.q_step)
        if int(self.order) != self.order or self.order < 1:
            raise ConfigError(f"detrend order must be a positive integer, got {self.order}")
        if self.s_min is not None and self.s_min < self.order + 2:
            raise ConfigError(f"s_min {self.s_min} below m + 2 = {self.order + 2}")
        if self.s_min is not None and self.s_max is not None and self.s_max <= self.s_min:
            raise ConfigError(f"s_max {self.s_max} must exceed s_min {self.s_min}")
        if not self.regions:
            raise ConfigError("at least one fit region is required")
        for lo, hi in self.regions:
            if not 0 < lo < hi:
                raise ConfigError(f"bad fit region {lo}:{hi}")
        if len(self.regions) > len(ROMAN):
            raise ConfigError(f"at most {len(ROMAN)} regions")
        for R in self.windows:
            if int(R) != R or R < 1:
                raise ConfigError(f"window length must be a positive integer, got {R}")
        lo, hi = self.extrema_scales
        if not self.order + 2 <= lo < hi:
            raise ConfigError(f"bad extrema scale bounds {lo}:{hi}")
        if self.n_shuffles < 0:
            raise ConfigError("number of shuffles must be non-negative")
        if self.fit_kind not in ("quadratic", "quartic"):
            raise ConfigError(f"fit kind must be quadratic or quartic, got {self.fit_kind!r}")
        if not 0 < self.tail_fraction <= 0.5:
            raise ConfigError(f"tail fraction must lie in (0, 0.5], got {self.tail_fraction}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d["input"] = Path(self.input).name
        d["rates"] = None if self.rates is None else Path(self.rates).name
        d["out"] = None
        d["regions"] = [list(r) for r in self.regions]
        d["extrema_scales"] = list(self.extrema_scales)
        d["acf_fit_range"] = list(self.acf_fit_range)
        return d


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except MFSeriesError as e:
        e.stage = name
        e.args = (f"stage {name!r}: {e.args[0] if e.args else ''}",) + e.args[1:]
        raise


def _clean(x):
    """Make a value JSON-safe: numpy -> python, NaN/inf -> None."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def analyze_series(ts, grid: GridSpec, regions, fit_kind: str = "quartic") -> dict:
    """MF-DFA, Legendre transform and complexity fit of one series, per fit region.

    A spectrum whose fitted polynomial has no bracketing zeros (or too few
    monotone points) is reported with a ``status`` and partial parameters
    rather than aborting the run.
    """
    surface = fluctuation_surface(profile(ts), grid)
    out_regions = []
    for lo, hi in regions:
        hs = fit_hurst(surface, (lo, hi))
        spec = legendre_transform(hs)
        status, message = "ok", ""
        try:
            cp = fit_spectrum(spec, fit_kind)
        except WidthUndefinedError as e:
            cp, status, message = e.partial, "width_undefined", str(e)
        except InsufficientDataError as e:
            cp, status, message = None, "insufficient_points", str(e)
        out_regions.append({"fit_range": (lo, hi), "hurst": hs, "spectrum": spec, "complexity": cp,
                            "status": status, "message": message})
    return {"n": len(ts), "surface": surface, "regions": out_regions}


def _region_json(reg: dict, name: str) -> dict:
    hs, spec, cp = reg["hurst"], reg["spectrum"], reg["complexity"]
    return {
        "region": name,
        "fit_range": list(reg["fit_range"]),
        "scales_used": hs.scales_used,
        "hurst": {"q": hs.q_values, "h": hs.h, "stderr": hs.stderr, "intercept": hs.intercept},
        "tau": hs.tau,
        "h2": hs.h_at(2.0) if np.any(hs.q_values == 2.0) else None,
        "gamma": hs.gamma,
        "beta": hs.beta,
        "spectrum": {"q": spec.source_q, "alpha": spec.alpha, "f": spec.f, "valid": spec.valid},
        "complexity": None if cp is None else cp.as_dict(),
        "status": reg["status"],
        "message": reg["message"],
    }


def _analysis_json(an: dict, names) -> dict:
    s = an["surface"]
    return {
        "n": an["n"],
        "surface": {"q": s.q_values, "s": s.scales, "F": s.values, "n_segments": s.n_segments,
                    "flagged_cells": int(s.flags.sum())},
        "regions": [_region_json(r, nm) for r, nm in zip(an["regions"], names)],
    }


def _acf_json(ts, max_lag, fit_range) -> dict:
    n = len(ts)
    max_lag = min(max_lag, (n - 1) // 2)
    acf = autocorrelation(ts, max_lag)
    lo, hi = fit_range
    cls = classify_decay(acf, (lo, min(hi, max_lag)))
    return {"lags": acf.lags, "C": acf.values, "n_source": n, "stderr_white": acf.stderr(),
            "classification": asdict(cls)}


def _cp_summary(reg: dict) -> dict:
    cp = reg["complexity"]
    keys = ("alpha0", "W", "r")
    vals = {k: (getattr(cp, k) if cp is not None else float("nan")) for k in keys}
    vals["status"] = reg["status"]
    return vals


def run_pipeline(config: PipelineConfig) -> dict:
    """Run the full workflow and return the report as a JSON-ready dict.

    Nothing is written to disk; see ``write_report``.
    """
    with _stage("config"):
        config.validate()
    with _stage("ingest"):
        raw = Path(config.input).read_bytes() if Path(config.input).exists() else b""
        ts = ingest_csv(config.input, config.date_column, config.price_column,
                        positive=not config.returns_input)
        digest = hashlib.sha256(raw).hexdigest()
        rates_digest = None
        join = None
        if config.rates:
            rates = ingest_csv(config.rates, config.date_column, config.rate_column or config.price_column)
            rates_digest = hashlib.sha256(Path(config.rates).read_bytes()).hexdigest()
            ts, jr = convert_currency(ts, rates, report=True)
            join = asdict(jr)
    with _stage("returns"):
        returns = ts if config.returns_input else log_returns(ts)
        r = normalize_returns(returns)
    n = len(r)
    with _stage("grid"):
        q = q_grid(config.q_min, config.q_max, config.q_step)
        s_min = config.s_min if config.s_min is not None else max(6, config.order + 2)
        s_max = config.s_max if config.s_max is not None else n // 5
        if s_max <= s_min:
            raise ConfigError(f"series of {n} returns too short for scales [{s_min}, {s_max}]")
        grid = GridSpec(q, log_scales(s_min, s_max, config.n_scales), config.order)
        grid.validate(n)
        for lo, hi in config.regions:
            k = int(np.sum((grid.scales >= lo) & (grid.scales <= hi)))
            if k < 4:
                raise ConfigError(f"fit region {lo}:{hi} holds {k} grid scales (need 4) "
                                  f"for {n} returns with scales [{s_min}, {s_max}]")
    region_names = [f"Region {ROMAN[i]}" for i in range(len(config.regions))]
    seeds = [config.seed + k for k in range(config.n_shuffles)]

    with _stage("acf"):
        acf = {"total": _acf_json(r, config.acf_max_lag, config.acf_fit_range)}
    with _stage("tail"):
        tail = asdict(tail_exponent(returns, config.tail_fraction))

    series_out, table = [], []

    def run_one(name, kind, window, x, grid_x, regions_x, names_x, row_labels):
        with _stage(f"mfdfa:{name}"):
            orig = analyze_series(x, grid_x, regions_x, config.fit_kind)
            shuf = [analyze_series(shuffle(x, sd), grid_x, regions_x, config.fit_kind) for sd in seeds]
        entry = {"name": name, "kind": kind, "window": window, "n": len(x),
                 "original": _analysis_json(orig, names_x),
                 "shuffles": [dict(seed=sd, **_analysis_json(a, names_x)) for sd, a in zip(seeds, shuf)]}
        series_out.append(entry)
        for i, label in enumerate(row_labels):
            o = orig["regions"][i]
            row = {"row": label, "series": name, "fit_range": list(regions_x[i]),
                   "original": _cp_summary(o), "shuffled": [], "attribution": []}
            for sd, a in zip(seeds, shuf):
                srow = _cp_summary(a["regions"][i])
                srow["seed"] = sd
                row["shuffled"].append(srow)
                att = compare_surrogate((o["complexity"], o["hurst"]),
                                        (a["regions"][i]["complexity"], a["regions"][i]["hurst"]))
                row["attribution"].append({"seed": sd, "verdict": att.attribution,
                                           "mean_abs_delta_h": att.mean_abs_delta_h,
                                           "delta_W": att.delta_W, "delta_alpha0": att.delta_alpha0})
            if row["shuffled"]:
                row["shuffled_mean"] = {k: float(np.mean([s[k] for s in row["shuffled"]]))
                                        for k in ("alpha0", "W", "r")}
            table.append(row)

    run_one("total", "total", None, r, grid, config.regions, region_names,
            [f"Total ({nm})" for nm in region_names])

    lo_e, hi_e = config.extrema_scales
    for R in config.windows:
        for kind in ("maxima", "minima"):
            name = f"{kind}_R{R}"
            with _stage(f"extrema:{name}"):
                seq = extrema_sequence(r, R, kind).to_series(name)
                m = len(seq)
                hi_eff = min(hi_e, m // 5)
                sc = log_scales(lo_e, hi_eff, config.n_scales) if hi_eff > lo_e else np.array([lo_e])
                if sc.size < 4:
                    raise InsufficientDataError(
                        f"{name}: {m} points leave fewer than 4 scales in [{lo_e}, {hi_eff}]")
                g = GridSpec(q, sc, config.order)
                g.validate(m)
                acf[name] = _acf_json(seq, config.acf_max_lag, config.acf_fit_range)
            run_one(name, kind, int(R), seq, g, [(lo_e, hi_eff)], ["Sequence"],
                    [f"Seq. {kind} (R={R})"])

    report = {
        "provenance": {
            "library": "mfseries", "version": __version__,
            "input_sha256": digest, "rates_sha256": rates_digest,
            "config": config.echo(),
        },
        "units": {
            "returns": "log returns normalized to zero mean, unit population variance",
            "scales": "trading days (rows)", "windows": "trading days (rows)",
        },
        "data": {"n_prices": len(ts), "n_returns": len(returns), "currency_join": join,
                 "first_date": None if ts.dates is None else str(ts.dates[0]),
                 "last_date": None if ts.dates is None else str(ts.dates[-1])},
        "tail": tail,
        "acf": acf,
        "complexity_table": table,
        "series": series_out,
    }
    return _clean(report)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def report_files(report: dict, fmt: str = "json") -> dict:
    """Map of file name -> text for a report.

    ``report.json`` is always produced. ``csv`` adds the complexity table and
    flat per-plot files: ``surface_*.csv`` (s, q, F), ``hurst_*.csv``
    (q, h, stderr), ``tau_*.csv`` (q, tau) and ``spectrum_*.csv`` (alpha, f).
    """
    files = {"report.json": json.dumps(report, indent=2, allow_nan=False) + "\n"}
    if fmt != "csv":
        return files
    rows = []
    for row in report["complexity_table"]:
        o = row["original"]
        sm = row.get("shuffled_mean", {})
        rows.append([row["row"], row["fit_range"][0], row["fit_range"][1], o["alpha0"], o["W"], o["r"],
                     o["status"], sm.get("alpha0"), sm.get("W"), sm.get("r")])
    files["complexity.csv"] = _csv_text(
        ["row", "s_lo", "s_hi", "alpha0", "W", "r", "status", "alpha0_shuffled", "W_shuffled", "r_shuffled"],
        rows)
    for entry in report["series"]:
        variants = [("", entry["original"])] + [(f"_shuffle{s['seed']}", s) for s in entry["shuffles"]]
        for suffix, an in variants:
            tag = f"{entry['name']}{suffix}"
            sf = an["surface"]
            files[f"surface_{tag}.csv"] = _csv_text(
                ["s", "q", "F"],
                [[s, q, sf["F"][i][j]] for j, s in enumerate(sf["s"]) for i, q in enumerate(sf["q"])])
            for reg in an["regions"]:
                rtag = f"{tag}_{reg['region'].replace(' ', '')}"
                hu = reg["hurst"]
                files[f"hurst_{rtag}.csv"] = _csv_text(["q", "h", "stderr"], zip(hu["q"], hu["h"], hu["stderr"]))
                files[f"tau_{rtag}.csv"] = _csv_text(["q", "tau"], zip(hu["q"], reg["tau"]))
                sp = reg["spectrum"]
                files[f"spectrum_{rtag}.csv"] = _csv_text(
                    ["alpha", "f", "q", "valid"], zip(sp["alpha"], sp["f"], sp["q"], sp["valid"]))
    return files


def write_report(report: dict, out_dir, fmt: str = "json") -> list:
    """Write the report files into ``out_dir`` (created if needed); returns the paths."""
    files = report_files(report, fmt)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in files.items():
        p = out / name
        p.write_text(text, encoding="utf-8")
        paths.append(p)
    return paths
