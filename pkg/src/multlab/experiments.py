"""Named experiments wiring prime sets, counts, predictors, and simulations.

Each run_* function takes a flat config dict (missing keys filled from the
experiment's defaults), executes the grid, and writes a CSV table plus a JSON
manifest into the output directory.  CSV bodies are pure functions of the
config; wall-clock data lives only in the manifest, so identical configs give
byte-identical CSVs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, merged_config, require_grid
from .counting import count_aq, count_hq, count_rough, count_sq
from .orderstats import (
    BarrierSpec,
    barrier_events_mc,
    qk_exact,
    qk_mc,
    vol_yk_mc,
)
from .poisson import classify_regime, e_factor, g_exponent, main_term
from .primes import PrimeSet, density_audit, make_prime_set

AUDIT_GRID_POINTS = 12


def resolve_prime_set(desc: str, limit: int, seed: int = 0) -> PrimeSet:
    """Build a PrimeSet from a compact descriptor string.

    Forms: "all", "congruence:M:r1+r2+...", "thinned:DENSITY" (hash keyed by
    the run seed) or "thinned:DENSITY:SEED" to pin the hash key explicitly.
    """
    parts = desc.strip().split(":")
    kind = parts[0]
    try:
        if kind == "all" and len(parts) == 1:
            return make_prime_set("all", limit)
        if kind == "congruence" and len(parts) == 3:
            residues = tuple(int(r) for r in parts[2].split("+"))
            return make_prime_set("congruence", limit,
                                  modulus=int(parts[1]), residues=residues)
        if kind == "thinned" and len(parts) in (2, 3):
            key = int(parts[2]) if len(parts) == 3 else int(seed)
            return make_prime_set("thinned", limit,
                                  target_density=float(parts[1]), seed=key)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad prime-set descriptor {desc!r}: {exc}") from exc
    raise ConfigError(f"unknown prime-set descriptor {desc!r} "
                      "(expected all | congruence:M:r1+r2 | thinned:D[:SEED])")


def audit_summary(ps: PrimeSet) -> dict:
    """Descriptor plus the density audit every report must carry."""
    grid = np.geomspace(16.0, ps.limit, AUDIT_GRID_POINTS)
    audit = density_audit(ps, grid)
    out = ps.descriptor()
    out["kappa_hat"] = audit.kappa_hat
    out["kappa_worst_x"] = audit.worst_x
    out["mertens_constant_hat"] = audit.mertens_constant_hat
    return out


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class ExperimentResult:
    name: str
    out_dir: Path
    csv_paths: list[Path] = field(default_factory=list)
    manifest_path: Path | None = None
    tables: dict[str, list[dict]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)


class _Reporter:
    """Accumulates tables and writes the CSV/JSON artifacts plus manifest."""

    def __init__(self, name: str, out_dir, cfg: dict, fmt: str = "csv"):
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}")
        self.name = name
        self.cfg = cfg
        self.fmt = fmt
        self.t0 = time.perf_counter()
        self.result = ExperimentResult(name, Path(out_dir))
        self.prime_audits: list[dict] = []
        self.files: dict[str, str] = {}

    def add_table(self, stem: str, header: list[str], rows: list[dict]) -> None:
        self.result.tables[stem] = rows
        out_dir = self.result.out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        if self.fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_cell(row.get(col)) for col in header])
            body = buf.getvalue()
            path = out_dir / f"{stem}.csv"
        else:
            body = json.dumps(rows, indent=2, sort_keys=True) + "\n"
            path = out_dir / f"{stem}.json"
        path.write_text(body, encoding="utf-8")
        self.files[path.name] = hashlib.sha256(body.encode("utf-8")).hexdigest()
        self.result.csv_paths.append(path)

    def finish(self, seed, threads: int) -> ExperimentResult:
        manifest = {
            "experiment": self.name,
            "artifact_version": __version__,
            "config": self.cfg,
            "seed": seed,
            "threads": threads,
            "prime_sets": self.prime_audits,
            "summary": self.result.summary,
            "files": self.files,
            "timestamp_utc": datetime.now(timezone.utc).isoformat(),
            "elapsed_seconds": round(time.perf_counter() - self.t0, 3),
        }
        path = self.result.out_dir / f"{self.name}_manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        self.result.manifest_path = path
        return self.result


HQ_SCAN_DEFAULTS = {
    "prime_sets": ["all", "congruence:4:1"],
    "limit": 10_000_000,
    "x_grid": [10_000_000],
    "y_grid": [100.0, 316.22776601683796, 1000.0],
    "z_factor": 2.0,
    "method": "divisor-multiples",
    "seed": 20260825,
}


def run_hq_scan(cfg: dict | None = None, out_dir=".", *, seed=None,
                threads: int = 1, fmt: str = "csv") -> ExperimentResult:
    """Brute-force H_Q(x, y, z_factor*y) against the predictor over a grid."""
    cfg = merged_config(HQ_SCAN_DEFAULTS, cfg or {}, "hq-scan")
    if seed is not None:
        cfg["seed"] = int(seed)
    x_grid = require_grid(cfg, "x_grid", "hq-scan")
    y_grid = require_grid(cfg, "y_grid", "hq-scan")
    q_descs = require_grid(cfg, "prime_sets", "hq-scan")
    limit = int(cfg["limit"])
    if limit < max(x_grid):
        raise ConfigError(f"hq-scan: limit {limit} below max x {max(x_grid)}")
    zf = float(cfg["z_factor"])
    if zf <= 1.0:
        raise ConfigError(f"hq-scan: z_factor must exceed 1, got {zf}")

    rep = _Reporter("hq_scan", out_dir, cfg, fmt)
    rows = []
    for desc in q_descs:
        ps = resolve_prime_set(str(desc), limit, cfg["seed"])
        rep.prime_audits.append(audit_summary(ps))
        for x in x_grid:
            for y in y_grid:
                z = zf * float(y)
                res = count_hq(ps, float(x), float(y), z, method=cfg["method"])
                pred = main_term(float(x), float(y), ps.delta)
                rows.append({
                    "q": desc, "x": float(x), "y": float(y), "z": z,
                    "delta": ps.delta, "count": res.value, "predictor": pred,
                    "ratio": res.value / pred,
                })
    rep.add_table("hq_scan",
                  ["q", "x", "y", "z", "delta", "count", "predictor", "ratio"],
                  rows)
    return rep.finish(cfg["seed"], threads)


AQ_DICHOTOMY_DEFAULTS = {
    "prime_sets": ["all", "thinned:0.4"],
    "n_grid": [1000, 10_000, 100_000],
    "slope_threshold": -0.02,
    "seed": 20260825,
}

AQ_N_CAP = 100_000


def run_aq_dichotomy(cfg: dict | None = None, out_dir=".", *, seed=None,
                     threads: int = 1, fmt: str = "csv") -> ExperimentResult:
    """A_Q(N) / |S_Q(N)|^2 over an N grid, with a log-log slope per prime set.

    The slope fit flags each Q as "flat" (product set has full relative size,
    the low-density side of the dichotomy) or "decaying".
    """
    cfg = merged_config(AQ_DICHOTOMY_DEFAULTS, cfg or {}, "aq-dichotomy")
    if seed is not None:
        cfg["seed"] = int(seed)
    n_grid = sorted(int(n) for n in require_grid(cfg, "n_grid", "aq-dichotomy"))
    if n_grid[0] < 1:
        raise ConfigError(f"aq-dichotomy: N must be >= 1, got {n_grid[0]}")
    if n_grid[-1] > AQ_N_CAP:
        raise ConfigError(f"aq-dichotomy: N capped at {AQ_N_CAP}, got {n_grid[-1]}")
    q_descs = require_grid(cfg, "prime_sets", "aq-dichotomy")
    limit = max(n_grid[-1], 16)

    rep = _Reporter("aq_dichotomy", out_dir, cfg, fmt)
    rows = []
    slopes = {}
    for desc in q_descs:
        ps = resolve_prime_set(str(desc), limit, cfg["seed"])
        rep.prime_audits.append(audit_summary(ps))
        ratios = []
        for n in n_grid:
            sq = count_sq(ps, n)
            aq = count_aq(ps, n).value
            ratio = aq / sq**2
            ratios.append(ratio)
            rows.append({
                "q": desc, "delta": ps.delta, "n": n, "sq_count": sq,
                "aq_count": aq, "ratio": ratio,
            })
        if len(n_grid) >= 2:
            slope = float(np.polyfit(np.log(n_grid), np.log(ratios), 1)[0])
        else:
            slope = 0.0
        trend = "decaying" if slope <= float(cfg["slope_threshold"]) else "flat"
        slopes[str(desc)] = {"slope": slope, "trend": trend, "delta": ps.delta}
    rep.result.summary["slopes"] = slopes
    rep.add_table("aq_dichotomy",
                  ["q", "delta", "n", "sq_count", "aq_count", "ratio"],
                  rows)
    return rep.finish(cfg["seed"], threads)


POISSON_PHASE_DEFAULTS = {
    "lambda_grid": [50.0, 100.0, 110.0, 121.0],
    "v_grid": [50, 100],
    "epsilon": 0.1,
    "include_regimes": True,
    "include_gcurve": True,
    "delta_min": 0.3,
    "delta_max": 1.0,
    "delta_step": 0.01,
    "loglog_y": 30.0,
    "seed": 20260825,
}


def run_poisson_phase(cfg: dict | None = None, out_dir=".", *, seed=None,
                      threads: int = 1, fmt: str = "csv") -> ExperimentResult:
    """Regime-classification sweep plus the exponent curve behind the phase plot."""
    cfg = merged_config(POISSON_PHASE_DEFAULTS, cfg or {}, "poisson-phase")
    if seed is not None:
        cfg["seed"] = int(seed)
    if not (cfg["include_regimes"] or cfg["include_gcurve"]):
        raise ConfigError("poisson-phase: both sections disabled, nothing to do")

    rep = _Reporter("poisson_phase", out_dir, cfg, fmt)
    if cfg["include_regimes"]:
        lam_grid = require_grid(cfg, "lambda_grid", "poisson-phase")
        v_grid = require_grid(cfg, "v_grid", "poisson-phase")
        eps = float(cfg["epsilon"])
        rows = []
        for v in v_grid:
            for lam in lam_grid:
                r = classify_regime(float(lam), int(v), eps)
                rows.append({
                    "lambda": float(lam), "v": int(v), "theta": r.theta,
                    "regime": r.regime, "exact_sum_log": r.log_exact_sum,
                    "envelope_log": r.log_envelope, "ratio": r.ratio,
                })
        rep.add_table("poisson_phase",
                      ["lambda", "v", "theta", "regime", "exact_sum_log",
                       "envelope_log", "ratio"],
                      rows)

    if cfg["include_gcurve"]:
        d0, d1 = float(cfg["delta_min"]), float(cfg["delta_max"])
        step = float(cfg["delta_step"])
        if not (0.0 < d0 <= d1 <= 1.0 and step > 0):
            raise ConfigError("poisson-phase: need 0 < delta_min <= delta_max <= 1 "
                              "and delta_step > 0")
        lly = float(cfg["loglog_y"])
        count = int(math.floor((d1 - d0) / step + 1e-9)) + 1
        rows = []
        for i in range(count):
            d = min(d0 + i * step, 1.0)
            rows.append({
                "delta": d, "g_exponent": g_exponent(d),
                "e_factor": e_factor(lly, d), "loglog_y": lly,
            })
        rep.add_table("poisson_phase_gcurve",
                      ["delta", "g_exponent", "e_factor", "loglog_y"],
                      rows)
    return rep.finish(cfg["seed"], threads)


SMIRNOV_DEFAULTS = {
    "daniels_k": [1, 2, 3, 4, 5, 6, 7, 8],
    "daniels_v_offset": [0, 1, 2, 3, 4],
    "daniels_u": [0.5, 1.0],
    "daniels_samples": 100_000,
    "barrier_k": 20,
    "barrier_v": 20.0,
    "barrier_c": [5.0, 10.0, 20.0, 40.0],
    "barrier_mu": 1.0 / 6.0 - 1.0 / 42.0,
    "barrier_m_offset": 0,
    "barrier_samples": 200_000,
    "yk_k": [2, 3, 4, 5],
    "yk_v_factor": [1.0, 2.0],
    "yk_c": 40.0,
    "yk_m": 5,
    "yk_samples": 100_000,
    "seed": 20260825,
}

_SMIRNOV_HEADER = ["op", "k", "v", "u", "C", "M", "mu", "n",
                   "estimate", "std_error", "seed"]


def run_smirnov(cfg: dict | None = None, out_dir=".", *, seed=None,
                threads: int = 1, fmt: str = "csv") -> ExperimentResult:
    """Order-statistics study: Daniels exact vs MC, barrier conditioning, Y_k."""
    cfg = merged_config(SMIRNOV_DEFAULTS, cfg or {}, "smirnov")
    if seed is not None:
        cfg["seed"] = int(seed)
    base_seed = int(cfg["seed"])
    rows = []

    point = 0
    for k in require_grid(cfg, "daniels_k", "smirnov"):
        k = int(k)
        for off in require_grid(cfg, "daniels_v_offset", "smirnov"):
            v = k + int(off)
            for u in require_grid(cfg, "daniels_u", "smirnov"):
                u = float(u)
                exact = float(qk_exact(u, v, k))
                rows.append({"op": "qk_exact", "k": k, "v": v, "u": u,
                             "estimate": exact, "std_error": 0.0})
                est = qk_mc(u, v, k, int(cfg["daniels_samples"]),
                            base_seed + point, threads=threads)
                rows.append({"op": "qk_mc", "k": k, "v": v, "u": u,
                             "n": est.n_samples, "estimate": est.estimate,
                             "std_error": est.std_error, "seed": est.seed})
                point += 1

    bk, bv = int(cfg["barrier_k"]), float(cfg["barrier_v"])
    bmu = float(cfg["barrier_mu"])
    bm = int(cfg["barrier_m_offset"])
    bn = int(cfg["barrier_samples"])
    for c in require_grid(cfg, "barrier_c", "smirnov"):
        spec = BarrierSpec(bk, bv, float(c), bm, bmu)
        p_b, p_s, p_cond = barrier_events_mc(spec, bn, base_seed, threads=threads)
        for op, est in (("p_weak", p_b), ("p_strong", p_s), ("p_cond", p_cond)):
            rows.append({"op": op, "k": bk, "v": bv, "C": float(c), "mu": bmu,
                         "n": est.n_samples, "estimate": est.estimate,
                         "std_error": est.std_error, "seed": est.seed})

    yc, ym = float(cfg["yk_c"]), int(cfg["yk_m"])
    yn = int(cfg["yk_samples"])
    for k in require_grid(cfg, "yk_k", "smirnov"):
        k = int(k)
        for f in require_grid(cfg, "yk_v_factor", "smirnov"):
            vt = float(f) * k
            if vt < k:
                raise ConfigError(f"smirnov: yk_v_factor {f} gives v_tilde < k")
            est = vol_yk_mc(k, vt, yc, ym, yn, base_seed, threads=threads)
            bound = 0.5 * (vt - k + 1) / (vt * math.factorial(k))
            rows.append({"op": "yk_vol", "k": k, "v": vt, "C": yc, "M": ym,
                         "mu": 1.0 / 7.0, "n": est.n_samples,
                         "estimate": est.estimate, "std_error": est.std_error,
                         "seed": est.seed})
            rows.append({"op": "yk_bound", "k": k, "v": vt, "C": yc, "M": ym,
                         "mu": 1.0 / 7.0, "estimate": bound, "std_error": 0.0})

    rep = _Reporter("smirnov", out_dir, cfg, fmt)
    rep.add_table("smirnov", _SMIRNOV_HEADER, rows)
    return rep.finish(base_seed, threads)


EXPERIMENTS = {
    "hq-scan": run_hq_scan,
    "aq-dichotomy": run_aq_dichotomy,
    "poisson-phase": run_poisson_phase,
    "smirnov": run_smirnov,
}


def run_experiment(name: str, cfg: dict | None, out_dir, *, seed=None,
                   threads: int = 1, fmt: str = "csv") -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r} "
                          f"(have: {', '.join(sorted(EXPERIMENTS))})")
    return EXPERIMENTS[name](cfg, out_dir, seed=seed, threads=threads, fmt=fmt)
