"""Command line front end: closed-form curves, simulation, sweeps, validation.

Subcommands
    analytic         closed-form metrics at the config's base operating point
    simulate         Monte Carlo metrics at the base operating point
    sweep            full curve table over the configured sweep
    validate         closed-form vs Monte Carlo agreement report (exit 3 on failure)
    quadrature-dump  Gauss-Laguerre nodes and weights as JSON

Curve tables use a fixed CSV schema

    sweep_var, value, scenario, sic, mode, engine, metric,
    estimate, stderr, trials, seed, flags

preceded by one '# meta' comment line holding the fully resolved
configuration as JSON.  Output carries no timestamps and the Monte Carlo
draws are keyed by (seed, trial index), so repeated runs - at any worker
count - produce byte-identical bytes.

Infeasible operating points (hardware draw exceeding the budget) become
rows flagged 'infeasible' with an empty estimate rather than aborting the
sweep.  Exit codes: 0 success, 1 configuration error, 2 every requested
point infeasible, 3 validation failures.

RIS_SECRECY_WORKERS sets the default Monte Carlo worker count; the
--workers flag overrides it.  Workers only change wall time, never output.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.integrate import simpson

from . import __version__
from .analytic import (
    UnsupportedScenarioError,
    cdf_user_f,
    cdf_user_n_ipsic,
    cdf_user_n_psic,
    pdf_eve_f,
    pdf_eve_n_ipsic,
    pdf_eve_n_psic,
    pdf_internal_f_to_n,
    scenario_rate,
    sop,
    sop_asymptotic,
    sop_system_external,
)
from .budget import BudgetInfeasibleError
from .config import ConfigError, ScenarioConfig, load_config, load_preset, list_presets, realize_point
from .montecarlo import empirical_sinr_cdfs, estimate_sop_grid, sinr_samples
from .specfun import gauss_laguerre

__all__ = ["main", "run_sweep", "validate_point"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_VALIDATION = 3

CSV_COLUMNS = (
    "sweep_var", "value", "scenario", "sic", "mode", "engine", "metric",
    "estimate", "stderr", "trials", "seed", "flags",
)

_ENGINE_ALIASES = {
    "a": "analytic",
    "analytic": "analytic",
    "m": "montecarlo",
    "mc": "montecarlo",
    "montecarlo": "montecarlo",
    "asy": "asymptotic",
    "asymptotic": "asymptotic",
}


class _CliArgumentError(Exception):
    """argparse rejected the command line; mapped to the config exit code."""


class _Parser(argparse.ArgumentParser):
    # default argparse exits with status 2, which this tool reserves for
    # infeasible sweeps; surface usage problems as configuration errors
    def error(self, message):
        raise _CliArgumentError(message)


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_engines(text: str) -> tuple[str, ...]:
    engines = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in _ENGINE_ALIASES:
            raise ConfigError("engines", f"unknown engine {token!r}")
        name = _ENGINE_ALIASES[token]
        if name not in engines:
            engines.append(name)
    if not engines:
        raise ConfigError("engines", "no engine selected")
    return tuple(engines)


def _load(args) -> ScenarioConfig:
    if getattr(args, "preset", None):
        cfg = load_preset(args.preset)
    else:
        cfg = load_config(args.config)
    overrides = {}
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "engines", None):
        overrides["engines"] = _parse_engines(args.engines)
    if overrides:
        cfg = dataclasses.replace(cfg, sweep=dataclasses.replace(cfg.sweep, **overrides))
    return cfg


def _meta_line(cfg: ScenarioConfig, point: str) -> str:
    meta = {
        "budget": dataclasses.asdict(cfg.budget),
        "metric": cfg.metric,
        "name": cfg.name,
        "params": dataclasses.asdict(cfg.params),
        "point": point,
        "ris_fraction": cfg.ris_fraction,
        "sweep": dataclasses.asdict(cfg.sweep),
        "version": __version__,
    }
    return "# meta " + json.dumps(meta, sort_keys=True)


def _rows_to_csv(cfg: ScenarioConfig, rows: list[dict], point: str) -> str:
    buf = io.StringIO()
    buf.write(_meta_line(cfg, point) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _write_text(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _write_json(path, cfg: ScenarioConfig, rows: list[dict], point: str):
    doc = {
        "meta": json.loads(_meta_line(cfg, point)[len("# meta ") :]),
        "rows": rows,
    }
    _write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _shape_key(params) -> tuple:
    return tuple(
        getattr(params, f)
        for f in ("d_br", "d_rn", "d_rf", "d_re", "alpha_p", "beta0",
                  "n_elements", "n_groups", "n_active", "omega_ipu", "omega_ipe")
    )


def _closed_form_estimate(params, scenario, sic, engine):
    if scenario == "system_external":
        if engine == "asymptotic":
            raise UnsupportedScenarioError("no closed-form asymptote for the system event")
        return sop_system_external(params, sic)
    if engine == "asymptotic":
        return sop_asymptotic(params, scenario, sic)
    return sop(params, scenario, sic)


def _grid_group(payload):
    cases, trials, seed = payload
    return estimate_sop_grid(cases, trials, seed)


def _metric_fields(cfg, params, scenario, sop_value, stderr):
    """Map an SOP estimate onto the configured metric column."""
    if cfg.metric == "sop":
        return sop_value, stderr
    rate = scenario_rate(params, scenario)
    thr = (1.0 - sop_value) * rate
    return thr, (None if stderr is None else rate * stderr)


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> list[dict]:
    """Evaluate the configured sweep; returns rows in deterministic order.

    Row order is value-major, then scenario order, then engine order, all
    exactly as configured.  Monte Carlo cells sharing draw-shaping fields
    are batched over one stream per shape, so estimates match individual
    estimate_sop calls bit for bit regardless of batching or workers.
    """
    sweep = cfg.sweep
    tasks = []
    for value in sweep.values:
        for scenario, sic, mode in sweep.scenarios:
            try:
                params = realize_point(cfg, value, mode)
                problem = None
            except BudgetInfeasibleError:
                params, problem = None, "infeasible"
            for engine in sweep.engines:
                tasks.append({
                    "value": float(value), "scenario": scenario, "sic": sic,
                    "mode": mode, "engine": engine, "params": params,
                    "problem": problem,
                })

    mc_groups: dict[tuple, list[int]] = {}
    for i, task in enumerate(tasks):
        if task["engine"] == "montecarlo" and task["problem"] is None:
            mc_groups.setdefault(_shape_key(task["params"]), []).append(i)
    payloads = [
        ([(tasks[i]["params"], tasks[i]["scenario"], tasks[i]["sic"]) for i in idxs],
         sweep.trials, sweep.seed)
        for idxs in mc_groups.values()
    ]
    if payloads:
        if workers > 1 and len(payloads) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                group_results = list(pool.map(_grid_group, payloads))
        else:
            group_results = [_grid_group(p) for p in payloads]
        for idxs, results in zip(mc_groups.values(), group_results):
            for i, res in zip(idxs, results):
                tasks[i]["mc"] = res

    rows = []
    for task in tasks:
        row = {
            "sweep_var": sweep.variable, "value": task["value"],
            "scenario": task["scenario"], "sic": task["sic"], "mode": task["mode"],
            "engine": task["engine"], "metric": cfg.metric,
            "estimate": None, "stderr": None, "trials": None, "seed": None,
            "flags": "",
        }
        if task["problem"] is not None:
            row["flags"] = task["problem"]
        elif task["engine"] == "montecarlo":
            res = task["mc"]
            est, err = _metric_fields(cfg, task["params"], task["scenario"],
                                      res.sop.value, res.stderr)
            row.update(estimate=est, stderr=err, trials=res.trials, seed=res.seed,
                       flags="|".join(res.sop.flags))
        else:
            try:
                est = _closed_form_estimate(task["params"], task["scenario"],
                                            task["sic"], task["engine"])
            except UnsupportedScenarioError:
                row["flags"] = "unsupported"
            else:
                value, _ = _metric_fields(cfg, task["params"], task["scenario"],
                                          est.value, None)
                row.update(estimate=value, flags="|".join(est.flags))
        rows.append(row)
    return rows


def _all_infeasible(rows: list[dict]) -> bool:
    return bool(rows) and all(r["flags"] == "infeasible" for r in rows)


def _print_table(rows: list[dict]):
    header = [c for c in CSV_COLUMNS if c not in ("sweep_var",)]
    widths = {c: max(len(c), 12) for c in header}
    line = "  ".join(c.ljust(widths[c]) for c in header)
    sys.stdout.write(line.rstrip() + "\n")
    for row in rows:
        cells = []
        for c in header:
            v = row[c]
            if isinstance(v, float):
                text = f"{v:.6e}"
            else:
                text = "" if v is None else str(v)
            cells.append(text.ljust(widths[c]))
        sys.stdout.write("  ".join(cells).rstrip() + "\n")


def _cmd_point(args, engines_default) -> int:
    cfg = _load(args)
    engines = cfg.sweep.engines if getattr(args, "engines", None) else engines_default
    # bypass the sweep variable entirely: realize the base point as-is
    sweep = dataclasses.replace(cfg.sweep, engines=engines)
    cfg = dataclasses.replace(cfg, sweep=sweep)

    rows = []
    mc_cases, mc_rows = [], []
    for scenario, sic, mode in sweep.scenarios:
        try:
            params = realize_point(cfg, None, mode)
            problem = None
        except BudgetInfeasibleError:
            params, problem = None, "infeasible"
        for engine in sweep.engines:
            row = {
                "sweep_var": "", "value": None, "scenario": scenario, "sic": sic,
                "mode": mode, "engine": engine, "metric": cfg.metric,
                "estimate": None, "stderr": None, "trials": None, "seed": None,
                "flags": "",
            }
            if problem is not None:
                row["flags"] = problem
            elif engine == "montecarlo":
                mc_cases.append((params, scenario, sic))
                mc_rows.append(row)
            else:
                try:
                    est = _closed_form_estimate(params, scenario, sic, engine)
                except UnsupportedScenarioError:
                    row["flags"] = "unsupported"
                else:
                    value, _ = _metric_fields(cfg, params, scenario, est.value, None)
                    row.update(estimate=value, flags="|".join(est.flags))
            rows.append(row)
    if mc_cases:
        shape_groups: dict[tuple, list[int]] = {}
        for j, (params, _, _) in enumerate(mc_cases):
            shape_groups.setdefault(_shape_key(params), []).append(j)
        for idxs in shape_groups.values():
            results = estimate_sop_grid([mc_cases[j] for j in idxs],
                                        sweep.trials, sweep.seed)
            for j, res in zip(idxs, results):
                params = mc_cases[j][0]
                est, err = _metric_fields(cfg, params, mc_cases[j][1],
                                          res.sop.value, res.stderr)
                mc_rows[j].update(estimate=est, stderr=err, trials=res.trials,
                                  seed=res.seed, flags="|".join(res.sop.flags))

    if args.out:
        _write_text(args.out, _rows_to_csv(cfg, rows, point="base"))
    if args.json:
        _write_json(args.json, cfg, rows, point="base")
    if not args.out and not args.json:
        _print_table(rows)
    return EXIT_INFEASIBLE if _all_infeasible(rows) else EXIT_OK


def _cmd_analytic(args) -> int:
    return _cmd_point(args, engines_default=("analytic",))


def _cmd_simulate(args) -> int:
    return _cmd_point(args, engines_default=("montecarlo",))


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("RIS_SECRECY_WORKERS", "1"))
    rows = run_sweep(cfg, workers=max(1, workers))
    text = _rows_to_csv(cfg, rows, point="sweep")
    if args.json:
        _write_json(args.json, cfg, rows, point="sweep")
    if args.out or not args.json:
        _write_text(args.out, text)
    return EXIT_INFEASIBLE if _all_infeasible(rows) else EXIT_OK


# closed forms keyed by (SINR family, sic); x-first call convention
_CDF_FORMS = {
    ("user_n", "ipsic"): cdf_user_n_ipsic,
    ("user_n", "psic"): cdf_user_n_psic,
    ("user_f", "psic"): cdf_user_f,
    ("user_f", "ipsic"): cdf_user_f,
}

_PDF_FORMS = {
    ("eve_n", "ipsic"): pdf_eve_n_ipsic,
    ("eve_n", "psic"): pdf_eve_n_psic,
    ("eve_f", "psic"): pdf_eve_f,
    ("internal_f_to_n", "psic"): pdf_internal_f_to_n,
}

_LEGIT_FAMILY = {"external_n": "user_n", "external_f": "user_f", "internal": "user_n"}
_EVE_FAMILY = {"external_n": "eve_n", "external_f": "eve_f", "internal": "internal_f_to_n"}
# mean gain of the receiver behind each wiretap family; zero disables the check
_EVE_DISTANCE = {"eve_n": "d_re", "eve_f": "d_re", "internal_f_to_n": "d_rf"}


def validate_point(cfg: ScenarioConfig, trials: int, seed: int) -> list[dict]:
    """Closed-form vs Monte Carlo agreement checks at the base operating point.

    Per scenario row: the SOP itself, the legitimate-side SINR CDF on a
    pilot-quantile grid, and the wiretap-side density mass over a pilot
    interval.  Tolerances combine the binomial error with the documented
    mean-field slack: 3 sigma + 2 percent for the passive perfect-SIC
    branch (no mean-field step survives there), max(3 sigma, 15 percent)
    otherwise; CDFs get 3 sigma + 0.005 absolute, densities 3 sigma + 2.5
    percent of the interval mass.  Wiretap checks whose receiver has zero
    mean gain are reported as skipped.
    """
    checks = []
    seen_cdf, seen_pdf = set(), set()
    for scenario, sic, mode in cfg.sweep.scenarios:
        if scenario == "system_external":
            checks.append({"check": "sop", "scenario": scenario, "sic": sic,
                           "mode": mode, "status": "skip",
                           "detail": "composed quantity; per-user rows cover it"})
            continue
        try:
            params = realize_point(cfg, None, mode)
        except BudgetInfeasibleError as exc:
            checks.append({"check": "sop", "scenario": scenario, "sic": sic,
                           "mode": mode, "status": "skip",
                           "detail": f"infeasible: {exc}"})
            continue

        a = sop(params, scenario, sic)
        mres = estimate_sop_grid([(params, scenario, sic)], trials, seed)[0]
        m = mres.sop.value
        if scenario_rate(params, scenario) == 0.0 and a.value == 0.0:
            tol, gap = 0.0, abs(a.value - m)
        elif mode == "pris" and sic == "psic":
            tol = 3.0 * mres.stderr + 0.02 * max(a.value, m)
            gap = abs(a.value - m)
        else:
            tol = max(3.0 * mres.stderr, 0.15 * max(a.value, m))
            gap = abs(a.value - m)
        checks.append({
            "check": "sop", "scenario": scenario, "sic": sic, "mode": mode,
            "status": "pass" if gap <= tol else "fail",
            "analytic": a.value, "montecarlo": m, "gap": gap, "tolerance": tol,
            "detail": f"analytic={a.value:.6g} mc={m:.6g} tol={tol:.3g}",
        })

        pilot = min(trials, 1 << 16)
        legit = _LEGIT_FAMILY[scenario]
        legit_sic = sic if legit == "user_n" else "psic"
        if (legit, legit_sic, mode) not in seen_cdf:
            seen_cdf.add((legit, legit_sic, mode))
            checks.append(_cdf_check(params, legit, legit_sic, mode, trials, seed, pilot))
        eve = _EVE_FAMILY[scenario]
        eve_sic = sic if eve == "eve_n" else "psic"
        if (eve, eve_sic, mode) not in seen_pdf:
            seen_pdf.add((eve, eve_sic, mode))
            checks.append(_pdf_check(params, eve, eve_sic, mode, trials, seed, pilot))
    return checks


def _cdf_check(params, family, sic, mode, trials, seed, pilot) -> dict:
    base = {"check": "cdf", "scenario": family, "sic": sic, "mode": mode}
    gamma = sinr_samples(params, family, pilot, seed, sic=sic)
    if not np.all(np.isfinite(gamma)) or float(np.max(gamma)) <= 0.0:
        return {**base, "status": "skip", "detail": "degenerate SINR (zero mean gain)"}
    thresholds = np.quantile(gamma, np.linspace(0.1, 0.9, 9))
    if np.min(thresholds) <= 0.0:
        return {**base, "status": "skip", "detail": "pilot quantiles hit zero"}
    emp = empirical_sinr_cdfs(params, [(family, sic, thresholds)], trials, seed)[0]
    closed = np.asarray(_CDF_FORMS[(family, sic)](thresholds, params), dtype=float)
    tol = 3.0 * np.sqrt(np.maximum(closed * (1.0 - closed), 1e-12) / trials) + 0.005
    gap = np.abs(emp - closed)
    worst = int(np.argmax(gap - tol))
    ok = bool(np.all(gap <= tol))
    return {
        **base,
        "status": "pass" if ok else "fail",
        "gap": float(gap[worst]), "tolerance": float(tol[worst]),
        "detail": f"max|F_mc-F|={float(np.max(gap)):.4g} "
                  f"at x={float(thresholds[worst]):.4g} tol={float(tol[worst]):.3g}",
    }


def _pdf_check(params, family, sic, mode, trials, seed, pilot) -> dict:
    base = {"check": "pdf", "scenario": family, "sic": sic, "mode": mode}
    dist = getattr(params, _EVE_DISTANCE[family])
    if not math.isfinite(dist):
        return {**base, "status": "skip", "detail": "zero mean gain at the wiretap"}
    gamma = sinr_samples(params, family, pilot, seed, sic=sic)
    lo, hi = (float(q) for q in np.quantile(gamma, [0.25, 0.75]))
    if not 0.0 < lo < hi:
        return {**base, "status": "skip", "detail": "degenerate pilot interval"}
    grid = np.linspace(lo, hi, 513)
    pdf = np.asarray(_PDF_FORMS[(family, sic)](grid, params), dtype=float)
    mass = float(simpson(pdf, x=grid))
    emp = empirical_sinr_cdfs(params, [(family, sic, np.array([lo, hi]))], trials, seed)[0]
    emp_mass = float(emp[1] - emp[0])
    tol = 3.0 * math.sqrt(max(emp_mass * (1.0 - emp_mass), 1e-12) / trials) + 0.025 * max(emp_mass, mass)
    gap = abs(mass - emp_mass)
    return {
        **base,
        "status": "pass" if gap <= tol else "fail",
        "gap": gap, "tolerance": tol,
        "detail": f"integral={mass:.6g} mc={emp_mass:.6g} on [{lo:.3g},{hi:.3g}] tol={tol:.3g}",
    }


def _cmd_validate(args) -> int:
    cfg = _load(args)
    checks = validate_point(cfg, cfg.sweep.trials, cfg.sweep.seed)
    failures = 0
    for c in checks:
        status = c["status"].upper()
        if c["status"] == "fail":
            failures += 1
        sys.stdout.write(
            f"{status:4s} {c['check']:3s} {c['scenario']:15s} {c['sic']:5s} "
            f"{c['mode']:4s} {c.get('detail', '')}\n"
        )
    sys.stdout.write(f"{len(checks)} checks, {failures} failures\n")
    if args.json:
        _write_text(args.json, json.dumps({"checks": checks}, sort_keys=True, indent=1) + "\n")
    return EXIT_VALIDATION if failures else EXIT_OK


def _cmd_quadrature_dump(args) -> int:
    table = gauss_laguerre(args.order)
    doc = {
        "order": args.order,
        "nodes": [float(x) for x in table.nodes],
        "weights": [float(w) for w in table.weights],
    }
    _write_text(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def _add_common(sub, *, trials=True, workers=False):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="path to a scenario JSON file")
    group.add_argument("--preset", help=f"shipped preset name, one of {list_presets()}")
    if trials:
        sub.add_argument("--trials", type=int, help="Monte Carlo trials (overrides config)")
        sub.add_argument("--seed", type=int, help="Monte Carlo seed (overrides config)")
    sub.add_argument("--engines", help="comma list: a|analytic, m|montecarlo, asy|asymptotic")
    sub.add_argument("--out", help="write CSV here instead of a table ('-' = stdout)")
    sub.add_argument("--json", help="also write a JSON mirror here")
    if workers:
        sub.add_argument("--workers", type=int,
                         help="Monte Carlo worker processes (default $RIS_SECRECY_WORKERS or 1)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ris-secrecy",
                     description="Secrecy outage toolkit for amplifying-surface NOMA downlinks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("analytic", help="closed forms at the base operating point")
    _add_common(sub, trials=False)
    sub.set_defaults(func=_cmd_analytic)

    sub = subs.add_parser("simulate", help="Monte Carlo at the base operating point")
    _add_common(sub)
    sub.set_defaults(func=_cmd_simulate)

    sub = subs.add_parser("sweep", help="curve table over the configured sweep")
    _add_common(sub, workers=True)
    sub.set_defaults(func=_cmd_sweep)

    sub = subs.add_parser("validate", help="closed-form vs Monte Carlo agreement report")
    _add_common(sub)
    sub.set_defaults(func=_cmd_validate)

    sub = subs.add_parser("quadrature-dump", help="Gauss-Laguerre nodes and weights")
    sub.add_argument("--order", type=int, default=64)
    sub.add_argument("--out", help="write JSON here (default stdout)")
    sub.set_defaults(func=_cmd_quadrature_dump)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliArgumentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
