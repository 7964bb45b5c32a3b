"""Scenario configuration: JSON files, shipped presets, sweep resolution.

A config file is a single JSON object with four blocks::

    {
      "name":  "fig2",
      "notes": "free-form documentation of every assumed value",
      "params": { ... SystemParams fields, minus p_bs ... },
      "budget": { "p_tot_dbm": 10, "ris_fraction": 0.2, "p_ps": 0, "p_dc": 0 },
      "metric": "sop" | "throughput",
      "sweep": {
        "variable":  "p_tot_dbm",
        "values":    [0, 8, 16, 24, 32],
        "scenarios": [["external_n", "ipsic", "aris"], ...],
        "engines":   ["analytic", "montecarlo", "asymptotic"],
        "trials":    200000,
        "seed":      20260813
      }
    }

dB-valued fields carry a ``_db`` suffix and dBm-valued power fields a
``_dbm`` suffix; they are converted to linear watts/ratios here, exactly
once, and the rest of the package never sees decibels.  Plain (unsuffixed)
field names are accepted too and are taken as already-linear.

Naming note: ``params.alpha_p`` is the path-loss exponent.  The *sweep
variable* ``alpha_p`` is the power-offset factor instead: it sets the NOMA
split a_f = value, a_n = 1 - value.  The two usages never mix - the sweep
never touches the exponent.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from importlib import resources

from .budget import PowerBudget, solve_bs_power
from .model import SIC_MODES, SystemParams

__all__ = [
    "ConfigError",
    "ENGINES",
    "MODES",
    "ROW_SCENARIOS",
    "SWEEP_VARIABLES",
    "ScenarioConfig",
    "SweepSpec",
    "db_to_linear",
    "dbm_to_watts",
    "list_presets",
    "load_config",
    "load_preset",
    "parse_config",
    "realize_point",
]

SWEEP_VARIABLES = ("p_tot_dbm", "kappa", "n_elements", "alpha_p", "sigma2_t_dbm", "rate")
ENGINES = ("analytic", "asymptotic", "montecarlo")
MODES = ("aris", "pris")
# scenarios a sweep row may name; system_external composes both external users
ROW_SCENARIOS = ("external_n", "external_f", "internal", "system_external")

_DBM_FIELDS = ("sigma2", "sigma2_e", "sigma2_t")
_DB_FIELDS = ("beta0", "omega_ipu", "omega_ipe")
_PLAIN_PARAM_FIELDS = (
    "d_br", "d_rn", "d_rf", "d_re", "alpha_p",
    "n_elements", "n_groups", "n_active", "kappa",
    "a_f", "a_n", "r_f", "r_n", "varpi",
)
_BUDGET_DBM_FIELDS = ("p_tot", "p_ris", "p_ps", "p_dc")


class ConfigError(ValueError):
    """Malformed configuration; carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


def db_to_linear(value_db: float) -> float:
    """dB ratio to linear ratio."""
    return 10.0 ** (value_db / 10.0)


def dbm_to_watts(value_dbm: float) -> float:
    """dBm power to watts."""
    return 10.0 ** (value_dbm / 10.0) / 1000.0


@dataclass(frozen=True)
class SweepSpec:
    """One-variable parameter sweep over a list of scenario/engine rows.

    variable:  one of SWEEP_VARIABLES ('rate' sets both target rates,
               'alpha_p' sets the power split a_f = value)
    values:    strictly monotone, nonempty
    scenarios: (scenario, sic, mode) triples; mode 'pris' pins kappa = 1
               and sigma2_t = 0 for that row
    engines:   subset of ENGINES
    hold:      for n_elements sweeps, which side of M = P*Q stays fixed
               ('n_active' or 'n_groups')
    """

    variable: str
    values: tuple[float, ...]
    scenarios: tuple[tuple[str, str, str], ...]
    engines: tuple[str, ...]
    trials: int
    seed: int
    hold: str = "n_active"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError("sweep.variable", f"must be one of {SWEEP_VARIABLES}")
        if len(self.values) == 0:
            raise ConfigError("sweep.values", "must be nonempty")
        diffs = [b - a for a, b in zip(self.values, self.values[1:])]
        if any(d <= 0 for d in diffs) and any(d >= 0 for d in diffs):
            raise ConfigError("sweep.values", "must be strictly monotone")
        if not self.scenarios:
            raise ConfigError("sweep.scenarios", "must be nonempty")
        for row in self.scenarios:
            scenario, sic, mode = row
            if scenario not in ROW_SCENARIOS:
                raise ConfigError("sweep.scenarios", f"unknown scenario {scenario!r}")
            if sic not in SIC_MODES:
                raise ConfigError("sweep.scenarios", f"unknown sic {sic!r}")
            if mode not in MODES:
                raise ConfigError("sweep.scenarios", f"unknown mode {mode!r}")
        if not self.engines:
            raise ConfigError("sweep.engines", "must be nonempty")
        for engine in self.engines:
            if engine not in ENGINES:
                raise ConfigError("sweep.engines", f"unknown engine {engine!r}")
        if self.trials < 1:
            raise ConfigError("sweep.trials", "must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("sweep.seed", "must be a 64-bit value")
        if self.hold not in ("n_active", "n_groups"):
            raise ConfigError("sweep.hold", "must be 'n_active' or 'n_groups'")


@dataclass(frozen=True)
class ScenarioConfig:
    """A resolved configuration: base operating point plus its sweep."""

    name: str
    notes: str
    params: SystemParams  # p_bs is a placeholder; realize_point sets it
    budget: PowerBudget
    ris_fraction: float | None
    metric: str
    sweep: SweepSpec


def _pick(block: dict, field: str, *, dbm: bool = False, db: bool = False):
    """Fetch a field that may appear in linear or suffixed decibel form."""
    suffix = "_dbm" if dbm else "_db" if db else None
    names = [field] + ([field + suffix] if suffix else [])
    present = [n for n in names if n in block]
    if len(present) > 1:
        raise ConfigError(field, f"give only one of {names}")
    if not present:
        return None
    raw = block[present[0]]
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise ConfigError(present[0], "must be a number")
    if present[0].endswith("_dbm"):
        return dbm_to_watts(float(raw))
    if present[0].endswith("_db"):
        return db_to_linear(float(raw))
    return float(raw)


def _known_keys() -> tuple[set[str], set[str]]:
    params = set(_PLAIN_PARAM_FIELDS)
    for f in _DBM_FIELDS:
        params.update((f, f + "_dbm"))
    for f in _DB_FIELDS:
        params.update((f, f + "_db"))
    budget = {"mode", "ris_fraction"}
    for f in _BUDGET_DBM_FIELDS:
        budget.update((f, f + "_dbm"))
    return params, budget


def parse_config(doc: dict, *, name: str = "<inline>") -> ScenarioConfig:
    """Validate and resolve a parsed JSON document into a ScenarioConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "document must be a JSON object")
    known_params, known_budget = _known_keys()

    pblock = doc.get("params")
    if not isinstance(pblock, dict):
        raise ConfigError("params", "must be an object")
    for key in pblock:
        if key not in known_params:
            raise ConfigError(f"params.{key}", "unknown field")

    values = {}
    for f in _PLAIN_PARAM_FIELDS:
        got = _pick(pblock, f)
        if got is not None:
            values[f] = got
    for f in _DBM_FIELDS:
        got = _pick(pblock, f, dbm=True)
        if got is not None:
            values[f] = got
    for f in _DB_FIELDS:
        got = _pick(pblock, f, db=True)
        if got is not None:
            values[f] = got

    for f in ("n_elements", "n_active", "n_groups"):
        if f in values:
            if values[f] != int(values[f]):
                raise ConfigError(f"params.{f}", "must be an integer")
            values[f] = int(values[f])
    # accept any two of M = P*Q and derive the third
    m, p, q = (values.get(k) for k in ("n_elements", "n_groups", "n_active"))
    if m is None and p is not None and q is not None:
        values["n_elements"] = p * q
    elif p is None and m is not None and q is not None:
        if q == 0 or m % q:
            raise ConfigError("params.n_elements", f"{m} is not divisible by n_active={q}")
        values["n_groups"] = m // q
    elif q is None and m is not None and p is not None:
        if p == 0 or m % p:
            raise ConfigError("params.n_elements", f"{m} is not divisible by n_groups={p}")
        values["n_active"] = m // p

    if "a_f" in values and "a_n" not in values:
        values["a_n"] = 1.0 - values["a_f"]
    elif "a_n" in values and "a_f" not in values:
        values["a_f"] = 1.0 - values["a_n"]

    required = {f.name for f in dataclasses.fields(SystemParams)} - {"p_bs"}
    missing = sorted(required - set(values))
    if missing:
        raise ConfigError(f"params.{missing[0]}", "required field missing")

    bblock = doc.get("budget")
    if not isinstance(bblock, dict):
        raise ConfigError("budget", "must be an object")
    for key in bblock:
        if key not in known_budget:
            raise ConfigError(f"budget.{key}", "unknown field")
    p_tot = _pick(bblock, "p_tot", dbm=True)
    if p_tot is None:
        raise ConfigError("budget.p_tot", "required field missing")
    p_ris = _pick(bblock, "p_ris", dbm=True)
    ris_fraction = bblock.get("ris_fraction")
    if p_ris is not None and ris_fraction is not None:
        raise ConfigError("budget.ris_fraction", "give either p_ris or ris_fraction")
    if p_ris is None and ris_fraction is None:
        ris_fraction = 0.2  # default split of the total budget to the amplifiers
    if ris_fraction is not None:
        if not isinstance(ris_fraction, (int, float)) or not 0.0 <= ris_fraction < 1.0:
            raise ConfigError("budget.ris_fraction", "must lie in [0, 1)")
        ris_fraction = float(ris_fraction)
        p_ris = ris_fraction * p_tot
    p_ps = _pick(bblock, "p_ps", dbm=True) or 0.0
    p_dc = _pick(bblock, "p_dc", dbm=True) or 0.0
    mode = bblock.get("mode", "aris")
    if mode not in MODES:
        raise ConfigError("budget.mode", f"must be one of {MODES}")
    budget = PowerBudget(p_tot=p_tot, p_ris=p_ris, p_ps=p_ps, p_dc=p_dc, mode=mode)

    metric = doc.get("metric", "sop")
    if metric not in ("sop", "throughput"):
        raise ConfigError("metric", "must be 'sop' or 'throughput'")

    sblock = doc.get("sweep")
    if not isinstance(sblock, dict):
        raise ConfigError("sweep", "must be an object")
    unknown = set(sblock) - {"variable", "values", "range", "scenarios", "engines", "trials", "seed", "hold"}
    if unknown:
        raise ConfigError(f"sweep.{sorted(unknown)[0]}", "unknown field")
    if "values" in sblock and "range" in sblock:
        raise ConfigError("sweep.values", "give either values or range")
    if "values" in sblock:
        raw_values = sblock["values"]
        if not isinstance(raw_values, list):
            raise ConfigError("sweep.values", "must be a list")
        sweep_values = tuple(float(v) for v in raw_values)
    elif "range" in sblock:
        r = sblock["range"]
        if not isinstance(r, dict) or not all(k in r for k in ("start", "stop", "step")):
            raise ConfigError("sweep.range", "needs start/stop/step")
        start, stop, step = float(r["start"]), float(r["stop"]), float(r["step"])
        if step == 0.0:
            raise ConfigError("sweep.range", "step must be nonzero")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ConfigError("sweep.range", "empty range")
        sweep_values = tuple(start + i * step for i in range(n))
    else:
        raise ConfigError("sweep.values", "required field missing")

    scenarios = sblock.get("scenarios")
    if not isinstance(scenarios, list):
        raise ConfigError("sweep.scenarios", "must be a list of [scenario, sic, mode]")
    parsed_rows = []
    for row in scenarios:
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise ConfigError("sweep.scenarios", "each row must be [scenario, sic, mode]")
        parsed_rows.append((str(row[0]), str(row[1]), str(row[2])))
    engines = sblock.get("engines", ["analytic"])
    if not isinstance(engines, list):
        raise ConfigError("sweep.engines", "must be a list")
    trials = sblock.get("trials", 100000)
    seed = sblock.get("seed", 0)
    if not isinstance(trials, int) or isinstance(trials, bool):
        raise ConfigError("sweep.trials", "must be an integer")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("sweep.seed", "must be an integer")
    sweep = SweepSpec(
        variable=str(sblock.get("variable", "")),
        values=sweep_values,
        scenarios=tuple(parsed_rows),
        engines=tuple(str(e) for e in engines),
        trials=trials,
        seed=seed,
        hold=str(sblock.get("hold", "n_active")),
    )

    if sweep.variable == "n_elements":
        held = values[sweep.hold]
        for v in sweep.values:
            if v != int(v) or int(v) % held:
                raise ConfigError(
                    "sweep.values", f"{v} does not keep n_elements divisible by {sweep.hold}={held}"
                )
    if sweep.variable == "alpha_p":
        for v in sweep.values:
            if not 0.5 < v < 1.0:
                raise ConfigError(
                    "sweep.values",
                    "power offset must lie in (0.5, 1) so the far user keeps the larger share",
                )

    try:
        params = SystemParams(p_bs=1.0, **values)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from exc

    return ScenarioConfig(
        name=str(doc.get("name", name)),
        notes=str(doc.get("notes", "")),
        params=params,
        budget=budget,
        ris_fraction=ris_fraction,
        metric=metric,
        sweep=sweep,
    )


def load_config(path) -> ScenarioConfig:
    """Parse a JSON config file; raises ConfigError with field diagnostics."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("<json>", f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    return parse_config(doc, name=str(path))


def list_presets() -> list[str]:
    """Names of the shipped figure-parameterization presets."""
    out = []
    for entry in resources.files(__package__).joinpath("presets").iterdir():
        if entry.name.endswith(".json"):
            out.append(entry.name[: -len(".json")])
    return sorted(out)


def load_preset(name: str) -> ScenarioConfig:
    """Load a shipped preset by name (see list_presets)."""
    ref = resources.files(__package__).joinpath("presets").joinpath(name + ".json")
    if not ref.is_file():
        raise ConfigError("preset", f"unknown preset {name!r}; available: {list_presets()}")
    doc = json.loads(ref.read_text(encoding="utf-8"))
    return parse_config(doc, name=name)


def _with_sweep_value(cfg: ScenarioConfig, value: float) -> tuple[SystemParams, PowerBudget]:
    """Apply one sweep value; returns (params without p_bs fixed, budget)."""
    params, budget = cfg.params, cfg.budget
    var = cfg.sweep.variable
    if var == "p_tot_dbm":
        p_tot = dbm_to_watts(value)
        p_ris = cfg.ris_fraction * p_tot if cfg.ris_fraction is not None else budget.p_ris
        budget = dataclasses.replace(budget, p_tot=p_tot, p_ris=p_ris)
    elif var == "kappa":
        params = dataclasses.replace(params, kappa=float(value))
    elif var == "n_elements":
        m = int(value)
        held = getattr(params, cfg.sweep.hold)
        other = {"n_active": "n_groups", "n_groups": "n_active"}[cfg.sweep.hold]
        params = dataclasses.replace(params, n_elements=m, **{other: m // held})
    elif var == "alpha_p":
        params = dataclasses.replace(params, a_f=float(value), a_n=1.0 - float(value))
    elif var == "sigma2_t_dbm":
        params = dataclasses.replace(params, sigma2_t=dbm_to_watts(value))
    elif var == "rate":
        params = dataclasses.replace(params, r_f=float(value), r_n=float(value))
    else:
        raise ConfigError("sweep.variable", f"unhandled variable {var!r}")
    return params, budget


def realize_point(cfg: ScenarioConfig, value: float | None, mode: str) -> SystemParams:
    """Concrete SystemParams for one sweep value and ARIS/PRIS mode.

    Solves the BS power from the budget (raising BudgetInfeasibleError when
    the hardware terms exceed the total) and pins the passive degenerate
    values kappa = 1, sigma2_t = 0 for PRIS rows.
    """
    if value is None:
        params, budget = cfg.params, cfg.budget
    else:
        params, budget = _with_sweep_value(cfg, value)
    if mode not in MODES:
        raise ConfigError("mode", f"must be one of {MODES}")
    budget = dataclasses.replace(budget, mode=mode, p_ris=budget.p_ris if mode == "aris" else 0.0)
    if mode == "pris":
        params = dataclasses.replace(params, kappa=1.0, sigma2_t=0.0)
    p_bs = solve_bs_power(budget, n_elements=params.n_elements, n_active=params.n_active)
    return dataclasses.replace(params, p_bs=p_bs)
