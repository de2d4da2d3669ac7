"""Parameter schemas and report builders, one per experiment kind.

Each kind declares its parameters with a converter and a default; the
builders receive the fully resolved parameter dict and echo it verbatim in
the report so that a report is reproducible from its own header.
"""

from __future__ import annotations

from typing import Callable

from ..distributions import DistributionSpec, potter_check
from ..evt import epsilon, rate_function_table
from .assignment import estimate_expectation, estimate_min_expectation, lln_report, sample_optima
from .core import ExperimentConfig, Report, stats_dict
from .limits import cumulant_convergence_check, ftg_convergence_check, moment_convergence_check
from .tails import SIDES, ldp_tail_estimate, lemma2_bound_check


class ParameterError(ValueError):
    """A parameter value could not be parsed or is out of range."""


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _schedule(text) -> list[list[int]]:
    """``"50x100;200x400"`` to ``[[50, 100], [200, 400]]``."""
    if isinstance(text, (list, tuple)):
        return [[int(n), int(m)] for n, m in text]
    out = []
    for item in str(text).replace(",", ";").split(";"):
        item = item.strip()
        if not item:
            continue
        n, sep, m = item.lower().partition("x")
        if not sep:
            raise ValueError(f"schedule item {item!r} is not of the form NxM")
        out.append([int(n), int(m)])
    return out


def _dist(text) -> str:
    return str(DistributionSpec.parse(str(text)))


def _seed(text) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise ValueError("seed must be in [0, 2**64)")
    return value


def _side(text) -> str:
    if text not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    return str(text)


_SEEDED = {"seed": (_seed, None)}

# name -> {key: (converter, default)}; a None default means "required" except for seed
SCHEMAS: dict[str, dict[str, tuple[Callable, object]]] = {
    "expectation": {"dist": (_dist, "exponential:1"), "schedule": (_schedule, "200x300"),
                    "trials": (int, 200), "method": (str, "solver"), **_SEEDED},
    "min-expectation": {"dist": (_dist, "exponential:1"), "n": (_int_list, "8"),
                        "trials": (int, 2000), **_SEEDED},
    "lln": {"dist": (_dist, "exponential:1"), "schedule": (_schedule, "50x100;200x400;800x1600"),
            "trials": (int, 200), "band": (float, 0.1), **_SEEDED},
    "ldp": {"dist": (_dist, "exponential:1"), "n": (int, 40), "m": (int, 60),
            "r": (_float_list, "0.3"), "side": (_side, "upper_dev"), "trials": (int, 10000), **_SEEDED},
    "cumulant": {"dist": (_dist, "exponential:1"), "n": (int, 1000), "t": (_float_list, "-0.4,0.4"),
                 "trials": (int, 200000), **_SEEDED},
    "epsilon": {"dist": (_dist, "exponential:1"), "schedule": (_schedule, "40x60")},
    "potter": {"dist": (_dist, "exponential:1"), "A": (float, 2.0), "delta": (float, 0.5),
               "x0": (float, 0.1), "grid_size": (int, 50), "decades": (float, 10.0)},
    "rate-function": {"r_min": (float, -2.0), "r_max": (float, 2.0), "step": (float, 0.1)},
    "ftg": {"dist": (_dist, "exponential:1"), "n": (_int_list, "1000"), "trials": (int, 100000),
            **_SEEDED},
    "moments": {"dist": (_dist, "pareto:2"), "alpha": (float, 2.0), "k": (float, 1.0),
                "n": (_int_list, "100,1000,10000"), "trials": (int, 100000), **_SEEDED},
    "lemma2": {"dist": (_dist, "exponential:1"), "n": (int, 1000), "q": (int, 2), "s": (float, 6.0),
               "alpha": (_float_list, "8,16,32"), "trials": (int, 100000), **_SEEDED},
}

KINDS = tuple(SCHEMAS)


def resolve_params(kind: str, raw: dict) -> dict:
    """Apply defaults and converters; unknown keys are rejected."""
    schema = SCHEMAS[kind]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ParameterError(f"unknown parameter(s) for {kind}: {', '.join(unknown)}")
    out = {}
    for key, (convert, default) in schema.items():
        value = raw.get(key, default)
        if value is None:
            raise ParameterError(f"missing parameter {key!r} for {kind}")
        try:
            out[key] = convert(value)
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"bad value for {key!r}: {exc}") from None
    return out


# ----------------------------------------------------------------- builders


def _config(p: dict, schedule, method: str = "solver", workers: int = 1) -> ExperimentConfig:
    return ExperimentConfig(DistributionSpec.parse(p["dist"]), tuple(map(tuple, schedule)),
                            p["trials"], p["seed"], method, workers)


def _expectation(p, workers):
    points = estimate_expectation(_config(p, p["schedule"], p["method"], workers))
    columns = ["n", "m", "scale", "optimum_mean", "optimum_std_error", "ratio", "greedy_mean",
               "greedy_std_error", "row_maxima_mean", "row_maxima_std_error", "lower_mean",
               "lower_std_error", "upper_mean", "upper_std_error", "chain_violations", "bracket_ok"]
    rows = []
    for pt in points:
        row = {"n": pt.n, "m": pt.m, "scale": pt.scale, "ratio": pt.ratio,
               "chain_violations": pt.chain_violations, "bracket_ok": pt.bracket_ok}
        for name, stats in (("optimum", pt.optimum), ("greedy", pt.greedy),
                            ("row_maxima", pt.row_maxima), ("lower", pt.lower), ("upper", pt.upper)):
            row.update(stats_dict(name, stats))
        rows.append(row)
    return columns, rows, []


def _min_expectation(p, workers):
    schedule = [(n, n) for n in p["n"]]
    points = estimate_min_expectation(_config(p, schedule, workers=workers))
    rows = [{"n": pt.n, "mean": pt.stats.mean, "std_error": pt.stats.std_error,
             "oracle": pt.oracle, "z_score": pt.z_score} for pt in points]
    return ["n", "mean", "std_error", "oracle", "z_score"], rows, []


def _lln(p, workers):
    points = lln_report(_config(p, p["schedule"], workers=workers), p["band"])
    columns = ["n", "m", "band", "exceed_fraction", "ratio_mean", "ratio_std", "ratio_min", "ratio_max"]
    return columns, [{c: getattr(pt, c) for c in columns} for pt in points], []


def _ldp(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    optima = sample_optima(spec, p["n"], p["m"], trials=p["trials"], seed=p["seed"], point=0,
                           workers=workers)[:, 0]
    columns = ["n", "m", "r", "side", "threshold", "hits", "trials", "p_hat", "log_rate",
               "std_error_log", "bound_lower", "bound_upper", "epsilon", "within_0.1", "notes"]
    rows = []
    for r in p["r"]:
        est = ldp_tail_estimate(spec, p["n"], p["m"], r, p["trials"], p["side"], seed=p["seed"],
                                optima=optima)
        row = {c: getattr(est, c) for c in columns[:-2]}
        row["within_0.1"] = est.within(0.1) if est.log_rate is not None else None
        row["notes"] = "; ".join(est.notes)
        rows.append(row)
    return columns, rows, ["all r values share one trial set"]


def _cumulant(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    rows = []
    for t in p["t"]:
        chk = cumulant_convergence_check(spec, p["n"], t, p["trials"], seed=p["seed"], workers=workers)
        rows.append({"n": chk.n, "t": chk.t, "log_mgf_hat": chk.log_mgf_hat, "target": chk.target,
                     "gap": chk.gap, "std_error": chk.std_error, "mean": chk.mean,
                     "mean_exact": chk.mean_exact})
    notes = ["|t| <= 0.4: the plain estimator's variance diverges as t approaches 0.5"]
    return ["n", "t", "log_mgf_hat", "target", "gap", "std_error", "mean", "mean_exact"], rows, notes


def _epsilon(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    schedule = p["schedule"]
    n, m = schedule[-1]
    rep = epsilon(spec, n, m, schedule)
    rows = [{"n": nn, "m": mm, "epsilon": v} for (nn, mm), v in zip(schedule, rep.sequence_values)]
    notes = [f"eps_inf={rep.eps_inf!r}", f"eps_sup={rep.eps_sup!r}",
             "eps_inf/eps_sup taken over the trailing half of the schedule"]
    return ["n", "m", "epsilon"], rows, notes


def _potter(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    rep = potter_check(spec, p["A"], p["delta"], p["x0"], p["grid_size"], p["decades"])
    rows = [{"x": x, "y": y, "ratio": ratio, "bound": bound} for x, y, ratio, bound in rep.violations]
    return ["x", "y", "ratio", "bound"], rows, [f"violations={len(rep.violations)}", f"ok={rep.ok}"]


def _rate_function(p, workers):
    table = rate_function_table(p["r_min"], p["r_max"], p["step"])
    rows = [{"r": r, "lambda_star": ls, "t_star": t} for r, ls, t in table.rows()]
    return ["r", "lambda_star", "t_star"], rows, [f"gamma={table.gamma_const!r}"]


def _ftg(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    columns = ["n", "b_n", "a_n", "ks", "p_value", "trials"]
    rows = []
    for index, n in enumerate(p["n"]):
        chk = ftg_convergence_check(spec, n, p["trials"], seed=p["seed"] + index, workers=workers)
        rows.append({c: getattr(chk, c) for c in columns})
    return columns, rows, []


def _moments(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    points = moment_convergence_check(spec, p["alpha"], p["k"], p["n"], p["trials"], seed=p["seed"],
                                      workers=workers)
    columns = ["n", "moment", "moment_std_error", "target", "gap", "gap_std_error"]
    notes = ["gap estimated by coupling each maximum with its limit variate through one uniform"]
    return columns, [{c: getattr(pt, c) for c in columns} for pt in points], notes


def _lemma2(p, workers):
    spec = DistributionSpec.parse(p["dist"])
    cells = lemma2_bound_check(spec, p["n"], p["q"], p["s"], p["alpha"], draws=p["trials"],
                               seed=p["seed"], workers=workers)
    columns = ["alpha", "threshold", "empirical_prob", "std_error", "bound", "c1", "ok"]
    return columns, [{c: getattr(cell, c) for c in columns} for cell in cells], []


_BUILDERS = {
    "expectation": _expectation,
    "min-expectation": _min_expectation,
    "lln": _lln,
    "ldp": _ldp,
    "cumulant": _cumulant,
    "epsilon": _epsilon,
    "potter": _potter,
    "rate-function": _rate_function,
    "ftg": _ftg,
    "moments": _moments,
    "lemma2": _lemma2,
}


def build_report(kind: str, raw: dict, workers: int = 1) -> Report:
    """Resolve ``raw`` parameters for ``kind``, run the experiment and wrap the result.

    ``workers`` only changes wall time; it is not part of the echoed config.
    """
    if kind not in _BUILDERS:
        raise ParameterError(f"unknown experiment {kind!r}")
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    params = resolve_params(kind, raw)
    columns, rows, notes = _BUILDERS[kind](params, workers)
    return Report(kind, params, columns, rows, notes)
