"""Command-line front end.

Subcommands: ``run <config.json>``, ``compare <config.json>``,
``figure1 [--out DIR]``, ``verify <suite>``. Exit codes: 0 success,
1 verification failure, 2 usage/config error. Config errors print a
machine-readable JSON object on stdout.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, suites
from .algorithms import ALGORITHMS, AlgorithmConfig, run
from .errors import AnchorkitError, ConfigError, DomainViolation
from .problems import PROBLEM_BUILDERS, build_problem

_ALGO_FIELDS = ("alpha", "max_iterations", "momentum_a", "gamma", "theta",
                "epsilon_schedule", "resolvent_tolerance", "stop_residual")

#: algorithm pairs with a declared merging-path rule for ``compare``
MP_RULES = {
    ("FEG", "OHM"): "constant",
    ("EAG", "OHM"): "reported",
    ("APS", "OHM"): "reported",
    ("SM_EAG_PLUS", "OC_HALPERN"): "geometric",
    ("APG_STAR", "OHM_DRS"): "splitting",
}


def _fail(code: str, detail: str, status: int = 2) -> int:
    print(json.dumps({"error": code, "detail": detail}))
    return status


def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_experiment(cfg: dict):
    problem_cfg = cfg.get("problem")
    if not isinstance(problem_cfg, dict) or "name" not in problem_cfg:
        raise ConfigError("config needs problem: {name, params}")
    pname = problem_cfg["name"]
    if pname not in PROBLEM_BUILDERS:
        raise KeyError(f"unknown problem {pname!r}")
    problem = build_problem(pname, problem_cfg.get("params"))
    iterations = int(cfg.get("iterations", 1000))
    algos = cfg.get("algorithms")
    if not algos:
        raise ConfigError("config needs a non-empty algorithms list")
    configs = []
    for entry in algos:
        name = entry.get("algorithm")
        if name not in ALGORITHMS:
            raise ConfigError(f"UNKNOWN_ALGORITHM:{name}")
        kwargs = {k: entry[k] for k in _ALGO_FIELDS if k in entry}
        kwargs.setdefault("max_iterations", iterations)
        if "alpha" not in kwargs:
            raise ConfigError(f"{name}: alpha is required")
        configs.append(AlgorithmConfig(algorithm=name, **kwargs))
    if "start" in cfg:
        z0 = np.asarray(cfg["start"], dtype=float)
    elif problem.start is not None:
        z0 = problem.start
    else:
        seed = int(cfg.get("seed", 0))
        z0 = np.random.default_rng(seed).standard_normal(problem.dim)
    out_dir = Path(cfg.get("outputs", {}).get("directory", "anchorkit-out"))
    return problem, configs, z0, out_dir


def _format(v: float) -> str:
    return f"{v:.17g}"


def _write_trace_csv(path: Path, trace) -> None:
    d = trace.main.shape[1]
    b_cum, r_cum = trace.cumulative_counts()
    header = (["k"] + [f"z_{i}" for i in range(d)]
              + ["residual_norm", "oracle_B_count", "oracle_resolvent_count"])
    rows = [",".join(header)]
    n = len(trace.main)
    for k in range(n):
        res = trace.residual_norms[k] if k < len(trace.residual_norms) else ""
        cells = [str(k)] + [_format(v) for v in trace.main[k]]
        cells.append(_format(res) if res != "" else "")
        cells.append(str(int(b_cum[k])))
        cells.append(str(int(r_cum[k])))
        rows.append(",".join(cells))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def cmd_run(config_path: str) -> int:
    cfg = _load_config(config_path)
    problem, configs, z0, out_dir = _parse_experiment(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, acfg in enumerate(configs):
        trace = run(acfg, problem, z0)
        path = out_dir / f"trace_{i:02d}_{acfg.algorithm}.csv"
        _write_trace_csv(path, trace)
        written.append(str(path))
    print(json.dumps({"status": "ok", "traces": written}))
    return 0


def _compare_reports(rule, traces, problem):
    """(mp measured per k, bound per k, verdict, note) for a declared pair."""
    t1, t2 = traces
    sq = analysis.mp_distance(t1, t2)
    k = np.arange(len(sq))
    if rule == "constant":
        report = analysis.mp_bound_feg_ohm(t1, problem, trace_ohm=t2)
        bound = np.concatenate([[report.bound[0]], report.bound])
        return k ** 2 * sq, bound, report.passed, "constant bound"
    if rule == "splitting":
        xi_star = analysis.fixed_point_reference(problem, t1.params["alpha"],
                                                 start=t1.start)
        report = analysis.mp_bound_apg(t1, t2, problem, xi_star=xi_star)
        c = analysis.apg_path_constant(problem, t1.start, xi_star)
        return (report.measured, report.bound, report.passed,
                f"path constant C(xi_0) = {c:.6g}")
    if rule == "geometric":
        alpha = t1.params["alpha"]
        mu = problem.mu
        growth = (1.0 + 2.0 * alpha * mu * 0.9) ** k  # epsilon = 0.1
        weighted = sq * growth
        finite = bool(np.all(np.isfinite(weighted)))
        sup = float(weighted.max()) if finite else float("inf")
        bound = np.maximum(sup / np.maximum(growth, 1.0), analysis.ATOL)
        return (sq, bound, finite,
                f"empirical geometric envelope, constant {sup:.6g} "
                f"(reported, not asserted)")
    # reported: quadratic weighting without a theoretical constant
    s = k ** 2 * sq
    finite = bool(np.all(np.isfinite(s)))
    split = max(1, 3 * len(s) // 4)
    stable = finite and s[split:].max() <= max(s[:split].max(), analysis.ATOL)
    sup = float(s.max()) if finite else float("inf")
    bound = np.full(len(sq), max(sup, analysis.ATOL))
    return (s, bound, bool(stable),
            f"empirical envelope sup k^2 dist^2 = {sup:.6g} "
            f"(no theoretical constant)")


def cmd_compare(config_path: str) -> int:
    cfg = _load_config(config_path)
    problem, configs, z0, out_dir = _parse_experiment(cfg)
    if len(configs) != 2:
        raise ConfigError("compare needs exactly two algorithms")
    pair = (configs[0].algorithm, configs[1].algorithm)
    rule = MP_RULES.get(pair)
    if rule is None and pair[0] == pair[1]:
        rule = "self"
    if rule is None:
        raise ConfigError(f"no declared merging-path rule for pair {pair}")
    if configs[0].alpha != configs[1].alpha:
        raise ConfigError("compare needs both algorithms at the same alpha")
    traces = [run(c, problem, z0) for c in configs]
    out_dir.mkdir(parents=True, exist_ok=True)
    if rule == "self":
        sq = analysis.mp_distance(*traces)
        bound = np.full(len(sq), 1.0)
        verdict, note = bool(np.all(sq == 0.0)), "identical algorithms"
        measured = sq
    else:
        measured, bound, verdict, note = _compare_reports(rule, traces, problem)
    sq = analysis.mp_distance(*traces)
    k = np.arange(len(measured))
    rows = ["k,sq_distance,k2_sq_distance,bound,ratio"]
    for i in k:
        ratio = measured[i] / (bound[i] + analysis.ATOL)
        rows.append(",".join([str(int(i)), _format(sq[i]),
                              _format(i * i * sq[i]), _format(bound[i]),
                              _format(ratio)]))
    mp_path = out_dir / "mp.csv"
    mp_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    verdict_doc = {
        "pair": list(pair),
        "rule": rule,
        "verdict": "pass" if verdict else "fail",
        "note": note,
    }
    (out_dir / "bound.json").write_text(json.dumps(verdict_doc, indent=2) + "\n",
                                        encoding="utf-8")
    print(json.dumps(verdict_doc))
    return 0 if verdict else 1


def cmd_figure1(out: str, iterations: int = 200) -> int:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    prob, runs, failures = suites.figure1_trajectories(iterations)
    for label, trace in runs.items():
        safe = label.replace("(", "_").replace(")", "").replace("=", "")
        rows = ["k,x1,x2"]
        for k, point in enumerate(trace.main):
            rows.append(f"{k},{_format(point[0])},{_format(point[1])}")
        (out_dir / f"trajectory_{safe}.csv").write_text(
            "\n".join(rows) + "\n", encoding="utf-8")
    summary = suites.figure1_summary(runs)
    summary["start"] = [float(v) for v in prob.start]
    summary["iterations"] = iterations
    summary["domain_failures"] = failures
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                          encoding="utf-8")
    print(json.dumps({"status": "ok", "directory": str(out_dir)}))
    return 0


def cmd_verify(suite_name: str) -> int:
    names = sorted(suites.SUITES) if suite_name == "all" else [suite_name]
    failed = False
    for name in names:
        if name not in suites.SUITES:
            return _fail("UNKNOWN_SUITE", f"no suite named {name!r}; "
                                          f"known: {sorted(suites.SUITES)}")
        result = suites.run_suite(name)
        print(f"== suite {name}: {'PASS' if result.passed else 'FAIL'}")
        for line in result.lines:
            print(f"   {line}")
        failed = failed or not result.passed
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="anchorkit",
        description="anchored minimax/fixed-point algorithms and their "
                    "verification suites")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run algorithms, emit trace CSVs")
    p_run.add_argument("config")
    p_cmp = sub.add_parser("compare", help="merging-path comparison of a pair")
    p_cmp.add_argument("config")
    p_fig = sub.add_parser("figure1", help="reproduce the 2-d benchmark runs")
    p_fig.add_argument("--out", default="figure1-out")
    p_fig.add_argument("--iterations", type=int, default=200)
    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("suite")
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config)
        if args.command == "compare":
            return cmd_compare(args.config)
        if args.command == "figure1":
            return cmd_figure1(args.out, args.iterations)
        return cmd_verify(args.suite)
    except FileNotFoundError as exc:
        return _fail("BAD_CONFIG", f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        return _fail("BAD_CONFIG", f"config is not valid JSON: {exc}")
    except KeyError as exc:
        return _fail("UNKNOWN_PROBLEM", str(exc))
    except ConfigError as exc:
        msg = str(exc)
        if msg.startswith("UNKNOWN_ALGORITHM:"):
            return _fail("UNKNOWN_ALGORITHM", msg.split(":", 1)[1])
        return _fail("CONFIG_ERROR", msg)
    except DomainViolation as exc:
        return _fail("DOMAIN_VIOLATION", str(exc))
    except AnchorkitError as exc:
        return _fail(type(exc).__name__.upper(), str(exc))


if __name__ == "__main__":
    sys.exit(main())
