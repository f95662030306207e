"""Command-line entry point.

Subcommands:
  run <config.yaml>    execute one run or grid study from a config file
  map-profile          sample a mapping profile to CSV
  check-cnm            verify a mapping's contact conditions
  suite <name>         run a bundled experiment matrix

Config files are YAML with an optional "extends" key naming a base file
whose keys are merged underneath.  Scheme blocks resolve named mapping
presets to the embedded production parameter tables; resolution is
validated before any computation starts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from . import harness, mappings, problems
from .cnm import check_cnm, cnm_satisfied
from .mappings import (MappingSpec, check_singularity_free, eval_mapping,
                       production_prm_specs, comparative_specs)
from .reconstruct import WeightingStrategy
from .timeint import StepPolicy

# embedded copies of the production parameter tables; preset resolution is
# string-compared against these in the test suite
PRESET_PRODUCTION_PRM = {
    2: {0: {"L": ("1", "7e7", "5"), "R": ("1", "3e6", "5")},
        1: {"L": ("1", "1e5", "4"), "R": ("1", "3e6", "4")}},
    3: {0: {"L": ("1", "1e9", "5"), "R": ("1", "5e4", "6")},
        1: {"L": ("1", "6e5", "6"), "R": ("1", "6e7", "6")},
        2: {"L": ("1", "3e8", "6"), "R": ("1", "2e5", "6")}},
    4: {0: {"L": ("1", "1e11", "5"), "R": ("1", "5e2", "5")},
        1: {"L": ("1", "3e4", "5"), "R": ("1", "3e3", "4")},
        2: {"L": ("1", "1e4", "5"), "R": ("1", "2e4", "4")},
        3: {"L": ("1", "5e7", "5"), "R": ("1", "5e2", "4")}},
}
PRESET_COMPARATIVE = {
    "r322": {0: {"L": "30090", "R": "676.6666"},
             1: {"L": "1235.6790", "R": "8335"},
             2: {"L": "12970.7047", "R": "929.2592"}},
    "mimic_pm": {"L": ("26", "13", "2"), "R": ("40", "20", "2")},
    "mimic_rm": {"L": ("1", "7500", "5"), "R": ("1000", "10000", "2")},
}
PRESET_LINEAR_WEIGHTS = {
    2: ("1/3", "2/3"),
    3: ("1/10", "6/10", "3/10"),
    4: ("1/35", "12/35", "18/35", "4/35"),
    5: ("1/126", "20/126", "60/126", "40/126", "5/126"),
}

_D_BY_R = mappings._D_BY_R


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# mapping preset resolution
# ---------------------------------------------------------------------------

def resolve_mapping(name_or_block, r: int, for_scheme: bool = True):
    """Mapping specs per sub-stencil from a preset name or an inline block.

    for_scheme=False skips the one-spec-per-sub-stencil check so single-dk
    comparative sets can be sampled and checked on their own."""
    dks = _D_BY_R[r]
    if name_or_block is None:
        return None
    if isinstance(name_or_block, str):
        name = name_or_block
        if name == "prm":
            return tuple(production_prm_specs(r))
        if name in ("r322", "mimic_pm", "mimic_rm"):
            specs = comparative_specs(name)
            if for_scheme and len(specs) != r:
                raise ConfigError(f"preset {name} provides {len(specs)} specs, scheme needs {r}")
            return tuple(specs)
        if name == "gm":
            return tuple(mappings.gm_spec(dk) for dk in dks)
        if name == "pm61":
            return tuple(mappings.pm_spec(6, dk) for dk in dks)
        if name == "im":
            return tuple(mappings.im_spec(2, 0.1, dk) for dk in dks)
        if name == "rm260":
            return tuple(mappings.rm_spec(6, 2, dk) for dk in dks)
        if name in ("aim", "aim-m"):
            return tuple(mappings.aim_spec(4, 2, 1e4, dk, s_mode="adaptive")
                         for dk in dks)
        if name == "identity":
            return tuple(mappings.identity_spec(dk) for dk in dks)
        if name.startswith("rm-"):
            try:
                _, n, m = name.split("-")
                return tuple(mappings.rm_spec(int(n), int(m), dk) for dk in dks)
            except ValueError as exc:
                raise ConfigError(f"bad rational-map preset {name!r}") from exc
        if name.startswith("ppm"):
            try:
                _, n, m = name.split("-")
                return tuple(mappings.ppm_spec(int(n), int(m), dk) for dk in dks)
            except ValueError as exc:
                raise ConfigError(f"bad piecewise-polynomial preset {name!r}") from exc
        if name.startswith("pm-"):
            return tuple(mappings.pm_spec(int(name.split("-")[1]), dk) for dk in dks)
        raise ConfigError(f"unknown mapping preset {name!r}")
    if isinstance(name_or_block, dict):
        block = dict(name_or_block)
        family = block.pop("family")
        try:
            return tuple(MappingSpec(family=family, dk=dk, **block) for dk in dks)
        except mappings.MappingError as exc:
            raise ConfigError(f"invalid mapping block: {exc}") from exc
    raise ConfigError(f"cannot interpret mapping {name_or_block!r}")


def resolve_strategy(block: dict) -> WeightingStrategy:
    b = dict(block)
    r = int(b.pop("r"))
    mapping = resolve_mapping(b.pop("mapping", None), r)
    eps = b.pop("eps", None)
    kwargs = dict(
        base=b.pop("base", "js"),
        q=int(b.pop("q", 1)),
        eps=None if eps is None else float(eps),
        upgrade3=bool(b.pop("upgrade3", False)),
        aim_grouped=bool(b.pop("aim_grouped", False)),
        aim_c=float(b.pop("aim_c", 1e4)),
        nis_clamp=bool(b.pop("nis_clamp", True)),
        table_variant=b.pop("table_variant", "printed"),
        label=b.pop("label", ""),
    )
    if b:
        raise ConfigError(f"unknown scheme keys {sorted(b)}")
    try:
        return WeightingStrategy(r=r, mapping=mapping, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid scheme block: {exc}") from exc


def load_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    with open(path) as fh:
        doc = yaml.safe_load(fh) or {}
    if "extends" in doc:
        base = load_config(path.parent / doc.pop("extends"))
        merged = dict(base)
        for key, val in doc.items():
            if isinstance(val, dict) and isinstance(merged.get(key), dict):
                inner = dict(merged[key])
                inner.update(val)
                merged[key] = inner
            else:
                merged[key] = val
        return merged
    return doc


def resolve_config(doc: dict) -> dict:
    prob = dict(doc.get("problem") or {})
    pid = prob.pop("id", None)
    if pid not in problems.PROBLEMS:
        raise ConfigError(f"problem.id must be one of {sorted(problems.PROBLEMS)}; got {pid!r}")
    scheme = doc.get("scheme")
    if not scheme:
        raise ConfigError("config needs a scheme block")
    strat = resolve_strategy(scheme)
    integ = dict(doc.get("integrator") or {})
    policy = None
    if integ:
        try:
            policy = StepPolicy(integ.pop("mode"), float(integ.pop("value", 0.9)))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"invalid integrator block: {exc}") from exc
        if integ:
            raise ConfigError(f"unknown integrator keys {sorted(integ)}")
    out = dict(doc.get("output") or {})
    return {
        "problem_id": pid,
        "N": int(prob.pop("N", problems.PROBLEMS[pid].default_N)),
        "t_final": prob.pop("T", None),
        "grids": prob.pop("grids", None),
        "problem_params": prob or None,
        "strategy": strat,
        "policy": policy,
        "eps_sw": float(doc.get("eps_sw", 1e-6)),
        "format": out.get("format", "csv"),
        "out_path": out.get("path"),
    }


def effective_config(resolved: dict) -> dict:
    """Round-trippable view of a resolved configuration."""
    strat = resolved["strategy"]
    return {
        "problem": {"id": resolved["problem_id"], "N": resolved["N"],
                    "T": resolved["t_final"], "grids": resolved["grids"],
                    "params": resolved["problem_params"]},
        "scheme": {"r": strat.r, "base": strat.base, "q": strat.q,
                   "eps": strat.effective_eps, "upgrade3": strat.upgrade3,
                   "mapping": [vars(s).copy() for s in strat.mapping] if strat.mapping else None},
        "integrator": None if resolved["policy"] is None else
                      {"mode": resolved["policy"].mode, "value": resolved["policy"].value},
        "eps_sw": resolved["eps_sw"],
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    try:
        doc = load_config(args.config)
        cfg = resolve_config(doc)
    except (ConfigError, mappings.MappingError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    strat = cfg["strategy"]
    if cfg["grids"]:
        report = harness.convergence_study(cfg["problem_id"], strat,
                                           cfg["grids"], policy=cfg["policy"],
                                           t_final=cfg["t_final"],
                                           problem_params=cfg["problem_params"])
        results = report.cases
    else:
        results = [harness.run_case(cfg["problem_id"], strat, cfg["N"],
                                    policy=cfg["policy"], t_final=cfg["t_final"],
                                    eps_sw=cfg["eps_sw"],
                                    problem_params=cfg["problem_params"])]
    name = cfg["out_path"] or f"{cfg['problem_id']}-{strat.name()}.{cfg['format']}"
    path = outdir / name
    harness.emit_results(results, cfg["format"], path)
    with open(outdir / (Path(name).stem + "-config.json"), "w") as fh:
        json.dump(effective_config(cfg), fh, indent=1)
    print(f"wrote {path}")
    return 0


def cmd_map_profile(args) -> int:
    try:
        specs = resolve_mapping(args.family, args.r, for_scheme=False)
    except (ConfigError, mappings.MappingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    w = np.linspace(0.0, 1.0, args.samples)
    wrote = []
    for spec in specs:
        if args.dk is not None and abs(spec.dk - args.dk) > 1e-12:
            continue
        g = eval_mapping(spec, w)
        path = outdir / f"profile-{args.family}-dk{spec.dk:.6f}.csv"
        with open(path, "w") as fh:
            fh.write("omega,g_omega\n")
            for wi, gi in zip(w, g):
                fh.write(f"{float(wi)!r},{float(gi)!r}\n")
        wrote.append(path)
    for p in wrote:
        print(f"wrote {p}")
    return 0 if wrote else 2


def cmd_check_cnm(args) -> int:
    try:
        specs = resolve_mapping(args.family, args.r, for_scheme=False)
    except (ConfigError, mappings.MappingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_ok = True
    lines = []
    for spec in specs:
        if args.dk is not None and abs(spec.dk - args.dk) > 1e-12:
            continue
        try:
            rep = check_cnm(spec, args.n, args.m)
        except ValueError as exc:
            print(f"differentiation failure: {exc}", file=sys.stderr)
            return 3
        sing = True
        try:
            sing = check_singularity_free(spec)
        except mappings.MappingError:
            pass  # polynomial family: nothing to scan
        ok = cnm_satisfied(rep, args.n, args.m) and sing and not rep.failures
        all_ok &= ok
        lines.append(rep.summary() + f" singularity_free={sing}")
    text = "\n".join(lines) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    print(text, end="")
    return 0 if all_ok else 1


_SUITES = ("accuracy", "stability", "robustness", "extended")


def _suite_configs(name: str):
    mk = lambda r, **kw: WeightingStrategy(r=r, **kw)
    prm = lambda r: tuple(production_prm_specs(r))
    if name == "accuracy":
        eps = 1e-40
        out = []
        a5 = {"a": 1.005 / np.pi}
        grids = [20, 40, 80, 160, 320]
        for strat, prob, pp in (
                (mk(2, upgrade3=True, mapping=prm(2), eps=eps), "swa1", None),
                (mk(2, upgrade3=True), "swa1", None),
                (mk(3, mapping=prm(3), eps=eps), "swa1", a5),
                (mk(3, eps=eps), "swa1", a5),
                (mk(4, mapping=prm(4), eps=eps), "swa2", None),
                (mk(4, eps=eps), "swa2", None),
                (mk(3, base="linear"), "swa1", a5),
        ):
            out.append(("study", dict(problem_id=prob, strat=strat, grids=grids,
                                      problem_params=pp)))
        return out
    if name == "stability":
        out = []
        for r in (3, 4):
            for strat in (mk(r, mapping=prm(r), eps=1e-40), mk(r)):
                out.append(("case", dict(problem_id="combo", strat=strat, N=400)))
        return out
    if name == "robustness":
        out = []
        schemes = []
        for r in (2, 3, 4):
            kw = {"upgrade3": True} if r == 2 else {}
            schemes.append(mk(r, mapping=prm(r), eps=1e-40, **kw))
            schemes.append(mk(r, **kw))
        schemes += [
            mk(3, mapping=tuple(mappings.gm_spec(dk) for dk in _D_BY_R[3]),
               eps=1e-40, label="weno5-gm"),
            mk(3, mapping=tuple(mappings.im_spec(2, 0.1, dk) for dk in _D_BY_R[3]),
               eps=1e-40, label="weno5-im"),
            mk(3, mapping=tuple(mappings.pm_spec(6, dk) for dk in _D_BY_R[3]),
               eps=1e-40, label="weno5-pm61"),
            mk(3, mapping=tuple(mappings.rm_spec(6, 2, dk) for dk in _D_BY_R[3]),
               eps=1e-40, label="weno5-rm260"),
            mk(3, base="z5", q=1, label="weno5-z5q1"),
            mk(3, base="z5", q=2, label="weno5-z5q2"), mk(3, base="nis5"),
            mk(2, base="p3"), mk(2, base="f3"),
            mk(4, mapping=tuple(mappings.aim_spec(4, 2, 1e4, dk, s_mode="adaptive")
                                for dk in _D_BY_R[4]),
               eps=1e-40, aim_grouped=True, label="weno7-aim-m"),
        ]
        for strat in schemes:
            for pid, pp in (("strong_shock", {"pr": 1e3}), ("strong_shock", {"pr": 1e6}),
                            ("blast", None)):
                tf = 0.3 if (pp and pp["pr"] == 1e3) else None
                out.append(("case", dict(problem_id=pid, strat=strat,
                                         N=problems.PROBLEMS[pid].default_N,
                                         problem_params=pp, t_final=tf,
                                         compare_reference=False)))
        return out
    if name == "extended":
        out = []
        for r in (3, 4):
            for strat in (mk(r, mapping=prm(r), eps=1e-40), mk(r)):
                for N in (200, 400, 800):
                    out.append(("case", dict(problem_id="combo", strat=strat,
                                             N=N, t_final=2000.0)))
        # endpoint-pattern and piecewise-stability comparisons
        for nm in ((6, 1), (4, 1), (4, 2), (4, 3), (6, 2), (6, 3)):
            strat = mk(5, mapping=tuple(mappings.ppm_spec(*nm, dk) for dk in _D_BY_R[5]),
                       eps=1e-40, label=f"weno9-ppm{nm[0]}{nm[1]}")
            out.append(("case", dict(problem_id="combo", strat=strat, N=400,
                                     t_final=100.0)))
        pm6 = mk(5, mapping=tuple(mappings.pm_spec(6, dk) for dk in _D_BY_R[5]),
                 eps=1e-40, label="weno9-pm61")
        out.append(("case", dict(problem_id="combo", strat=pm6, N=400, t_final=100.0)))
        for label, spec_fn in (("weno5-pm61", lambda dk: mappings.pm_spec(6, dk)),
                               ("weno5-ppm61", lambda dk: mappings.ppm_spec(6, 1, dk))):
            strat = mk(3, mapping=tuple(spec_fn(dk) for dk in _D_BY_R[3]),
                       eps=1e-40, label=label)
            out.append(("case", dict(problem_id="combo", strat=strat, N=800,
                                     t_final=2000.0)))
        return out
    raise ConfigError(f"unknown suite {name!r}; choose from {_SUITES}")


def cmd_suite(args) -> int:
    try:
        jobs = _suite_configs(args.name)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    results = []
    for kind, cfg in jobs:
        if kind == "study":
            report = harness.convergence_study(**cfg)
            results.extend(report.cases)
            print(f"{report.scheme} on {report.problem}: "
                  f"orders {[round(float(o), 2) for o in report.orders_Linf]}")
        else:
            case = harness.run_case(**cfg)
            results.append(case)
            status = f"blow-up at step {case.blow_up_step}" if case.blew_up else "completed"
            print(f"{case.scheme} on {case.problem} N={case.N}: {status}")
    path = outdir / f"suite-{args.name}.csv"
    harness.emit_results(results, "csv", path)
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    # the global flags may appear before or after the subcommand; SUPPRESS
    # keeps a subparser from clobbering a value parsed at the top level
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out-dir", default=argparse.SUPPRESS,
                        help="output directory (default: out)")
    shared.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes for independent cases")
    shared.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized property subcommands")
    parser = argparse.ArgumentParser(prog="prmweno", parents=[shared],
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[shared], help="execute a config file")
    p_run.add_argument("config")
    p_run.set_defaults(fn=cmd_run)

    p_map = sub.add_parser("map-profile", parents=[shared],
                           help="sample mapping profiles to CSV")
    p_map.add_argument("family", help="preset name, e.g. prm, gm, pm61, ppm-2-1")
    p_map.add_argument("--r", type=int, default=3)
    p_map.add_argument("--dk", type=float, default=None)
    p_map.add_argument("--samples", type=int, default=1001)
    p_map.set_defaults(fn=cmd_map_profile)

    p_cnm = sub.add_parser("check-cnm", parents=[shared],
                           help="verify mapping contact conditions")
    p_cnm.add_argument("family")
    p_cnm.add_argument("n", type=int)
    p_cnm.add_argument("m", type=int)
    p_cnm.add_argument("--r", type=int, default=3)
    p_cnm.add_argument("--dk", type=float, default=None)
    p_cnm.add_argument("--report", default=None)
    p_cnm.set_defaults(fn=cmd_check_cnm)

    p_suite = sub.add_parser("suite", parents=[shared],
                             help="run a bundled experiment matrix")
    p_suite.add_argument("name", choices=_SUITES)
    p_suite.set_defaults(fn=cmd_suite)

    args = parser.parse_args(argv)
    args.out_dir = getattr(args, "out_dir", "out")
    args.threads = getattr(args, "threads", 2)
    args.seed = getattr(args, "seed", 0)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
