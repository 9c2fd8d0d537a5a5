"""Command line front end

Examples::

    youngkit check young --config instance.json
    youngkit check bounds --config instance.json --format table
    youngkit quantile 0.5
    youngkit legendre power_p --param p=3 --x 1 2 --y 1 4
    youngkit sweep young --count 500 --seed 42 --output young.csv

Exit codes: 0 when every verdict holds, 1 when an inequality is violated
beyond its tolerance (or could not be decided), 2 on invalid input.
"""
import argparse
import json
import logging
import sys
from typing import Dict, List

from .. import settings
from ..cconvex import COST_NAMES, CostFn, check_cconv_young
from ..errors import ConfigError, ConvergenceError, YoungkitError
from ..legendre import ConvexFn, check_ext_young, check_fenchel_young, conjugate
from ..monotone import MonotoneFn
from ..precision import check_bounds
from ..probability import (check_probabilistic_young, erf, erf_inv, erf_inv_newton, truncated_gaussian_pair,
                           uniform_pair)
from ..quadrature import NKernel, QuadConfig
from ..testing import api
from ..testing.instances import KINDS
from ..testing.measure import measure_report
from ..young import YoungInstance, check_young, check_young_ndim, ndim_from_young


logger = logging.getLogger("youngkit.scripts.cli")

CHECKS = ("young", "bounds", "extyoung", "cconv", "ndim", "prob")
TABLE_COLUMNS = ("check", "lhs", "rhs", "gap", "tolerance", "satisfied", "equality")

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2


def _load_config(path: str) -> Dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fp:
            return json.load(fp)
    except json.JSONDecodeError as e:
        raise ConfigError("config", "invalid JSON at line {}: {}".format(e.lineno, e.msg))


def _require(config: Dict, key: str):
    if key not in config:
        raise ConfigError(key, "missing")
    return config[key]


def _number(config: Dict, key: str, default: float = None) -> float:
    if key not in config:
        if default is None:
            raise ConfigError(key, "missing")
        return default
    try:
        return float(config[key])
    except (TypeError, ValueError):
        raise ConfigError(key, "expected a number")


def _cfg(args) -> QuadConfig:
    return QuadConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_depth=args.max_depth)


def _check(kind: str, config: Dict, cfg: QuadConfig, verdict_tol: float) -> List:
    """Run the check `kind` on the instance described by `config`"""
    if kind == "young":
        return [check_young(YoungInstance.from_dict(config), cfg, verdict_tol)]
    if kind == "bounds":
        return check_bounds(YoungInstance.from_dict(config), cfg)
    if kind == "extyoung":
        inst = YoungInstance.from_dict(config)
        Phi = ConvexFn.from_dict(config.get("phi", {"name": "power_p", "p": 2}), "phi")
        return [check_ext_young(inst, Phi, _number(config, "eps", 1.0), cfg, verdict_tol)]
    if kind == "ndim":
        if "phis" in config:
            K_n = NKernel.from_dict(_require(config, "kernel"))
            phis = [MonotoneFn.from_dict(phi, "phis[{}]".format(k)) for k, phi in enumerate(config["phis"])]
            a = [float(v) for v in _require(config, "a")]
            b = [float(v) for v in _require(config, "b")]
            return [check_young_ndim(K_n, phis, a, b, cfg, verdict_tol)]
        inst = YoungInstance.from_dict(config)
        return [check_young_ndim(*ndim_from_young(inst), cfg=cfg, verdict_tol=verdict_tol)]
    if kind == "cconv":
        f = MonotoneFn.from_dict(_require(config, "f"))
        name = config.get("cost", "product")
        if name not in COST_NAMES:
            raise ConfigError("cost", "expected one of {}".format(COST_NAMES))
        lo, hi = f.domain
        x_range = config.get("x_range", [lo, hi])
        y_range = config.get("y_range", [f(lo), f.codomain[1]])
        cost = CostFn.from_name(name, x_range, y_range, config.get("kernel"), cfg)
        return [check_cconv_young(cost, f, _number(config, "x"), _number(config, "y"), cfg, verdict_tol)]
    if kind == "prob":
        pair = config.get("pair", "uniform")
        if pair == "uniform":
            dp = uniform_pair()
        elif pair == "truncated_gaussian":
            dp = truncated_gaussian_pair(_number(config, "upper", 3.0))
        else:
            raise ConfigError("pair", "expected 'uniform' or 'truncated_gaussian'")
        return [check_probabilistic_young(dp, _number(config, "b"), _number(config, "c"), cfg, verdict_tol)]
    raise ConfigError("check", "unknown check {!r}".format(kind))


def _emit(document: Dict, rows: List[Dict], fmt: str):
    if fmt == "json":
        print(json.dumps(api.jsonable(document), indent=2, sort_keys=True))
        return
    table = [TABLE_COLUMNS] + [tuple(_cell(row[key]) for key in TABLE_COLUMNS) for row in rows]
    widths = [max(len(line[k]) for line in table) for k in range(len(TABLE_COLUMNS))]
    for line in table:
        print("  ".join(cell.rjust(width) for cell, width in zip(line, widths)))


def _cell(value) -> str:
    if isinstance(value, float):
        return "{:.10g}".format(value)
    return str(value)


def run_check(args) -> int:
    config = _load_config(args.config)
    if not isinstance(config, dict):
        raise ConfigError("config", "expected a JSON object")
    verdict_tol = settings.verdict_tol if args.verdict_tol is None else args.verdict_tol
    reports = _check(args.check, config, _cfg(args), verdict_tol)
    if args.force_lhs_scale != 1:
        # test hook for the violation path
        for report in reports:
            if hasattr(report, "lhs"):
                report.lhs *= args.force_lhs_scale
    rows = [measure_report(0, args.check, report) for report in reports]
    satisfied = all(row["satisfied"] for row in rows)
    document = {
        "command": "check {}".format(args.check),
        "satisfied": satisfied,
        "reports": [report.to_dict() for report in reports],
    }
    _emit(document, rows, args.format)
    return EXIT_OK if satisfied else EXIT_VIOLATED


def run_quantile(args) -> int:
    z = args.z
    if abs(z) <= settings.erfinv_z_max:
        x, method = erf_inv(z), "series"
    else:
        x, method = erf_inv_newton(z), "newton"
    residual = float(erf(x) - z)
    document = {"command": "quantile", "z": z, "erf_inv": x, "residual": residual, "method": method}
    if args.format == "json":
        print(json.dumps(api.jsonable(document), indent=2, sort_keys=True))
    else:
        print("z={:.17g}  erf_inv={:.17g}  residual={:.3g}  ({})".format(z, x, residual, method))
    return EXIT_OK


def _parse_params(params: List[str]) -> Dict:
    result = {}
    for item in params or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError("param", "expected key=value, got {!r}".format(item))
        try:
            result[key] = float(value)
        except ValueError:
            raise ConfigError("param." + key, "expected a number")
    return result


def run_legendre(args) -> int:
    if args.config is not None:
        description = _load_config(args.config)
    else:
        description = dict({"name": args.name}, **_parse_params(args.param))
        if args.domain is not None:
            description["domain"] = args.domain
    F = ConvexFn.from_dict(description)
    ys = args.y or [F.subgradient(F.domain[0] + 0.5 * (F.domain[1] - F.domain[0]))]
    I_star = args.interval if args.interval is not None else (min(ys) - 1, max(ys) + 1)
    F_star = conjugate(F, I_star, args.grid_n)
    values = [{"y": y, "conjugate": F_star(y), "maximizers": list(F_star.one_sided(y))} for y in ys]
    reports = [check_fenchel_young(F, F_star, x, y) for x in (args.x or []) for y in ys]
    rows = [measure_report(0, "legendre", report) for report in reports]
    satisfied = all(row["satisfied"] for row in rows)
    document = {"command": "legendre", "function": description, "conjugate": values, "satisfied": satisfied,
                "reports": [report.to_dict() for report in reports]}
    if args.format == "table":
        for value in values:
            print("F*({:.10g}) = {:.10g}".format(value["y"], value["conjugate"]))
    _emit(document, rows, args.format)
    return EXIT_OK if satisfied else EXIT_VIOLATED


def run_sweep(args) -> int:
    verdict_tol = settings.verdict_tol if args.verdict_tol is None else args.verdict_tol
    records, summary = api.run_sweep(args.kind, args.count, args.seed, _cfg(args), verdict_tol, args.threads,
                                     args.output, args.output_format)
    if args.format == "json":
        print(json.dumps(api.jsonable({"command": "sweep", "summary": summary}), indent=2, sort_keys=True))
    else:
        width = max(len(key) for key in summary)
        for key, value in summary.items():
            print("{}  {}".format(key.ljust(width), _cell(value)))
    return EXIT_OK if summary["violations"] == 0 else EXIT_VIOLATED


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=("json", "table"), default="json", help="Output format")
    parser.add_argument("--rel-tol", type=float, default=None, help="Relative quadrature tolerance")
    parser.add_argument("--abs-tol", type=float, default=None, help="Absolute quadrature tolerance")
    parser.add_argument("--max-depth", type=int, default=None, help="Subdivision depth of the quadrature")
    parser.add_argument("--verdict-tol", type=float, default=None, help="Tolerance of the verdicts")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only log errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="youngkit", description="Young's inequality for kernel-weighted measures")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    check = commands.add_parser("check", help="Check one instance")
    check.add_argument("check", choices=CHECKS)
    check.add_argument("--config", required=True, help="JSON description of the instance ('-' for stdin)")
    check.add_argument("--force-lhs-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    _common(check)
    check.set_defaults(func=run_check)

    quantile = commands.add_parser("quantile", help="Inverse error function")
    quantile.add_argument("z", type=float)
    _common(quantile)
    quantile.set_defaults(func=run_quantile)

    legendre = commands.add_parser("legendre", help="Conjugate of a builtin convex function")
    legendre.add_argument("name", nargs="?", default="power_p", help="power_p, abs, exp or entropy")
    legendre.add_argument("--config", default=None, help="JSON description of the convex function")
    legendre.add_argument("--param", nargs="*", help="Parameters as key=value")
    legendre.add_argument("--domain", nargs=2, type=float, default=None)
    legendre.add_argument("--y", nargs="*", type=float, help="Points where the conjugate is evaluated")
    legendre.add_argument("--x", nargs="*", type=float,
                          help="Points paired with every y in a Fenchel-Young check")
    legendre.add_argument("--interval", nargs=2, type=float, default=None, help="Domain of the conjugate")
    legendre.add_argument("--grid-n", type=int, default=None)
    _common(legendre)
    legendre.set_defaults(func=run_legendre)

    sweep = commands.add_parser("sweep", help="Check a stream of random instances")
    sweep.add_argument("kind", choices=KINDS)
    sweep.add_argument("--count", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--threads", type=int, default=None, help="Worker threads (default YOUNGKIT_THREADS)")
    sweep.add_argument("--output", default=None, help="File for the measurement rows")
    sweep.add_argument("--output-format", choices=api.FORMATS, default="csv")
    _common(sweep)
    sweep.set_defaults(func=run_sweep)
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        return args.func(args)
    except ConvergenceError as e:
        # the verdict could not be established
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_VIOLATED
    except (YoungkitError, ValueError, OSError) as e:
        logger.debug("input error", exc_info=True)
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
