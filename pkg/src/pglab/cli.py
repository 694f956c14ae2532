"""``pglab``: batch runner with JSON in and JSON out.

Exit codes: 0 pass, 1 mathematical failure, 2 precision-indeterminate, 64 usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures, suites
from ._kernel import INF
from .config import RunConfig
from .cyclo_eval import iota_n, log_epsilon, precision_budget
from .errors import DomainError, HypothesisFailure, Indeterminate, PrecisionError
from .operators import GammaElement, op_psi, psi_A
from .pgmod import (NoRelation, TwistModule, find_gamma_relation, g_criterion,
                    ndr_membership)
from .series import LaurentSeries
from .wronskian import (ProlongationSystem, RationalFunctionField, SeriesField,
                        extract_constant_relation, verify_certificate)

EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _need(data: dict, key, kind=None):
    if key not in data:
        raise UsageError(f"input is missing {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise UsageError(f"input field {key!r} has the wrong type")
    return value


def _series(text, cfg: RunConfig) -> LaurentSeries:
    try:
        if "{" in text:
            return LaurentSeries.from_text(text, cfg.p)
        return LaurentSeries.from_expression(text, cfg.p, cfg.M, cfg.N)
    except (SyntaxError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"cannot parse series {text!r}: {exc}") from exc


def _series_json(f: LaurentSeries):
    return {"text": f.to_text(), "expression": f.to_expression(),
            "order": None if f.order == INF else f.order,
            "precision": None if f.min_precision() == INF else f.min_precision()}


def _module(data, cfg: RunConfig) -> TwistModule:
    weights = _need(data, "weights", list)
    return TwistModule(data.get("p", cfg.p), tuple(weights),
                       order=data.get("truncation", cfg.M), prec=data.get("precision", cfg.N))


def _element(M: TwistModule, data, cfg: RunConfig):
    coords = _need(data, "element", list)
    out = []
    for c in coords:
        if isinstance(c, str):
            out.append((0, _series(c, cfg)))
        else:
            out.append((int(c.get("tpow", 0)), _series(_need(c, "series", str), cfg)))
    return M.element(out)


def _provenance(cfg, **extra):
    return {"config": cfg.to_json(), **extra}


# ---------------------------------------------------------------------------
# commands: each returns (exit code, JSON object)


def cmd_identities(cfg: RunConfig, psi=psi_A):
    report = suites.run_identities(cfg, psi)
    return (EXIT_OK if report["passed"] else EXIT_FAIL), report


def cmd_psi(cfg: RunConfig, data: dict):
    f = _series(_need(data, "series", str), cfg)
    algorithm = data.get("algorithm", "A")
    out = op_psi(f, algorithm, cfg.neg_depth)
    return EXIT_OK, {"command": "psi", "input": data, "result": _series_json(out),
                     "provenance": _provenance(cfg, algorithm=algorithm)}


def cmd_iota(cfg: RunConfig, data: dict):
    f = _series(_need(data, "series", str), cfg)
    n = int(data.get("n", 1))
    M_t = int(data.get("M_t", cfg.M_t))
    F = iota_n(f, n, M_t, cfg.N, cfg.neg_depth)
    budget = precision_budget(cfg.p, n, M_t, cfg.N, max(0, -f.start))
    return EXIT_OK, {"command": "iota", "input": data, "result": F.to_json(),
                     "provenance": _provenance(
                         cfg, working_digits=budget.relative, digits_lost=budget.loss,
                         log_epsilon_valuation=log_epsilon(cfg.p, n, cfg.N).lattice_valuation())}


def cmd_wronskian(cfg: RunConfig, data: dict):
    field = data.get("H", "QQ(X)")
    if field in ("QQ(X)", "Q(X)"):
        H = RationalFunctionField()
    elif field == "series":
        H = SeriesField(cfg.p, cfg.tau, cfg.M, cfg.N)
    else:
        raise UsageError(f"unknown field {field!r}")
    vectors = _need(data, "vectors", list)
    k = int(_need(data, "k"))
    if "v" in data and any(len(x) != data["v"] for x in vectors):
        raise UsageError("vector length does not match v")
    try:
        system = ProlongationSystem(H, vectors, k)
    except Exception as exc:
        if isinstance(exc, (PrecisionError, Indeterminate)):
            raise
        raise UsageError(f"malformed system: {exc}") from exc
    cert = extract_constant_relation(system)
    out = {"command": "wronskian", "input": data, "certificate": cert.to_json(),
           "provenance": _provenance(cfg)}
    if H.exact:
        out["verified"] = verify_certificate(system, cert)
    return EXIT_OK, out


def cmd_g_criterion(cfg: RunConfig, data: dict):
    M = _module(data, cfg)
    y = _element(M, data, cfg)
    k = int(data.get("k", 0))
    levels = tuple(data.get("levels", cfg.levels))
    report = g_criterion(M, y, k, levels, cfg.M_t, cfg.N)
    code = {"zero": EXIT_OK, "nonzero": EXIT_FAIL}.get(report.verdict(), EXIT_INDETERMINATE)
    return code, {"command": "g-criterion", "input": data, "result": report.to_json(),
                  "provenance": _provenance(cfg, floor=cfg.N - 8)}


def cmd_gamma_relation(cfg: RunConfig, data: dict):
    M = _module(data, cfg)
    y = _element(M, data, cfg)
    g = GammaElement(int(data.get("a", 4 if cfg.p != 2 else 5)), M.p)
    rel = find_gamma_relation(M, y, g, int(data.get("v_max", 3)), int(data.get("s_max", 4)),
                              cfg.tau, int(data.get("truncation", 24)))
    if isinstance(rel, NoRelation):
        code = EXIT_INDETERMINATE if rel.indeterminate else EXIT_FAIL
    else:
        code = EXIT_OK
    return code, {"command": "gamma-relation", "input": data, "result": rel.to_json(),
                  "provenance": _provenance(cfg, a=str(g.a))}


def cmd_module_check(cfg: RunConfig, data: dict):
    M = _module(data, cfg)
    local = cfg.with_(p=M.p, M=M.order, N=M.prec)
    results = suites.module_suite(local, weights=M.weights)
    results.sort(key=lambda r: r.name)
    failing = [r.name for r in results if not r.passed]
    return (EXIT_FAIL if failing else EXIT_OK), {
        "command": "module-check", "module": M.to_json(), "passed": not failing,
        "failing": failing, "checks": [r.to_json() for r in results],
        "provenance": _provenance(local)}


NORMS_CASES = (
    ("trivial summand, y = 1/X", (0,), 0, "X^-1"),
    ("weight 1, y = 1", (1,), 0, "1"),
    ("weight 2, y = 1", (2,), 0, "1"),
    ("weight 0, y = t*X", (0,), 1, "X"),
)


def cmd_norms_demo(cfg: RunConfig):
    rows, verdicts = [], {}
    levels = (1, 2)
    for name, weights, tpow, expr in NORMS_CASES:
        M = TwistModule(cfg.p, weights, order=cfg.M, prec=cfg.N)
        y = M.element([(tpow, _series(expr, cfg))])
        try:
            report = g_criterion(M, y, 0, levels, cfg.M_t, cfg.N)
            cells = {str(n): {"zero": "PASS", "nonzero": "FAIL"}.get(report.verdict(n),
                                                                    "INDETERMINATE")
                     for n in levels}
            vals = {str(c.level): None if c.valuation() is None else str(c.valuation())
                    for c in report.cells}
        except PrecisionError as exc:
            cells = {str(n): "PRECISION" for n in levels}
            vals = {"error": str(exc)}
        verdicts[name] = {"weights": list(weights), "in_tN": ndr_membership(M, y, "in_tN")[0].ok,
                          "levels": cells, "valuations": vals}
        rows.append(f"{name:<28} " + "  ".join(f"n={n}: {cells[str(n)]}" for n in levels))
    return EXIT_OK, {"command": "norms-demo", "table": rows, "verdicts": verdicts,
                     "provenance": _provenance(cfg, floor=cfg.N - 8)}


COMMANDS = {
    "psi": cmd_psi, "iota": cmd_iota, "wronskian": cmd_wronskian,
    "g-criterion": cmd_g_criterion, "gamma-relation": cmd_gamma_relation,
    "module-check": cmd_module_check,
}


def _faulty_psi(f):
    return psi_A(f) + LaurentSeries.one(f.p)


def build_parser():
    ap = _Parser(prog="pglab", description=__doc__.splitlines()[0])
    ap.add_argument("command", nargs="?",
                    choices=["identities", "norms-demo", *COMMANDS])
    ap.add_argument("--config", type=Path)
    ap.add_argument("--input", type=Path)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--fixtures", nargs="?", const=str(fixtures.DEFAULT_PATH), metavar="PATH",
                    help="regenerate oracle fixtures and write them to PATH")
    ap.add_argument("--inject-fault", choices=["psi"], help=argparse.SUPPRESS)
    return ap


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n")


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if x == INF:
        return None
    raise TypeError(f"not serializable: {type(x).__name__}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.fixtures:
            path = fixtures.write_fixtures(args.fixtures)
            _emit({"fixtures": str(path)})
            return EXIT_OK
        if args.command is None:
            raise UsageError("a subcommand is required")
        try:
            cfg = RunConfig.load(args.config) if args.config else RunConfig()
            cfg = cfg.with_(seed=args.seed)
        except (OSError, json.JSONDecodeError, TypeError, DomainError) as exc:
            raise UsageError(f"bad config: {exc}") from exc
        if args.command == "identities":
            code, out = cmd_identities(cfg, _faulty_psi if args.inject_fault else psi_A)
        elif args.command == "norms-demo":
            code, out = cmd_norms_demo(cfg)
        else:
            if args.input is None:
                raise UsageError(f"{args.command} needs --input")
            try:
                data = json.loads(args.input.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"bad input file: {exc}") from exc
            if not isinstance(data, dict):
                raise UsageError("input must be a JSON object")
            code, out = COMMANDS[args.command](cfg, data)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)})
        return EXIT_USAGE
    except HypothesisFailure as exc:
        _emit({"error": "hypothesis", "failed": exc.failed, "message": str(exc)})
        return EXIT_FAIL
    except (PrecisionError, Indeterminate) as exc:
        _emit({"error": "precision", "message": str(exc),
               "required": getattr(exc, "required", None)})
        return EXIT_INDETERMINATE
    except DomainError as exc:
        _emit({"error": "domain", "message": str(exc)})
        return EXIT_USAGE
    _emit(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
