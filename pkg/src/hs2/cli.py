"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 numerical failure, 3 failed check,
64 usage error. Flags may also come from ``--config FILE`` holding flat
``key=value`` lines (keys are flag names without the leading dashes);
flags given on the command line win over the file.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import __version__
from .acceptance import run_all
from .coupling import SpecialCase, classify, find_minimizers, g_eval, g_reflected
from .deficit import deficit_pair, manifold_distance_report
from .elemineq import L1_EXPONENTS, REPRESENTATIVE, IneqCase, lemma1_check, lemma2_check
from .errors import DomainError, HS2Error, NumericalError
from .params import make_params
from .radial import bubble, bump, combine, zero_profile
from .special import mu_s
from .stability import CASE_INSTANCES, stability_sweep
from .transform import corollary_check, ell_family_member

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERICAL, EXIT_CHECK, EXIT_USAGE = 0, 1, 2, 3, 64
PARAM_KEYS = ("N", "s", "alpha", "beta", "lambda", "mu", "kappa")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- serialization

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    out = format(x, ".17g")
    # keep whole numbers recognizable as floats
    return out if any(c in out for c in ".en") else out + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with sorted keys and floats at 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _t(x: float):
    return "inf" if math.isinf(x) else x


def _text(obj, prefix: str = "") -> str:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{prefix}{k}:")
                lines.append(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {_fmt_float(v).strip(chr(34)) if isinstance(v, float) else v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.append(f"{prefix}- [{i}]")
            lines.append(_text(v, prefix + "  "))
    else:
        lines.append(f"{prefix}{obj}")
    return "\n".join(lines)


def _emit(args, payload: dict, csv_text: str | None = None) -> None:
    fmt = args.format
    if fmt == "csv":
        if csv_text is None:
            raise UsageError(f"{args.command} has no csv output")
        out = csv_text
    elif fmt == "text":
        out = _text(payload) + "\n"
    else:
        out = dumps(payload) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------- argument parsing

def _tval(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters")
    g.add_argument("--N", type=int, help="dimension (>= 3)")
    g.add_argument("--s", type=float, help="singularity exponent in (0, 2)")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float, help="alpha + beta must equal 2(N-s)/(N-2)")
    g.add_argument("--lambda", dest="lambda", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--kappa", type=float, help="coupling strength (any sign)")


def _add_pair(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pair (u, v) = (a U(1,tau_u) + bump_u B, b U(1,tau_v) + bump_v B)")
    g.add_argument("--a", type=float, default=1.0)
    g.add_argument("--b", type=float, default=1.0)
    g.add_argument("--tau-u", type=float, default=1.0)
    g.add_argument("--tau-v", type=float, default=1.0)
    g.add_argument("--bump-u", type=float, default=0.0, help="amplitude of the bump on [1/2, 2]")
    g.add_argument("--bump-v", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hs2", description="Bivariate Hardy-Sobolev constants, deficits and stability checks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def command(name: str, help_: str, params: bool = True):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", help="file of key=value lines supplying any flag")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--output", help="write the report here instead of stdout")
        if params:
            _add_params(p)
        return p

    command("best-constant", "print mu_s, the best constant S and inf g")
    command("classify", "stability case, exponent iota and the minimizers of g")
    p = command("minimize-g", "global minimizers of g with stationarity residuals")
    p.add_argument("--grid-lo", type=float, default=1e-6)
    p.add_argument("--grid-hi", type=float, default=1e6)
    p.add_argument("--per-decade", type=int, default=1000)
    p = command("deficit", "deficit of a described pair (and optionally its distance to the minimizers)")
    _add_pair(p)
    p.add_argument("--distance", action="store_true", help="also compute the manifold distance")
    p = command("stability-sweep", "eps-sweep along (w, (t0+eps) w) with log-log slopes")
    p.add_argument("--case", choices=sorted(CASE_INSTANCES), help="use a preset parameter set")
    p.add_argument("--t0", type=_tval, help="minimizer to perturb (number or inf)")
    p.add_argument("--eps-max", type=float, default=1e-1)
    p.add_argument("--eps-min", type=float, default=1e-3)
    p.add_argument("--n-eps", type=int, default=12)
    p.add_argument("--no-spot-check", action="store_true")
    p = command("transform-check", "compare delta_ell(u, v) with the deficit of the transformed pair")
    _add_pair(p)
    p.add_argument("--ell", type=float, default=0.5)
    p.add_argument("--extremal", action="store_true",
                   help="use (w, t0 w) with w an extremal of the weighted inequality")
    p = command("ineq-test", "randomized checks of the elementary inequalities", params=False)
    p.add_argument("--case", choices=["all"] + [c.value for c in IneqCase], default="all")
    p.add_argument("--iota", type=float, help="exponent for the one-variable cases")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--m", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    command("selfcheck", "run the acceptance suite", params=False)
    return ap


def _read_config(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k] = v
    return out


def _apply_config(ap: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_help(sys.stderr)
        raise UsageError("a subcommand is required")
    if not args.config:
        return args
    sub = ap._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    by_flag = {}
    for a in actions.values():
        for opt in a.option_strings:
            by_flag[opt.lstrip("-")] = a
    defaults = {}
    for k, v in _read_config(args.config).items():
        a = by_flag.get(k) or actions.get(k)
        if a is None:
            raise UsageError(f"unknown config key {k!r}")
        if isinstance(a, argparse._StoreTrueAction):
            defaults[a.dest] = v.lower() in ("1", "true", "yes", "on")
        else:
            if a.choices is not None and v not in a.choices:
                raise UsageError(f"config key {k!r}: invalid choice {v!r}")
            defaults[a.dest] = a.type(v) if a.type else v
    sub.set_defaults(**defaults)
    return ap.parse_args(argv)


def _params(args, required: bool = True):
    vals = {k: getattr(args, k, None) for k in PARAM_KEYS}
    missing = [k for k, v in vals.items() if v is None]
    if missing:
        if not required:
            return None
        raise UsageError(f"missing parameter(s): {', '.join('--' + k for k in missing)}")
    return make_params(vals["N"], vals["s"], vals["alpha"], vals["beta"], vals["lambda"],
                       vals["mu"], vals["kappa"])


def _pair(args, P):
    def one(c, tau, amp):
        terms = []
        if c:
            terms.append((c, bubble(P, 1.0, tau)))
        if amp:
            terms.append((amp, bump()))
        return combine(*terms) if terms else zero_profile()
    if min(args.a, args.b, args.bump_u, args.bump_v) < 0:
        raise DomainError("pair coefficients must be nonnegative")
    return one(args.a, args.tau_u, args.bump_u), one(args.b, args.tau_v, args.bump_v)


def _minset_dict(ms) -> list:
    return [{"t": _t(q.t), "g": q.g_value, "degenerate": q.degenerate,
             "g2": q.second_derivative, "residual": q.residual} for q in ms.points]


# ---------------------------------------------------------------- subcommands

def cmd_best_constant(args) -> int:
    P = _params(args)
    c = classify(P)
    _emit(args, {"mu_s": mu_s(P.N, P.s), "best_constant": c.best_constant,
                 "g_inf": c.best_constant / mu_s(P.N, P.s), "case": c.case_label})
    return EXIT_OK


def cmd_classify(args) -> int:
    P = _params(args)
    c = classify(P)
    payload = {"case": c.case_label, "iota": c.iota, "best_constant": c.best_constant,
               "params": P.as_dict(),
               "minimizers": None if c.minimizers is None else _minset_dict(c.minimizers)}
    _emit(args, payload)
    return EXIT_OK


def cmd_minimize_g(args) -> int:
    P = _params(args)
    try:
        ms = find_minimizers(P, (args.grid_lo, args.grid_hi), args.per_decade)
    except SpecialCase as exc:
        _emit(args, {"special_case": exc.label, "g_inf": g_eval(P, 0.0)})
        return EXIT_OK
    extra = {"g2_at_0": g_eval(P, 0.0, 2), "g2_reflected_at_0": g_reflected(P, 0.0, 2)}
    _emit(args, {"g_inf": ms.g_inf, "minimizers": _minset_dict(ms), "endpoint_data": extra})
    return EXIT_OK


def cmd_deficit(args) -> int:
    P = _params(args)
    u, v = _pair(args, P)
    payload = deficit_pair(u, v, P).as_dict()
    if args.distance:
        if P.kappa <= 0:
            raise DomainError("the manifold distance needs kappa > 0")
        payload["distance"] = manifold_distance_report(u, v, P, find_minimizers(P)).as_dict()
    _emit(args, payload)
    return EXIT_OK


def cmd_stability_sweep(args) -> int:
    if args.case:
        P, t0 = CASE_INSTANCES[args.case]
        if args.t0 is not None:
            t0 = args.t0
    else:
        P = _params(args)
        if args.t0 is None:
            raise UsageError("--t0 is required without --case")
        t0 = args.t0
    if args.n_eps < 4 or not 0 < args.eps_min < args.eps_max:
        raise DomainError("need n-eps >= 4 and 0 < eps-min < eps-max")
    eps = np.geomspace(args.eps_max, args.eps_min, args.n_eps)
    rep = stability_sweep(P, t0, eps, spot_check=not args.no_spot_check)
    summary = rep.summary()
    summary["rows"] = [{"epsilon": e, "deficit": d, "distance": x}
                       for e, d, x in zip(rep.epsilons, rep.deficits, rep.distances)]
    head = "".join(f"# {k}={_fmt_float(summary[k]) if isinstance(summary[k], float) else summary[k]}\n"
                   for k in ("case", "slope_deficit", "slope_distance", "iota_estimate"))
    _emit(args, summary, head + rep.to_csv())
    return EXIT_OK


def cmd_transform_check(args) -> int:
    P = _params(args)
    if args.extremal:
        ms = find_minimizers(P)
        t0 = ms.ts[0]
        w = ell_family_member(P, args.ell)
        u, v = (w.scaled(0.0), w) if math.isinf(t0) else (w, w.scaled(t0))
    else:
        u, v = _pair(args, P)
    rep = corollary_check(u, v, args.ell, P)
    _emit(args, rep.as_dict())
    return EXIT_OK if rep.comparison_holds and rep.nonnegative else EXIT_CHECK


def cmd_ineq_test(args) -> int:
    results = []
    wanted = args.case
    for iota in ([args.iota] if args.iota is not None else L1_EXPONENTS):
        case = IneqCase.L1_GE2 if iota >= 2 else IneqCase.L1_LT2
        if wanted in ("all", case.value):
            results.append(lemma1_check(iota, args.m, args.samples, args.seed))
    for case, (a, b) in REPRESENTATIVE.items():
        if wanted in ("all", case.value):
            if args.alpha is not None and args.beta is not None:
                a, b = args.alpha, args.beta
            results.append(lemma2_check(case, a, b, args.m, args.samples, args.seed))
    if not results:
        raise DomainError(f"no check matches case {wanted} with iota={args.iota}")
    bad = sum(r.violations for r in results)
    _emit(args, {"results": [r.as_dict() for r in results], "total_violations": bad,
                 "seed": args.seed})
    return EXIT_OK if bad == 0 else EXIT_CHECK


def cmd_selfcheck(args) -> int:
    results = run_all()
    ok = all(r.passed for r in results)
    if args.format == "text":
        out = "\n".join(r.line() for r in results) + f"\n{'ALL PASS' if ok else 'FAILURES'}\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    else:
        _emit(args, {"passed": ok, "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results]})
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {
    "best-constant": cmd_best_constant,
    "classify": cmd_classify,
    "minimize-g": cmd_minimize_g,
    "deficit": cmd_deficit,
    "stability-sweep": cmd_stability_sweep,
    "transform-check": cmd_transform_check,
    "ineq-test": cmd_ineq_test,
    "selfcheck": cmd_selfcheck,
}


def run_cli(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except HS2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run_cli())
