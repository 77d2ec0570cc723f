"""Command-line interface.

Every subcommand prints one document (JSON by default) with the fixed
shape ``{command, inputs, outputs, checks, timing}``.  Integers that are
values of the problem are written as decimal strings; huge ones also get a
magnitude summary.  Exit status: 0 ok, 1 a check failed, 2 a budget was
exceeded, 3 invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, fields

from . import bigint, minus_two, oracle, pell, plus_two
from .errors import BudgetExceeded, ConstructionFailed, DivPairsError, InvalidArgument, NoSolution

EXIT_OK, EXIT_CHECK, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3
CONFIG_ENV = "DIVPAIRS_CONFIG"
FORMATS = ("json", "csv", "text")
# values with more digits than this get a magnitude summary alongside them
SUMMARY_DIGITS = 30


# ----------------------------------------------------------------- config


@dataclass
class RunConfig:
    digit_budget: int = pell.DEFAULT_DIGIT_BUDGET
    factor_budget: int = 10**7  # rho iterations per attempt
    workers: int = 1
    output_format: str = "json"
    seed: int = 0

    def validate(self):
        if self.digit_budget < 10:
            raise InvalidArgument("digit_budget must be >= 10")
        if self.factor_budget < 1000:
            raise InvalidArgument("factor_budget must be >= 1000")
        if self.workers < 1:
            raise InvalidArgument("workers must be >= 1")
        if self.output_format not in FORMATS:
            raise InvalidArgument(f"output_format must be one of {', '.join(FORMATS)}")
        return self


def _coerce(name, raw):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if kind in ("int", int):
        try:
            return int(raw.replace("_", ""))
        except ValueError:
            raise InvalidArgument(f"config key {name} needs an integer, got {raw!r}") from None
    return raw


def read_config(path) -> dict:
    """Parse a key=value file; blank lines and ``#`` comments are ignored."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InvalidArgument(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise InvalidArgument(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def load_config(args) -> RunConfig:
    """Defaults, then the config file, then flags."""
    values = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        values.update(read_config(path))
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig(**values).validate()


# ------------------------------------------------------------ serializing


def num(x) -> str:
    return bigint.to_decimal(int(x))


def big(out: dict, name: str, x, digits: bool = True):
    """Store ``x`` under ``name`` and, when large, a ``name_magnitude`` summary."""
    if digits:
        out[name] = num(x)
    if not digits or bigint.digit_count(x) > SUMMARY_DIGITS:
        out[f"{name}_magnitude"] = bigint.magnitude(int(x))


TRIPLE_COLUMNS = ["n", "d1", "d2", "delta", "epsilon"]


def triple_dict(t) -> dict:
    return {"n": num(t.n), "d1": num(t.d1), "d2": num(t.d2), "delta": t.delta, "epsilon": t.epsilon}


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.outputs = {}
        self.checks = []
        self.rows = None  # list of dicts for CSV
        self.columns = None  # CSV header, needed when rows is empty
        self.error = None

    def check(self, name, ok):
        self.checks.append({"name": name, "pass": bool(ok)})

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def document(self, timing):
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "checks": self.checks,
            "timing": timing,
        }
        if self.error is not None:
            doc["error"] = self.error
        return doc


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(value, list):
        rows.append((prefix, " ".join(str(v) for v in value)))
    else:
        rows.append((prefix, value))


def render(report: Report, fmt: str, timing) -> str:
    doc = report.document(timing)
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        if report.rows is not None and report.error is None:
            header = list(report.rows[0]) if report.rows else list(report.columns or ["value"])
            writer.writerow(header)
            for row in report.rows:
                writer.writerow([row[h] for h in header])
        else:
            writer.writerow(["key", "value"])
            flat = []
            _flatten("", {k: v for k, v in doc.items() if k != "checks"}, flat)
            flat += [(f"check.{c['name']}", "pass" if c["pass"] else "FAIL") for c in report.checks]
            writer.writerows(flat)
        return buf.getvalue()
    flat = []
    _flatten("", {"inputs": doc["inputs"], "outputs": doc["outputs"]}, flat)
    if report.error is not None:
        flat.append(("error", report.error))
    width = max((len(k) for k, _ in flat), default=0)
    for k, v in flat:
        buf.write(f"{k:<{width}}  {v}\n")
    for c in report.checks:
        buf.write(f"[{'pass' if c['pass'] else 'FAIL'}] {c['name']}\n")
    if timing is not None:
        buf.write(f"elapsed  {timing['seconds']:.3f} s\n")
    return buf.getvalue()


# --------------------------------------------------------------- commands


def cmd_pell(args, cfg, rep):
    sol = pell.pell_fundamental(args.D, cfg.digit_budget)
    big(rep.outputs, "U", sol.U, not args.summary)
    big(rep.outputs, "V", sol.V, not args.summary)
    rep.outputs["U_digits"] = sol.U_digits
    rep.outputs["period_length"] = sol.period_length
    U, V = bigint.mpz(sol.U), bigint.mpz(sol.V)
    rep.check("U^2 - D V^2 = 1", U * U - args.D * V * V == 1)


def cmd_cfrac(args, cfg, rep):
    cf = pell.cf_sqrt(args.D)
    rep.outputs["a0"] = cf.a0
    rep.outputs["period"] = list(cf.period)
    rep.outputs["period_length"] = cf.period_length
    rep.check("period ends with 2*a0", cf.period[-1] == 2 * cf.a0)
    rep.check("period body is a palindrome", cf.is_palindromic())


def cmd_gen_plus(args, cfg, rep):
    triples = plus_two.triple_chain(args.delta, args.count)
    rep.outputs["triples"] = [triple_dict(t) for t in triples]
    rep.rows = [triple_dict(t) for t in triples]
    rep.check("every triple verifies", all(oracle.verify_triple(t, require_gt1=False) for t in triples))
    rep.check("d2 of each triple is d1 of the next",
              all(a.d2 == b.d1 for a, b in zip(triples, triples[1:])))


def cmd_resultant_check(args, cfg, rep):
    res = plus_two.consecutive_resultant(args.delta, args.m)
    ident = plus_two.resultant_identity_check(args.delta, args.m)
    rep.outputs["resultant"] = str(res)
    rep.outputs["U_m"] = num(pell.u_sequence(args.delta, args.m))
    rep.check("Res(f_m, f_{m+1}) = 0", res == 0)
    rep.check("U_{m-1}, U_m identity", ident)


def _params_dict(p):
    return {"delta": p.delta, "k": num(p.k), "epsilon": p.epsilon, "g": num(p.g), "d": num(p.d),
            "a": num(p.a), "b": num(p.b), "c": num(p.c), "A": num(p.A), "B": num(p.B)}


def cmd_params(args, cfg, rep):
    p = minus_two.derive_params(args.delta, args.k)
    rep.outputs.update(_params_dict(p))
    D = 2 * p.a * p.b * p.c
    rep.outputs["D"] = num(D)
    rep.check("2abc = d(d delta^2 - 2g)", D == p.d * (p.d * p.delta**2 - 2 * p.g))


def cmd_cases(args, cfg, rep):
    table = minus_two.mod8_case_table(args.delta_mod8, args.k_mod8)
    rep.outputs["residues"] = minus_two.residues_mod8(args.delta_mod8, args.k_mod8)
    rows = []
    for cs in table:
        rows.append({
            "case": cs.case_id,
            "verdict": cs.verdict,
            "congruence": cs.congruence,
            "conditions": "; ".join(str(c) for c in cs.conditions),
        })
    rep.outputs["cases"] = rows
    rep.rows = rows
    rep.outputs["surviving"] = [cs.case_id for cs in table if cs.survives_residues]


def cmd_check_k(args, cfg, rep):
    r = minus_two.check_k_conditions(args.delta, args.k)
    p = minus_two.derive_params(args.delta, args.k)
    rep.outputs.update(_params_dict(p))
    rep.outputs["symbols"] = {k: int(v) for k, v in r.jacobi_values.items() if k.startswith("(")}
    labels = ("(i) k mod 8", "(ii) symbol mod A", "(iii) symbol mod B",
              "(iv) a prime", "(v) b prime", "(vi) c prime")
    for label, ok in zip(labels, r.conditions):
        rep.check(label, ok)


def _parse_residue(text):
    try:
        p, x = text.split("=")
        return int(p), int(x)
    except ValueError:
        raise InvalidArgument(f"--residue expects p=x, got {text!r}") from None


def _class_dict(cls):
    return {"k0": num(cls.k0), "modulus": num(cls.modulus), "representative": num(cls.representative),
            "x_residue": num(cls.x_class.residue) if cls.x_class else None,
            "x_modulus": num(cls.x_class.modulus) if cls.x_class else None,
            "residues": {str(p): x for p, x in cls.residues}}


def cmd_crt_class(args, cfg, rep):
    choices = dict(_parse_residue(r) for r in args.residue or ())
    cls = minus_two.build_crt_class(args.delta, choices)
    rep.outputs.update(_class_dict(cls))
    k = cls.k0 if cls.k0 >= 1 else cls.modulus
    r = minus_two.check_k_conditions(args.delta, k)
    rep.check("least positive member meets (i)-(iii)", all(r.conditions[:3]))


def _parse_class(text, delta):
    try:
        k0, M = (int(s) for s in text.split(","))
    except ValueError:
        raise InvalidArgument(f"--class expects k0,M, got {text!r}") from None
    return minus_two.CrtClass(k0, M, delta)


def cmd_search_k(args, cfg, rep):
    cls = _parse_class(args.cls, args.delta) if args.cls else None
    ks = minus_two.search_k(args.delta, args.max, cls, workers=cfg.workers)
    rep.outputs["count"] = len(ks)
    rep.outputs["k"] = [num(k) for k in ks]
    rep.rows = [{"k": num(k)} for k in ks]
    rep.columns = ["k"]
    rep.check("every k meets (i)-(vi)",
              all(minus_two.check_k_conditions(args.delta, k).all_satisfied for k in ks))


def _construction_outputs(res, rep, digits):
    out = rep.outputs
    out["params"] = _params_dict(res.params)
    out["D"] = num(res.D)
    out["case"] = res.case_id
    if res.pell is not None:
        big(out, "U0", res.pell.U, digits)
        big(out, "V0", res.pell.V, digits)
        out["period_length"] = res.pell.period_length
    if res.triple is not None:
        t = res.triple
        big(out, "n", t.n, digits)
        big(out, "d1", t.d1, digits)
        big(out, "d2", t.d2, digits)
        out["gcd_d1_d2"] = num(res.gcd_d1_d2) if res.gcd_d1_d2 is not None else None
        out["gcd_equals_g"] = res.gcd_d1_d2 == res.params.g
    for name, ok in res.checks.items():
        rep.check(name, ok)


def cmd_construct(args, cfg, rep):
    try:
        res = minus_two.construct_solution(args.delta, args.k, force=args.force,
                                           digit_budget=cfg.digit_budget)
    except ConstructionFailed as exc:
        if exc.result is not None:
            _construction_outputs(exc.result, rep, not args.summary)
        raise
    _construction_outputs(res, rep, not args.summary)


def cmd_schinzel(args, cfg, rep):
    cls = _parse_class(args.cls, args.delta)
    if args.representative is not None:
        cls = minus_two.CrtClass(cls.k0, cls.modulus, args.delta, representative=args.representative)
    r = minus_two.schinzel_check(args.delta, cls, args.samples)
    rep.outputs["s"] = num(r.s)
    rep.outputs["y0"] = num(r.y0)
    rows = []
    for row, g in zip(r.rows, r.gcds):
        rows.append({
            "e": row["e"],
            "f1": num(row["values"][0]),
            "f2": num(row["values"][1]),
            "f3": num(row["values"][2]),
            "f1_factors": str(row["factors"][0]) if row["factors"][0] else "1",
            "f2_factors": str(row["factors"][1]) if row["factors"][1] else "1",
            "f3_factors": str(row["factors"][2]) if row["factors"][2] else "1",
            "running_gcd": num(g),
        })
    rep.outputs["rows"] = rows
    rep.rows = rows
    rep.check("gcd of the products is 1", r.success)


def cmd_verify(args, cfg, rep):
    t = plus_two.DivisorTriple(args.n, args.d1, args.d2, args.delta, args.epsilon)
    require = True if args.gt1 else (False if args.allow_one else None)
    ok = oracle.verify_triple(t, require)
    rep.outputs["triple"] = triple_dict(t)
    rep.outputs["require_gt1"] = require if require is not None else t.epsilon != t.delta + 2
    rep.check("triple verifies", ok)


def cmd_scan(args, cfg, rep):
    r = oracle.scan(args.delta, args.epsilon, args.max, require_gt1=args.gt1, n_min=args.min,
                    workers=cfg.workers, n_budget=args.n_budget, seed=cfg.seed,
                    max_iter=cfg.factor_budget)
    rep.outputs["scanned"] = r.scanned
    rep.outputs["stopped_at"] = r.stopped_at
    rep.outputs["witnesses"] = [triple_dict(t) for t in r.witnesses]
    rep.rows = [triple_dict(t) for t in r.witnesses]
    rep.columns = TRIPLE_COLUMNS
    rep.check("every witness verifies",
              all(oracle.verify_triple(t, args.gt1) for t in r.witnesses))
    if r.stopped_at is not None:
        raise BudgetExceeded(f"factorization budget exceeded at n = {r.stopped_at}")


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
    g.add_argument("--config", help=f"key=value file (default: ${CONFIG_ENV})")
    g.add_argument("--digit-budget", dest="digit_budget", type=_positive)
    g.add_argument("--factor-budget", dest="factor_budget", type=_positive)
    g.add_argument("--workers", type=_positive)
    g.add_argument("--seed", type=int)
    g.add_argument("--timing", action="store_true", help="include wall-clock time in the output")

    p = _Parser(prog="divpairs", description="Divisor pairs of (n^2+1)/2 with d1 + d2 = delta*n + epsilon.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("pell", cmd_pell, "fundamental solution of U^2 - D V^2 = 1")
    sp.add_argument("D", type=int)
    sp.add_argument("--summary", action="store_true", help="omit full digits, print magnitudes only")

    sp = add("cfrac", cmd_cfrac, "continued fraction of sqrt(D)")
    sp.add_argument("D", type=int)

    sp = add("gen-plus", cmd_gen_plus, "triples for epsilon = delta + 2")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)

    sp = add("resultant-check", cmd_resultant_check, "common root of consecutive quadratics")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("params", cmd_params, "derived parameters for epsilon = delta - 2")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)

    sp = add("cases", cmd_cases, "the sixteen factorization cases for residues mod 8")
    sp.add_argument("--delta-mod8", dest="delta_mod8", type=int, required=True)
    sp.add_argument("--k-mod8", dest="k_mod8", type=int, required=True)

    sp = add("check-k", cmd_check_k, "evaluate conditions (i)-(vi) for one k")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)

    sp = add("crt-class", cmd_crt_class, "arithmetic progression of admissible k")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--residue", action="append", metavar="p=x", help="residue of x modulo a factor of A")

    sp = add("search-k", cmd_search_k, "all k <= K meeting (i)-(vi)")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--class", dest="cls", metavar="k0,M")

    sp = add("construct", cmd_construct, "build (n, d1, d2) for epsilon = delta - 2")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--force", action="store_true", help="skip the (i)-(vi) precheck")
    sp.add_argument("--summary", action="store_true", help="omit full digits, print magnitudes only")

    sp = add("schinzel", cmd_schinzel, "fixed prime divisor check for a class")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--class", dest="cls", metavar="k0,M", required=True)
    sp.add_argument("--samples", type=_positive, required=True)
    sp.add_argument("--representative", type=int, help="class member used as y0 (default k0)")

    sp = add("verify", cmd_verify, "check one triple")
    for name in ("n", "d1", "d2", "delta", "epsilon"):
        sp.add_argument(f"--{name}", type=int, required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--gt1", action="store_true", help="require d1, d2 > 1")
    mode.add_argument("--allow-one", dest="allow_one", action="store_true", help="allow d1 = 1")

    sp = add("scan", cmd_scan, "brute-force witnesses for odd n <= N")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--epsilon", type=int, required=True)
    sp.add_argument("--max", type=_positive, required=True)
    sp.add_argument("--min", type=int, default=3)
    sp.add_argument("--gt1", action="store_true", help="require d1, d2 > 1")
    sp.add_argument("--n-budget", dest="n_budget", type=_positive, default=oracle.DEFAULT_N_BUDGET)
    return p


def _inputs(args) -> dict:
    skip = {"func", "command", "config", "timing", "output_format", "digit_budget",
            "factor_budget", "workers", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command, _inputs(args))
    fmt = args.output_format or "json"
    try:
        cfg = load_config(args)
        fmt = cfg.output_format
    except InvalidArgument as exc:
        print(f"divpairs: {exc}", file=sys.stderr)
        return EXIT_INVALID
    start = time.perf_counter()
    status = EXIT_OK
    try:
        args.func(args, cfg, rep)
        if not rep.passed:
            status = EXIT_CHECK
    except InvalidArgument as exc:
        rep.error, status = f"invalid argument: {exc}", EXIT_INVALID
    except BudgetExceeded as exc:
        rep.error, status = f"budget exceeded: {exc}", EXIT_BUDGET
    except (ConstructionFailed, NoSolution) as exc:
        rep.error, status = str(exc), EXIT_CHECK
    except DivPairsError as exc:
        rep.error, status = f"internal consistency failure: {exc}", EXIT_CHECK
    timing = {"seconds": round(time.perf_counter() - start, 6)} if args.timing else None
    sys.stdout.write(render(rep, fmt, timing))
    if rep.error is not None:
        print(f"divpairs: {rep.error}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
