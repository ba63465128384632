"""Command-line front end.

    qkz irrep --n 3 --weight 2,1,0
    qkz rmatrix --n 2 --weights 1,0 1,0 --x 3 [--check]
    qkz resonance --config case_A2.json --l 1
    qkz blocks --config case_A3.json
    qkz verify --catalog [--parallel] [--json report.json]
    qkz jordan --identity --k 4
    qkz jordan --hilbert --r 20 --algebra quantum:2

Configs and reports are JSON, with every rational written as a string.
Exit status: 0 when every requested check passes, 1 when any fails, 2 for a
malformed config or invocation, 3 when a spectral parameter is not generic.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import blocks as qb
from .exceptions import ConfigurationError, NonGenericParameter, QKZError, UnsupportedWeight
from .glnrep import TensorModule, build_irrep, singular_space_l, weyl_dimension
from .jordan import COMMUTATIVE, JORDAN, check_hilbert, quantum, verify_jordan_identity
from .linalg import Subspace, format_rational, parse_rational
from .report import CheckResult, Report, vector_witness
from .rmatrix import (audit_cache, begin_audit, check_rmatrix_axioms, check_shift_covariance,
                      compute_rmatrix)
from .yangian import check_yangian_relations

CHECKS = ("yangian-relations", "rmatrix-axioms", "compatibility", "e-forms", "invariance",
          "permutation", "e-relations", "remark", "jordan-identity", "hilbert",
          "proof-steps", "blocks")

DEFAULT_RMATRIX_PARAMS = (("7/2", "-5/3"), ("11", "13/4"), ("-19/5", "23"))

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NONGENERIC = 0, 1, 2, 3


@dataclass
class CaseConfig:
    name: str
    n_rank: int
    factors: list
    z: tuple
    p: Fraction
    l: int
    checks: list
    e_convention: str = "yangian"
    rmatrix_params: tuple = DEFAULT_RMATRIX_PARAMS
    yangian_max: int = 3
    jordan_k: int = 10
    expected: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: dict, name="case") -> "CaseConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        unknown = set(data) - {"case", "n_rank", "factors", "z", "p", "l", "checks",
                               "e_convention", "rmatrix_params", "yangian_max",
                               "jordan_k", "expected", "description"}
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        try:
            n = data["n_rank"]
            factors = data["factors"]
            l = data.get("l", 1)
            checks = data.get("checks", list(CHECKS))
        except KeyError as exc:
            raise ConfigurationError(f"missing config key {exc.args[0]!r}") from None
        if not isinstance(n, int) or n < 2:
            raise ConfigurationError("n_rank must be an integer >= 2")
        if (not isinstance(factors, list) or not factors
                or any(not isinstance(w, list) or len(w) != n
                       or any(not isinstance(c, int) for c in w) for w in factors)):
            raise ConfigurationError(f"factors must be a non-empty list of length-{n} integer lists")
        if not isinstance(l, int) or l < 0:
            raise ConfigurationError("l must be a non-negative integer")
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise ConfigurationError(f"unknown checks {bad}; known: {', '.join(CHECKS)}")
        try:
            p = parse_rational(data.get("p", "-2"))
            z = data.get("z")
            z = None if z is None else tuple(parse_rational(v) for v in z)
            params = tuple((parse_rational(a), parse_rational(b))
                           for a, b in data.get("rmatrix_params", DEFAULT_RMATRIX_PARAMS))
        except (ValueError, TypeError) as exc:
            raise ConfigurationError(f"bad rational in config: {exc}") from None
        if p == 0:
            raise ConfigurationError("p must be nonzero")
        if z is not None and len(z) != len(factors):
            raise ConfigurationError(f"z has {len(z)} entries for {len(factors)} factors")
        conv = data.get("e_convention", "yangian")
        if conv not in ("yangian", "printed"):
            raise ConfigurationError("e_convention must be 'yangian' or 'printed'")
        if z is None:
            z = qb.generic_points(len(factors))
        return cls(data.get("case", name), n, [tuple(w) for w in factors], z, p, l,
                   list(checks), conv, params, int(data.get("yangian_max", 3)),
                   int(data.get("jordan_k", 10)), dict(data.get("expected", {})))

    def context(self) -> qb.QkzContext:
        try:
            return qb.QkzContext.of(self.n_rank, self.factors, self.z, self.p)
        except (ValueError, QKZError) as exc:
            raise ConfigurationError(str(exc)) from None


def catalog_dir():
    return resources.files("qkz") / "catalog"


def catalog_files() -> list:
    return sorted((f for f in catalog_dir().iterdir() if f.name.endswith(".json")),
                  key=lambda f: f.name)


def resolve_config(path: str):
    """A filesystem path, or the name of a bundled catalog file."""
    p = Path(path)
    if p.exists():
        return p
    bundled = catalog_dir() / p.name
    if bundled.is_file():
        return bundled
    raise ConfigurationError(f"config {path!r} not found")


def load_config(path) -> CaseConfig:
    try:
        data = json.loads(Path(str(path)).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
    return CaseConfig.from_json(data, name=Path(str(path)).stem)


# -- running checks ----------------------------------------------------------

def transport_images(ctx, l) -> list:
    """K_1(z) m for the canonical basis vectors m of (t)_l^sing."""
    K = qb.qkz_operator(ctx, 1).matrix
    return [K.apply(dict(m)) for m in singular_space_l(ctx.t, l).basis]


def _expected_blocks(cfg: CaseConfig, ctx) -> CheckResult:
    """Compare C(z) (and optionally k) with values recorded in the config."""
    case = cfg.name
    exp = cfg.expected
    res = qb.resonance_k(ctx, cfg.l)
    C = qb.conformal_blocks(ctx, cfg.l)
    want = None
    if "basis" in exp:
        try:
            want = Subspace(ctx.t.dim, [{int(i): parse_rational(v) for i, v in vec}
                                        for vec in exp["basis"]])
        except (ValueError, TypeError, IndexError, AttributeError) as exc:
            raise ConfigurationError(f"bad expected basis: {exc}") from None
    if "k" in exp and exp["k"] != res.k:
        # witness: a vector of (t)_l^sing, else of the expected C(z), else v1 (x) ... (x) vn
        sing = singular_space_l(ctx.t, cfg.l)
        cands = list(sing.basis) + (list(want.basis) if want else []) + [{ctx.t.hw_index: 1}]
        return CheckResult("blocks", case, "FAIL", witness=vector_witness(cands[0]),
                           detail=f"k={res.k}, config expects {exp['k']}")
    if "transport" in exp:
        sing = singular_space_l(ctx.t, cfg.l)
        if len(exp["transport"]) != sing.dim:
            raise ConfigurationError("expected transport does not match the singular basis")
        for m, rec, img in zip(sing.basis, exp["transport"], transport_images(ctx, cfg.l)):
            try:
                rec = {int(i): parse_rational(v) for i, v in rec}
            except (ValueError, TypeError) as exc:
                raise ConfigurationError(f"bad expected transport: {exc}") from None
            if {i: v for i, v in rec.items() if v} != img:
                return CheckResult("blocks", case, "FAIL", witness=vector_witness(m),
                                   detail="K_1(z) m differs from the recorded image")
    if want is not None:
        return qb._subspace_result("blocks", case, C, want, f"l={cfg.l} dim C={C.dim}")
    return CheckResult("blocks", case, "PASS", detail=f"l={cfg.l} dim C={C.dim}")


def run_case(cfg: CaseConfig, checks=None) -> Report:
    checks = checks or cfg.checks
    ctx = cfg.context()
    t, case = ctx.t, cfg.name
    report = Report()
    begin_audit()
    for name in checks:
        if name == "yangian-relations":
            m = cfg.yangian_max
            report.extend(check_yangian_relations(t, m, m, case))
        elif name == "rmatrix-axioms":
            Ls = [build_irrep(cfg.n_rank, w) for w in cfg.factors]
            L1, L2, L3 = Ls[0], Ls[1 % len(Ls)], Ls[2 % len(Ls)]
            for x, y in cfg.rmatrix_params:
                report.extend(check_rmatrix_axioms(L1, L2, L3, x, y, case))
                report.add(check_shift_covariance(L1, L2, x, y, case))
        elif name == "compatibility":
            report.extend(qb.check_compatibility(ctx, case))
        elif name == "e-forms":
            report.extend(qb.check_e_forms(ctx, convention=cfg.e_convention, case=case))
        elif name == "invariance":
            for i in range(1, ctx.n + 1):
                report.extend(qb.verify_invariance(ctx, cfg.l, i, case))
        elif name == "permutation":
            for i in range(1, ctx.n):
                report.extend(qb.verify_permutation(ctx, cfg.l, i, case))
        elif name == "e-relations":
            report.extend(qb.check_e_relations(ctx, case))
            report.extend(qb.check_jordan_substitution(ctx, case=case))
        elif name == "remark":
            report.add(qb.remark_kernel_equiv(ctx, cfg.l, case))
        elif name == "proof-steps":
            report.extend(qb.check_proof_steps(ctx, cfg.l, case))
        elif name == "jordan-identity":
            for k in range(1, cfg.jordan_k + 1):
                report.extend(verify_jordan_identity(k))
        elif name == "hilbert":
            for alg in (JORDAN, quantum(2), quantum(1)):
                report.extend(check_hilbert(alg))
        elif name == "blocks":
            report.add(_expected_blocks(cfg, ctx))
    return report.extend(audit_cache(case))


def case_json(cfg: CaseConfig, report: Report) -> dict:
    checks = []
    for c in report.checks:
        item = {"name": c.name, "status": c.status}
        if c.witness is not None:
            item["witness"] = c.witness
        if c.detail:
            item["detail"] = c.detail
        checks.append(item)
    return {"case": cfg.name, "checks": checks}


def _run_one(args):
    """Worker entry point: returns (payload, error) for one config path."""
    path, checks = args
    try:
        cfg = load_config(path)
        return case_json(cfg, run_case(cfg, checks)), None
    except NonGenericParameter as exc:
        return None, ("nongeneric", str(exc), format_rational(exc.parameter)
                      if exc.parameter is not None else None)
    except ConfigurationError as exc:
        return None, ("config", str(exc), None)


# -- subcommands -------------------------------------------------------------

def _weight(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight {text!r}; use e.g. 2,1,0") from None


def _out(args, payload, lines):
    if args.json == "-":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for line in lines:
        print(line)
    if args.json:
        Path(args.json).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_irrep(args):
    weights = args.weight or []
    if args.config:
        cfg = load_config(resolve_config(args.config))
        n, weights = cfg.n_rank, list(cfg.factors)
    else:
        n = args.n
        if n is None or not weights:
            raise ConfigurationError("irrep needs --n and --weight, or --config")
    payload, lines = [], []
    for w in weights:
        if len(w) != n:
            raise ConfigurationError(f"weight {w} does not have {n} entries")
        L = build_irrep(n, w)
        mult = {",".join(map(str, k)): v for k, v in sorted(L.weight_multiplicities().items())}
        payload.append({"n": n, "highest_weight": list(w), "dim": L.dim,
                        "weyl_dim": weyl_dimension(n, w), "weights": mult})
        lines.append(f"gl({n}) {w}: dim {L.dim} (Weyl formula {weyl_dimension(n, w)})")
        lines += [f"  weight ({k}) x{v}" for k, v in mult.items()]
    _out(args, payload, lines)
    return EXIT_OK


def cmd_rmatrix(args):
    if len(args.weights) != 2:
        raise ConfigurationError("rmatrix needs exactly two --weights")
    L1, L2 = (build_irrep(args.n, w) for w in args.weights)
    x = parse_rational(args.x)
    R = compute_rmatrix(L1, L2, x).matrix
    payload = {"n": args.n, "hw1": list(L1.highest_weight), "hw2": list(L2.highest_weight),
               "x": format_rational(x), "dim": R.rows,
               "entries": [[r, c, v] for r, c, v in R.to_triplets()]}
    lines = [f"R(x={format_rational(x)}) on gl({args.n}) {L1.highest_weight} x {L2.highest_weight}"]
    if R.rows <= 9:
        lines += ["  " + " ".join(f"{format_rational(v):>6}" for v in row) for row in R.to_dense()]
    else:
        lines.append(f"  {R.rows}x{R.cols}, {R.nnz} nonzero entries")
    status = EXIT_OK
    if args.check:
        y = parse_rational(args.y)
        rep = check_rmatrix_axioms(L1, L2, L2, x, y).extend(
            Report([check_shift_covariance(L1, L2, x, y)]))
        payload["checks"] = case_json(CaseConfig("rmatrix", args.n, [], (), 1, 0, []), rep)["checks"]
        lines += [c.line() for c in rep.checks]
        status = EXIT_OK if rep.passed else EXIT_FAIL
    _out(args, payload, lines)
    return status


def cmd_resonance(args):
    cfg = load_config(resolve_config(args.config))
    t = TensorModule.of(cfg.n_rank, cfg.factors)
    ls = [args.l] if args.l is not None else [cfg.l]
    payload, lines = [], []
    for l in ls:
        sing = singular_space_l(t, l).dim
        entries = []
        for k in range(1, l + 1):
            p = qb.resonant_p(t, l, k)
            entries.append({"k": k, "p": format_rational(p)})
            lines.append(f"l={l}: p={format_rational(p)} (k={k})  singular dim {sing}")
        res = qb.resonance_k(cfg.context(), l)
        payload.append({"l": l, "two_h_theta": res.two_h_theta, "resonances": entries,
                        "config_p": format_rational(cfg.p), "config_k": res.k})
        lines.append(f"l={l}: configured p={format_rational(cfg.p)} gives "
                     + (f"k={res.k}" if res.resonant else "no resonance"))
    _out(args, payload, lines)
    return EXIT_OK


def cmd_blocks(args):
    cfg = load_config(resolve_config(args.config))
    ctx = cfg.context()
    l = args.l if args.l is not None else cfg.l
    C = qb.conformal_blocks(ctx, l)
    res = qb.resonance_k(ctx, l)
    payload = {"case": cfg.name, "l": l, "k": res.k, "dim": C.dim,
               "singular_dim": singular_space_l(ctx.t, l).dim, "basis": C.to_json()["basis"]}
    lines = [f"{cfg.name}: l={l} k={res.k} dim C(z)={C.dim} "
             f"(singular weight space dim {payload['singular_dim']})"]
    lines += ["  " + " ".join(f"{i}:{v}" for i, v in vec) for vec in payload["basis"]]
    _out(args, payload, lines)
    return EXIT_OK


def cmd_verify(args):
    paths = [resolve_config(c) for c in (args.config or [])]
    if args.catalog:
        paths += catalog_files()
    if not paths:
        raise ConfigurationError("verify needs --config or --catalog")
    checks = args.checks.split(",") if args.checks else None
    if checks:
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise ConfigurationError(f"unknown checks {bad}")
    jobs = [(str(p), checks) for p in paths]
    if args.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    payload, lines, status = [], [], EXIT_OK
    for (path, _), (data, err) in zip(jobs, results):
        if err is not None:
            kind, msg, param = err
            if kind == "config":
                print(f"error: {path}: {msg}", file=sys.stderr)
                return EXIT_CONFIG
            print(f"error: {path}: non-generic spectral parameter {param}: {msg}",
                  file=sys.stderr)
            return EXIT_NONGENERIC
        payload.append(data)
        for c in data["checks"]:
            extra = f"  ({c['detail']})" if c.get("detail") else ""
            wit = f"  witness={c['witness']}" if "witness" in c else ""
            lines.append(f"[{c['status']}] {c['name']} :: {data['case']}{extra}{wit}")
            if c["status"] != "PASS":
                status = EXIT_FAIL
    n_fail = sum(c["status"] != "PASS" for d in payload for c in d["checks"])
    n_all = sum(len(d["checks"]) for d in payload)
    lines.append(f"{n_all - n_fail}/{n_all} checks passed over {len(payload)} case(s)")
    _out(args, payload if len(payload) > 1 or args.catalog else payload[0], lines)
    return status


_ALGEBRAS = {"jordan": JORDAN, "commutative": COMMUTATIVE}


def _algebra(text):
    if text in _ALGEBRAS:
        return _ALGEBRAS[text]
    if text.startswith("quantum:"):
        return quantum(parse_rational(text.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(f"unknown algebra {text!r}")


def cmd_jordan(args):
    if not (args.identity or args.hilbert):
        raise ConfigurationError("jordan needs --identity and/or --hilbert")
    report = Report()
    if args.identity:
        report.extend(verify_jordan_identity(args.k))
    if args.hilbert:
        algs = args.algebra or [JORDAN, quantum(2), quantum(1)]
        for alg in algs:
            report.extend(check_hilbert(alg, r_max=args.r))
    payload = case_json(CaseConfig("jordan", 2, [], (), 1, 0, []), report)
    _out(args, payload, [c.line() for c in report.checks])
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="qkz", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    p = sub.add_parser("irrep", help="dimension and weight multiplicities of gl(N) irreducibles")
    p.add_argument("--n", type=int)
    p.add_argument("--weight", type=_weight, action="append")
    p.add_argument("--config")
    add_json(p)
    p.set_defaults(func=cmd_irrep)

    p = sub.add_parser("rmatrix", help="compute R(x), optionally checking its axioms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", type=_weight, nargs=2, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", default="13/4", help="second parameter for the axiom checks")
    p.add_argument("--check", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_rmatrix)

    p = sub.add_parser("resonance", help="resonant p values for a weight index l")
    p.add_argument("--config", required=True)
    p.add_argument("--l", type=int)
    add_json(p)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("blocks", help="compute C(z)")
    p.add_argument("--config", required=True)
    p.add_argument("--l", type=int)
    add_json(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--config", action="append")
    p.add_argument("--catalog", action="store_true", help="run every bundled catalog case")
    p.add_argument("--checks", help="comma-separated subset of: " + ", ".join(CHECKS))
    p.add_argument("--parallel", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("jordan", help="Jordan-plane identity and Hilbert dimensions")
    p.add_argument("--identity", action="store_true")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--hilbert", action="store_true")
    p.add_argument("--r", type=int, default=20)
    p.add_argument("--algebra", type=_algebra, action="append",
                   help="jordan, commutative or quantum:<q>; repeatable")
    add_json(p)
    p.set_defaults(func=cmd_jordan)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigurationError, UnsupportedWeight) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonGenericParameter as exc:
        param = format_rational(exc.parameter) if exc.parameter is not None else "?"
        print(f"error: non-generic spectral parameter {param}: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
