"""Command-line front end: ``seqspace <command> ...``.

The payload goes to stdout, the log goes to stderr.  Exit status is 0 on
success, 2 when a checked assertion fails and 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .config import FORMATS, load_config
from .errors import SeqSpaceError
from .scalar import precision
from .serialize import (
    SCHEMA,
    dumps,
    estimator_from_json,
    fmt,
    indexset_from_json,
    jsonable,
    limit_to_json,
    loads_sequence,
    map_from_json,
    norm_to_json,
    parse_psi_text,
    parse_space_text,
    seq_to_json,
)

log = logging.getLogger("seqspace")

EXIT_OK, EXIT_USAGE, EXIT_ASSERT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class AssertionFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__("assertion failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# input helpers


def read_sequence(arg: str):
    if arg == "-":
        return loads_sequence(sys.stdin.read())
    text = arg.strip()
    if text in ("harmonic", "catalog:harmonic"):
        return loads_sequence('{"kind":"catalog","name":"harmonic"}')
    if text.startswith("{"):
        return loads_sequence(text)
    if not os.path.exists(arg):
        from .errors import SchemaError

        raise SchemaError("$", f"no such sequence file {arg!r}")
    with open(arg, encoding="utf-8") as fh:
        return loads_sequence(fh.read(), path=f"{arg}:$")


def read_map(arg: str):
    text = arg.strip()
    if text.startswith("{"):
        return map_from_json(json.loads(text))
    name, _, k = text.partition(":")
    obj = {"map": name}
    if k:
        obj["k"] = k
    return map_from_json(obj)


def read_indexset(arg: str):
    text = arg.strip()
    if text.startswith("{"):
        return indexset_from_json(json.loads(text))
    kind, _, rest = text.partition(":")
    members = [int(v) for v in rest.split(",") if v.strip()] if rest else []
    return indexset_from_json({"set": kind, "members": members})


def estimator_from_args(a):
    obj = {"method": a.method, "window": a.window, "offset": a.offset, "depth": a.depth,
           "stages": a.stages, "pieces": a.pieces, "use_certificate": not a.no_certificate}
    return estimator_from_json(obj)


# ---------------------------------------------------------------------------
# commands (each returns a JSON-able payload, or a (payload, csv_text) pair)


def cmd_norm(a, cfg):
    from .spaces import membership

    space = parse_space_text(a.space)
    x = read_sequence(a.seq)
    m = membership(space, x)
    if m.result is None:
        return {"space": space.label, "membership": m.status, "note": m.note}
    d = norm_to_json(m.result)
    d["membership"] = m.status
    return d


def cmd_rearrange(a, cfg):
    from .rearrange import decreasing_rearrangement

    y = decreasing_rearrangement(read_sequence(a.seq))
    return _seq_payload(y, a.prefix)


def cmd_closeup(a, cfg):
    from .rearrange import closing_up

    return _seq_payload(closing_up(read_sequence(a.seq)), a.prefix)


def cmd_apply(a, cfg):
    from .rearrange import apply_map, restrict

    x = read_sequence(a.seq)
    if a.restrict:
        return _seq_payload(restrict(x, read_indexset(a.restrict)), a.prefix)
    if not a.map:
        raise SeqSpaceError("apply needs --map or --restrict")
    return _seq_payload(apply_map(x, read_map(a.map)), a.prefix)


def cmd_sums(a, cfg):
    from .rearrange import partial_sums

    return {"n": a.n, "partial_sums": [fmt(v) for v in partial_sums(read_sequence(a.seq), a.n)]}


def _seq_payload(y, prefix):
    d = {"sequence": seq_to_json(y)}
    if prefix:
        from .sequences import eval_prefix

        d["prefix"] = [fmt(v) for v in eval_prefix(y, prefix)]
    return d


def cmd_limit(a, cfg):
    from .limits import Ratio, dilation_averaged_estimate, estimate_limit, ratio_csv

    x = read_sequence(a.seq)
    est = estimator_from_args(a)
    if a.ratio:
        psi = parse_psi_text(a.ratio)
        if a.csv:
            return {"rows": a.csv, "psi": psi.label}, ratio_csv(psi, x, a.csv)
        e = estimate_limit(est, Ratio(psi, x))
        return limit_to_json(e)
    if est.method == "dilation":
        d = dilation_averaged_estimate(est.stages, x, est.base())
        out = limit_to_json(d.estimate)
        out["dilation_residual"] = fmt(d.residual)
        out["residual_bound"] = fmt(d.residual_bound)
        if not d.residual_ok:
            raise AssertionFailed(out)
        return out
    return limit_to_json(estimate_limit(est, x))


def cmd_gamma(a, cfg):
    from .limits import symmetric_functional

    psi = parse_psi_text(a.psi or cfg.psi)
    e = symmetric_functional(psi, estimator_from_args(a), read_sequence(a.seq))
    d = limit_to_json(e)
    d["psi"] = psi.label
    return d


def cmd_witness(a, cfg):
    from . import witnesses as W

    if a.which == "wl1":
        r = W.weighted_l1_witness(seed=cfg.seed)
        ok = r["e1"] == Fraction(1, 2) and r["others_equal_one"] and r["membership_swap_invariant"]
        return _check(jsonable(r), ok)
    if a.which == "renorm":
        r = W.renorm_contradiction()
        return _check(jsonable(r), r["inconsistent"] and r["same_rearrangement"])
    if a.which == "garling":
        w = W.garling_witness(a.m)
        d = {"m": a.m, "norm_x": jsonable(w.norm_x), "norm_y": jsonable(w.norm_y),
             "harmonic_lower": fmt(w.harmonic_lower), "y_upper": jsonable(w.y_upper),
             "x_contains_harmonic": w.x_contains_harmonic, "y_bounded": w.y_bounded, "differ": w.differ}
        return _check(d, w.x_contains_harmonic and w.y_bounded and w.differ)
    w = W.oscillating_construct(a.stages, digits=cfg.precision)
    r = W.oscillating_verify(w)
    d = {
        "stages": [{"c": fmt(c), "N": str(N)} for c, N in w.stages],
        "checkpoints": [{"T": str(T), "ratio": jsonable(r_)} for T, r_ in w.checkpoints],
        "sup_bound": jsonable(w.sup_bound),
        "psi": "loge",
        "verification": jsonable({k: v for k, v in r.items() if k != "ok"}),
        "ok": r["ok"],
    }
    d = _check(d, r["ok"])
    if a.csv:
        return d, _witness_csv(w)
    return d


def _witness_csv(w) -> str:
    from .scalar import Interval, format_directed

    lines = ["n,ratio"]
    T, S = 0, Fraction(0)
    for c, N in w.stages:
        points = ((T + 1, S + c), (T + N, S + N * c)) if N > 1 else ((T + 1, S + c),)
        for n, s in points:
            r = Interval.exact(s) / Interval.exact(n + 1).log()
            lines.append(f"{n},{format_directed(r.mid(), 20, up=False)}")
        T += N
        S += N * c
    return "\n".join(lines) + "\n"


def _check(d: dict, ok: bool) -> dict:
    d["assertions_hold"] = bool(ok)
    if not ok:
        raise AssertionFailed(d)
    return d


def cmd_verify(a, cfg):
    from .verify import run_suite

    params = {}
    if a.space:
        params["spaces"] = [parse_space_text(s) for s in a.space]
    if a.N:
        params["N"] = a.N
    if a.perms:
        params["perms"] = a.perms
    if a.stages:
        params["stages"] = a.stages
    seed = a.seed if a.seed is not None else cfg.seed
    rep = run_suite(a.suite, trials=a.trials, seed=seed, **params)
    d = rep.to_json()
    log.info("suite %s: %s in %.2fs", rep.suite, "pass" if rep.passed else "FAIL", rep.wall_time)
    d.pop("wall_time")  # keeps stdout byte-identical across runs
    if not rep.passed:
        raise AssertionFailed(d)
    return d


def cmd_psi_report(a, cfg):
    from .spaces import psi_axiom_report

    return jsonable(psi_axiom_report(parse_psi_text(a.psi or cfg.psi), a.N))


# ---------------------------------------------------------------------------
# parser


def _add_estimator(p):
    p.add_argument("--method", default="cesaro", choices=["cesaro", "iterated", "dilation"])
    p.add_argument("--window", type=int, default=1000)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--stages", type=int, default=0)
    p.add_argument("--pieces", type=int, default=2)
    p.add_argument("--no-certificate", action="store_true",
                   help="always use the windowed average, even when the limit is forced")


def _common(default):
    # accepted before or after the subcommand; SUPPRESS keeps the subparser from
    # overwriting a value given in front of it
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--precision", type=int, default=default, help="significant digits (default 50; env SEQSPACE_PRECISION)")
    c.add_argument("--config", default=default, help="key = value config file")
    c.add_argument("--format", choices=FORMATS, default=default, help="output format")
    c.add_argument("--seed", type=int, default=default, help="seed recorded in the output (and used by verify)")
    c.add_argument("-v", "--verbose", action="store_true", default=default or False)
    return c


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seqspace", description="Norms, rearrangements and Banach-limit estimates on sequence spaces.",
                parents=[_common(None)])
    p.add_argument("--version", action="version", version=f"seqspace {__version__}")
    common = _common(argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    def seq_cmd(name, help_, fn, prefix=True):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--seq", required=True, help="sequence JSON file, inline JSON, '-' or 'harmonic'")
        if prefix:
            s.add_argument("--prefix", type=int, help="also print the first N terms")
        s.set_defaults(fn=fn)
        return s

    s = seq_cmd("norm", "norm and membership in a space", cmd_norm, prefix=False)
    s.add_argument("--space", required=True, help="lp:P | linf | wl1 | marcinkiewicz:log2 | garling | JSON")
    seq_cmd("rearrange", "decreasing rearrangement x*", cmd_rearrange)
    seq_cmd("closeup", "closing up x'", cmd_closeup)
    s = seq_cmd("apply", "x_pi for a map, or x_I for an index set", cmd_apply)
    s.add_argument("--map", help="shift:K | dilation2 | evens_to_all | odds_to_all | interleave_with_zeros | JSON")
    s.add_argument("--restrict", help="evens | odds | explicit:1,3 | complement:2 | JSON")
    s = seq_cmd("sums", "partial sums s_n of x*", cmd_sums, prefix=False)
    s.add_argument("--n", type=int, required=True)
    s = seq_cmd("limit", "Banach-limit estimate of x, or of s_n(x)/Psi(n)", cmd_limit, prefix=False)
    s.add_argument("--ratio", metavar="PSI", help="estimate the ratio sequence for this Psi instead")
    s.add_argument("--csv", type=int, metavar="N", help="with --ratio: export n, s_n, Psi(n), ratio for n <= N")
    _add_estimator(s)
    s = seq_cmd("gamma", "symmetric functional gamma(x) on m_Psi", cmd_gamma, prefix=False)
    s.add_argument("--psi", help="log2 | loge | log:B | JSON (default from config)")
    _add_estimator(s)

    w = sub.add_parser("witness", help="counterexample constructions")
    wsub = w.add_subparsers(dest="which", required=True, parser_class=_Parser)
    _wadd = wsub.add_parser
    wsub.add_parser = lambda *a, **k: _wadd(*a, parents=[common], **k)
    wsub.add_parser("wl1", help="weighted l1 with w = (1/2, 1, 1, ...)").set_defaults(fn=cmd_witness)
    wsub.add_parser("renorm", help="the ||x||_inf + |gamma(x)| renorming").set_defaults(fn=cmd_witness)
    g = wsub.add_parser("garling", help="x^m against y^m in the Garling space")
    g.add_argument("--m", type=int, default=4)
    g.set_defaults(fn=cmd_witness)
    o = wsub.add_parser("oscillate", help="sequence whose ratio s_n/ln(n+1) oscillates")
    o.add_argument("--stages", type=int, default=5)
    o.add_argument("--csv", action="store_true", help="print (n, ratio) at block endpoints as CSV")
    o.set_defaults(fn=cmd_witness)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--space", action="append", help="space for norm suites (repeatable)")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--N", type=int)
    v.add_argument("--perms", type=int)
    v.add_argument("--stages", type=int)
    v.set_defaults(fn=cmd_verify)

    r = sub.add_parser("psi-report", help="Psi axioms on [1, N]")
    r.add_argument("--psi", help="log2 | loge | log:B | JSON")
    r.add_argument("--N", type=int, default=1024)
    r.set_defaults(fn=cmd_psi_report)
    return p


def _render(payload, fmt_name: str) -> str:
    if fmt_name == "table":
        lines = []

        def walk(prefix, obj):
            if isinstance(obj, dict):
                for k, v in obj.items():
                    walk(f"{prefix}.{k}" if prefix else k, v)
            elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
                for i, v in enumerate(obj):
                    walk(f"{prefix}[{i}]", v)
            else:
                lines.append(f"{prefix}\t{json.dumps(obj) if not isinstance(obj, str) else obj}")

        walk("", payload)
        return "\n".join(lines) + "\n"
    return dumps(payload)


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if a.verbose else logging.INFO)
    log.propagate = False
    try:
        return _run(a)
    finally:
        log.removeHandler(handler)


def _run(a) -> int:
    try:
        cfg = load_config(a.config, precision=a.precision, format=a.format, seed=a.seed)
    except SeqSpaceError as exc:
        print(f"seqspace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    status = EXIT_OK
    try:
        with precision(cfg.precision):
            result = a.fn(a, cfg)
    except AssertionFailed as exc:
        result, status = exc.payload, EXIT_ASSERT
    except (SeqSpaceError, ValueError, KeyError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"seqspace: {msg}", file=sys.stderr)
        return EXIT_USAGE
    csv_text = None
    if isinstance(result, tuple):
        result, csv_text = result
    log.debug("%s finished in %.3fs", a.command, time.perf_counter() - t0)
    if csv_text is not None and (cfg.format == "csv" or getattr(a, "csv", None)):
        sys.stdout.write(csv_text)
    else:
        payload = {"schema": SCHEMA, "command": a.command, "precision": cfg.precision, "seed": cfg.seed}
        payload.update(result)
        sys.stdout.write(_render(payload, cfg.format if cfg.format != "csv" else "json"))
    if status == EXIT_ASSERT:
        log.error("assertion failed")
    return status


if __name__ == "__main__":
    sys.exit(main())
