"""Command-line front end.

Every subcommand prints a one-line summary; ``--json`` prints the full report
instead (keys sorted, version stamped).  Exit codes: 0 ok, 1 parse error,
2 precondition violation, 3 internal invariant breach.

The default field comes from ``$TAME_TORS_FIELD`` (``QQ`` if unset).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__

EXIT_PARSE, EXIT_PRE, EXIT_BUG = 1, 2, 3


class ParseFailure(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ParseFailure(str(e)) from e


def _parse(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except ParseFailure:
        raise
    except Exception as e:  # every parse-stage failure maps to exit code 1
        raise ParseFailure(f"{type(e).__name__}: {e}") from e


def _field(args):
    from .reps import parse_field

    return _parse(parse_field, args.field or os.environ.get("TAME_TORS_FIELD", "QQ"))


def _quiver(path):
    from .quiver import parse_quiver

    return _parse(parse_quiver, _read(path))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


# -- subcommands ------------------------------------------------------------------------


def cmd_classify(args):
    Q = _quiver(args.quiver)
    qt = Q.quiver_type
    return str(qt), {"type": qt.tag, "delta": list(qt.delta) if qt.delta else None, "vertices": Q.n}


def cmd_indec(args):
    from .ar_structure import structure

    Q, F = _quiver(args.quiver), _field(args)
    ars = structure(Q, F)
    descs = ars.indecomposables(args.bound)
    rows = [{"descriptor": str(d), "dims": list(ars.dim_of(d))} for d in descs]
    return f"{len(rows)} indecomposables up to dimension {args.bound}", {"bound": args.bound, "indecomposables": rows}


def cmd_tau(args):
    from .reps import format_rep, parse_rep, tau, tau_inv

    Q, F = _quiver(args.quiver), _field(args)
    X = _parse(parse_rep, _read(args.rep), Q, F)
    Y = tau_inv(X) if args.inverse else tau(X)
    name = "tau_inv" if args.inverse else "tau"
    out = {"direction": name, "dims": list(Y.dims), "representation": format_rep(Y)}
    return f"{name}: dims={list(Y.dims)}", out


def cmd_tubes(args):
    from .ar_structure import structure

    Q, F = _quiver(args.quiver), _field(args)
    ars = structure(Q, F)
    if not ars.is_tame():
        raise ValueError("tubes need an extended Dynkin quiver")
    inv = ars.tube_inventory()
    return f"ranks={inv.ranks}", {"ranks": inv.ranks, **inv.summary()}


def cmd_tors(args):
    from .torsion import Tors, parse_handle
    from .base_change_dvr import rule_parser

    Q, F = _quiver(args.quiver), _field(args)
    T = Tors(Q, F)
    if args.action == "enumerate":
        fr = T.enumerate_ftors(args.depth)
        return f"{len(fr.nodes)} torsion classes at depth <= {args.depth}", {"depth_bound": args.depth, **fr.as_dict()}
    if not args.handle:
        raise ParseFailure("tors check needs --handle")
    h = _parse(parse_handle, args.handle, Q, F, rule_parser=rule_parser)
    if not T.ars.is_tame():
        raise ValueError("the characterization check needs an extended Dynkin quiver")
    rep = T.check_characterization(h, args.probe_bound)
    ff, cert = T.is_functorially_finite(h, args.probe_bound)
    if not rep["agree"]:
        raise AssertionError(f"invariant breach: conditions disagree for {h}")
    return f"functorially_finite={'true' if ff else 'false'}", {"functorially_finite": ff, "report": rep, "certificate": cert}


def cmd_snf(args):
    from .base_change_dvr import function_field, snf_dvr, verify_snf
    from .reps import parse_entry, parse_matrix

    F = _field(args)
    K = function_field(F.base if hasattr(F, "base") else F)
    A = _parse(parse_matrix, _read(args.matrix).strip(), K)
    at = _parse(parse_entry, args.at, K.base)
    res = snf_dvr(A, K, at)
    chk = verify_snf(A, res, K)
    show = lambda M: [[K.to_str(x) for x in row] for row in M]
    return (f"exponents={res.exponents}", {"at": str(at), "exponents": res.exponents, "blocks": res.blocks,
                                           "P": show(res.P), "D": show(res.D), "Q": show(res.Q), "check": chk})


def _rq(path, Q):
    from .base_change_dvr import parse_rqmodule

    return _parse(parse_rqmodule, _read(path), Q)


def cmd_filtration(args):
    from .base_change_dvr import filtration_pair
    from .reps import format_rep, is_isomorphic, parse_matrix

    Q = _quiver(args.quiver) if args.quiver else None
    X, Y = _rq(args.x, Q), _rq(args.y, Q)
    if args.iso:
        mats = [m for m in _read(args.iso).split(";") if m.strip()]
        f = [_parse(parse_matrix, m.strip(), X.K) for m in mats]
    else:
        ok, g = is_isomorphic(X.generic(), Y.generic())
        if not ok:
            raise ValueError("modules are not generically isomorphic")
        f = g.maps
    mf = filtration_pair(X, Y, f, _parse(int, args.at))
    s = mf.summary()
    summary = f"m={mf.m}, factors {'matched' if s['factors_matched'] else 'NOT matched'}"
    return summary, {**s, "scale_exponent": mf.scale,
                     "factors": [{"X": format_rep(a), "Y": format_rep(b)} for a, b, _ in mf.factors]}


def cmd_rpq(args):
    from .base_change_dvr import r_pq
    from .reps import parse_entry
    from .torsion import FF, parse_handle

    Q, F = _quiver(args.quiver), _field(args)
    h = _parse(parse_handle, args.handle, Q, F)
    a = _parse(parse_entry, args.at, F)
    g = r_pq(h, a, Q, F)
    ff = isinstance(g, FF)
    return str(g), {"input": str(h), "at": str(a), "output": str(g), "functorially_finite": ff}


def cmd_compat(args):
    from . import compatibility as C
    from .base_change_dvr import function_field
    from .reps import parse_rep

    Q = _quiver(args.quiver) if args.quiver else None
    if args.action == "phit":
        if Q is None and args.files:
            from .base_change_dvr import split_embedded_quiver
            from .quiver import parse_quiver

            qt, _ = split_embedded_quiver(_read(args.files[0]))
            Q = _parse(parse_quiver, qt) if qt else None
        gens = [_rq(p, Q) for p in args.files]
        primes = [_parse(int, x) for x in args.primes.split(",")] if args.primes else None
        F = C.phi_t(gens, Q or gens[0].quiver, primes)
        return f"{len(F.assignments)} listed closed points", {"family": F.to_text(), "compatible": C.is_compatible(F)}
    if len(args.files) != 1:
        raise ParseFailure("compat check/witness take exactly one family file")
    fam = _parse(C.parse_family, _read(args.files[0]), Q)
    if args.action == "check":
        rep = C.is_compatible(fam)
        return f"compatible={'true' if rep['compatible'] else 'false'}", rep
    if not args.rep:
        raise ParseFailure("compat witness needs --rep (a representation over k(t))")
    Xp = _parse(parse_rep, _read(args.rep), fam.quiver, function_field(fam.base))
    gw = C.glue_witness(fam, Xp, rng_seed=args.seed)
    s = gw.summary()
    return f"case={gw.case}, ok={'true' if gw.ok else 'false'}", {**s, "module": gw.X.to_text()}


# -- driver -----------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="tame-tors", description="Torsion classes of tame hereditary algebras.")
    p.add_argument("--field", help="QQ or GF(p); default $TAME_TORS_FIELD or QQ")
    p.add_argument("--seed", type=int, default=20240531)
    p.add_argument("--json", action="store_true", help="print the full JSON report")
    p.add_argument("--output", help="also write the JSON report to this path")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("classify")
    s.add_argument("quiver")
    s = sub.add_parser("indec")
    s.add_argument("quiver")
    s.add_argument("--bound", type=int, default=6)
    s = sub.add_parser("tau")
    s.add_argument("quiver")
    s.add_argument("rep")
    s.add_argument("--inverse", action="store_true")
    s = sub.add_parser("tubes")
    s.add_argument("quiver")
    s = sub.add_parser("tors")
    s.add_argument("action", choices=["enumerate", "check"])
    s.add_argument("quiver")
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--handle")
    s.add_argument("--probe-bound", type=int, default=None)
    s = sub.add_parser("snf")
    s.add_argument("matrix", help="file holding a matrix literal with entries in t")
    s.add_argument("--at", default="0")
    s = sub.add_parser("filtration")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--quiver")
    s.add_argument("--iso", help="file with per-vertex matrices separated by ';' (generic iso X -> Y)")
    s.add_argument("--at", default="0")
    s = sub.add_parser("rpq")
    s.add_argument("quiver")
    s.add_argument("--handle", required=True)
    s.add_argument("--at", default="0")
    s = sub.add_parser("compat")
    s.add_argument("action", choices=["check", "witness", "phit"])
    s.add_argument("files", nargs="+")
    s.add_argument("--quiver")
    s.add_argument("--rep")
    s.add_argument("--primes", help="comma-separated a values for phit")
    return p


COMMANDS = {"classify": cmd_classify, "indec": cmd_indec, "tau": cmd_tau, "tubes": cmd_tubes, "tors": cmd_tors,
            "snf": cmd_snf, "filtration": cmd_filtration, "rpq": cmd_rpq, "compat": cmd_compat}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else 0
    import random

    random.seed(args.seed)
    try:
        summary, report = COMMANDS[args.cmd](args)
    except ParseFailure as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except AssertionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_BUG
    except ValueError as e:
        msg = str(e)
        if "invariant breach" in msg or "internal error" in msg:
            print(f"internal error: {msg}", file=sys.stderr)
            return EXIT_BUG
        print(f"precondition violated: {msg}", file=sys.stderr)
        return EXIT_PRE
    except Exception as e:  # pragma: no cover
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_BUG
    full = {"command": args.cmd, "summary": summary, "version": __version__, "seed": args.seed,
            "report": _jsonable(report)}
    text = json.dumps(full, sort_keys=True, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text if args.json else summary, file=out)
    return 0


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
