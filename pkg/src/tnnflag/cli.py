"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 2 parse/input error, 3 mismatch, 4 flag outside the
nonnegative part."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import matrix as mx
from .errors import (
    FactorizationError, InputError, MismatchError, NoBraidError, NotInImage, NotNonnegative,
    OrderViolation, TnnFlagError, UnsupportedFolding, UnsupportedRealization,
)
from .flag import (
    CellPoint, act, chamber_ansatz, enumerate_cells, index_to_json, mr_evaluate, point_from_json,
    point_to_json, random_point, star_index, transition,
)
from .monoid import (
    GElement, g_from_json, g_mul, g_to_json, iota_fold, random_gelement, to_matrix, unfold,
)
from .rootdata import RootDatum, datum_from_config
from .semifield import MONOMIAL_LIFT, SEMIFIELDS, TROP, QTPos

EXIT_OK, EXIT_PARSE, EXIT_MISMATCH, EXIT_NONNEG = 0, 2, 3, 4

_EXIT_FOR = [
    (NotNonnegative, EXIT_NONNEG),
    ((MismatchError, NotInImage, UnsupportedRealization, FactorizationError), EXIT_MISMATCH),
    ((InputError, OrderViolation, NoBraidError, UnsupportedFolding), EXIT_PARSE),
]


class UsageError(Exception):
    pass


def _json_arg(text: str, what: str):
    if text == "-":
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--{what}: invalid JSON ({exc.msg})") from None


def _datum(args) -> RootDatum:
    if args.gcm_file:
        try:
            with open(args.gcm_file) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.gcm_file}: {exc}") from None
        if isinstance(cfg, list):
            cfg = {"gcm": cfg}
        return datum_from_config(cfg)
    if not args.type:
        raise InputError("give --type or --gcm-file")
    return RootDatum.of_type(args.type)


def _rng(args) -> random.Random:
    if args.seed is None:
        raise InputError("random inputs need --seed")
    if not hasattr(args, "_rng"):
        args._rng = random.Random(args.seed)
    return args._rng


def _report(checks: list[tuple[str, bool]]) -> dict:
    return {name: "PASS" if ok else "FAIL" for name, ok in checks}


def _point(args, datum, sf) -> CellPoint:
    if args.point:
        return point_from_json(datum, sf, _json_arg(args.point, "point"))
    if args.cell:
        params = _json_arg(args.params, "params") if args.params else None
        return point_from_json(datum, sf, _json_arg(args.cell, "cell"), params)
    if getattr(args, "random", False):
        return random_point(datum, sf, _rng(args), max_len=args.max_len or 4)
    raise InputError("give --point, --cell/--params or --random")


def _gelement(args, datum, sf, key="g") -> GElement:
    raw = getattr(args, key)
    if raw:
        return g_from_json(datum, sf, _json_arg(raw, key))
    if getattr(args, "random", False):
        return random_gelement(datum, sf, _rng(args), max_len=args.max_len or 3)
    raise InputError(f"give --{key} or --random")


# -- subcommands -----------------------------------------------------------------

def cmd_cells(args):
    datum = _datum(args)
    if args.max_len is None and datum.classify().kind != "finite":
        raise InputError("infinite Weyl group: give --max-len")
    return [index_to_json(c) for c in enumerate_cells(datum, args.max_len)]


def cmd_mr(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    p = _point(args, datum, sf)
    g = mr_evaluate(p)
    out = {"matrix": mx.matrix_to_json(g)}
    if args.oracle:
        size, f = mx.realization(datum)
        amb = datum.ambient if f else datum
        v, w = mx.detect_cell(g, amb.weyl)
        want_w = amb.weyl.from_word(f.expand(p.word) if f else p.word)
        out["oracle"] = _report([
            ("detect_cell", w == want_w),
            ("roundtrip", chamber_ansatz(g, datum, p.word, sf) == p),
        ])
    return out


def cmd_ca(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    if not args.matrix:
        raise InputError("give --matrix")
    g = mx.matrix_from_json(_json_arg(args.matrix, "matrix"))
    if args.word:
        word = tuple(_json_arg(args.word, "word"))
    else:
        size, f = mx.realization(datum)
        if f:
            raise InputError("folded data need an explicit --word")
        word = mx.detect_cell(g, datum.weyl)[1].reduced_word
    p = chamber_ansatz(g, datum, word, sf)
    out = point_to_json(p)
    if args.oracle:
        out["oracle"] = _report([("same_flag", mx.same_flag(mr_evaluate(p), g))])
    return out


def cmd_trans(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    p = _point(args, datum, sf)
    if not args.word:
        raise InputError("give --word")
    q = transition(p, tuple(_json_arg(args.word, "word")))
    out = point_to_json(q)
    if args.oracle:
        out["oracle"] = _report([("inverse", transition(q, p.word) == p)])
    return out


def cmd_act(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    g = _gelement(args, datum, sf)
    p = _point(args, datum, sf)
    q = act(g, p)
    out = point_to_json(q)
    if args.oracle:
        out["oracle"] = _report([("star_index", q.index == star_index(g.cell, p.index))])
    return out


def cmd_mul(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    g1 = _gelement(args, datum, sf, "g1")
    g2 = _gelement(args, datum, sf, "g2")
    g = g_mul(g1, g2)
    out = g_to_json(g)
    if args.oracle:
        checks = [("cell_index", g.cell == _star(g1, g2))]
        if sf.in_field:
            try:
                checks.append(("matrix", to_matrix(g) == to_matrix(g1) * to_matrix(g2)))
            except UnsupportedRealization:
                pass
        out["oracle"] = _report(checks)
    return out


def _star(g1, g2):
    from .weyl import demazure_star
    return demazure_star(g1.x.w, g2.x.w), demazure_star(g1.y.w, g2.y.w)


def _second_lift(rng: random.Random):
    """n -> t^n (c1 + c2 t) / (1 + c3 t), another lift of valuation n."""
    c1, c2, c3 = (rng.randint(1, 5) for _ in range(3))
    return lambda a: QTPos.monomial(a.n) * QTPos([c1, c2], [1, c3])


def cmd_trop(args):
    datum = _datum(args)
    if args.word:
        p = _point(args, datum, TROP)
        word = tuple(_json_arg(args.word, "word"))

        def run(lift=MONOMIAL_LIFT):
            return point_to_json(transition(p, word, lift=lift))
    elif args.g:
        g = _gelement(args, datum, TROP)
        p = _point(args, datum, TROP)

        def run(lift=MONOMIAL_LIFT):
            return point_to_json(act(g, p, lift=lift))
    else:
        raise InputError("trop needs --word (transition) or --g (action)")
    out = run()
    if args.oracle:
        lift = _second_lift(random.Random(args.seed or 0))
        out["oracle"] = _report([("lift_independence", run(lift) == out)])
    return out


def cmd_fold(args):
    datum, sf = _datum(args), SEMIFIELDS[args.semifield]
    f = datum.folding
    if not args.g:
        return {"type": datum.name, "ambient": RootDatum(f.ambient).name,
                "orbits": {str(i): list(o) for i, o in f.orbits.items()}}
    if args.unfold:
        g = g_from_json(datum.ambient, sf, _json_arg(args.g, "g"))
        return g_to_json(unfold(datum, g))
    g = g_from_json(datum, sf, _json_arg(args.g, "g"))
    out = g_to_json(iota_fold(g))
    if args.oracle:
        out["oracle"] = _report([("unfold", unfold(datum, iota_fold(g)) == g)])
    return out


def cmd_selftest(args):
    from .selftest import run_selftest
    seed = 0 if args.seed is None else args.seed
    results = run_selftest(seed)
    return {"seed": seed, "results": _report(results)}


COMMANDS = {
    "cells": cmd_cells, "mr": cmd_mr, "ca": cmd_ca, "trans": cmd_trans, "act": cmd_act,
    "mul": cmd_mul, "trop": cmd_trop, "fold": cmd_fold, "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--type", help="Cartan type, e.g. A3, C2, G2, A1~")
    common.add_argument("--gcm-file", help="JSON file with a GCM (list of rows or {'gcm': ..., 'nodes': ...})")
    common.add_argument("--semifield", choices=sorted(SEMIFIELDS), default="qpos")
    common.add_argument("--seed", type=int)
    common.add_argument("--oracle", action="store_true", help="re-verify the result and report PASS/FAIL")
    common.add_argument("--max-len", type=int)

    parser = _Parser(prog="tnnflag", description="Totally nonnegative flag manifolds over semifields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    options = {
        "cells": [],
        "mr": ["cell", "params", "point", "random"],
        "ca": ["matrix", "word"],
        "trans": ["cell", "params", "point", "word", "random"],
        "act": ["g", "cell", "params", "point", "random"],
        "mul": ["g1", "g2", "random"],
        "trop": ["g", "cell", "params", "point", "word"],
        "fold": ["g", "unfold"],
        "selftest": [],
    }
    for name, opts in options.items():
        p = sub.add_parser(name, parents=[common], help=COMMANDS[name].__name__)
        for opt in opts:
            if opt in ("random", "unfold"):
                p.add_argument(f"--{opt}", action="store_true")
            else:
                p.add_argument(f"--{opt}", help="JSON (or '-' for stdin)")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(json.dumps({"error": "UsageError", "message": str(exc)}))
        return EXIT_PARSE
    except TnnFlagError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        for kinds, code in _EXIT_FOR:
            if isinstance(exc, kinds):
                return code
        return EXIT_MISMATCH
    print(json.dumps(result, sort_keys=True))
    if isinstance(result, dict):
        reports = [result.get("oracle", {}), result.get("results", {})]
        if any(v == "FAIL" for r in reports for v in r.values()):
            return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
