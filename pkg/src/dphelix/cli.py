"""Command-line front end. Every command reads and writes JSON.

Exit codes: 0 success, 1 invalid input or failed check, 2 search limits exhausted.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Sequence

from . import corpus
from .connector import Limits, connect
from .delpezzo import Surface, finite_roots, root_lattice_type, weyl_closure
from .errors import DPHelixError, InvalidInput, OracleMismatch, SearchExhausted
from .helix import (
    check_very_strong, find_good_thread, reorder, rotate_thread, seed_of, tilt_minus, tilt_plus,
)
from .helix import Tensor, apply_step
from .jsonio import (
    collection_from_json, collection_to_json, dumps, kclass_to_json, loads, polygon_to_json,
    seed_from_json, seed_to_json, trace_to_json,
)
from .lattice import (
    canonical_polygon, check_t_polygon, delta_class, find_roots, is_q_painleve, mutate_seed, t_polygon,
)
from .toric import oracle_check

__all__ = ["main", "build_parser"]


def _read_doc(source: str | None) -> Any:
    if source is None or source == "-":
        return loads(sys.stdin.read())
    try:
        with open(source, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {source}: {exc.strerror}") from exc


def _read_collection(source: str | None):
    if source and source.startswith("corpus:"):
        try:
            return corpus.load(source[len("corpus:"):])
        except KeyError as exc:
            raise InvalidInput(exc.args[0]) from exc
    return collection_from_json(_read_doc(source))


def _surface(args) -> Surface:
    if args.p1xp1:
        return Surface.p1xp1()
    if args.m is None:
        raise InvalidInput("give --m M (blow-up of P2 at M points) or --p1xp1")
    return Surface.dp(args.m)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _limits(args) -> Limits:
    data: dict = {}
    if args.limits:
        text = args.limits
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        data = loads(text)
        if not isinstance(data, dict) or set(data) - {"depth", "weyl_depth", "max_states"}:
            raise InvalidInput("limits: expected an object with depth, weyl_depth, max_states")
    if args.depth is not None:
        data["depth"] = args.depth
    return Limits(**data)


# seed ------------------------------------------------------------------------------------------

def cmd_seed_mutate(args) -> Any:
    s = seed_from_json(_read_doc(args.input))
    return seed_to_json(mutate_seed(s, args.j, args.sign))


def cmd_seed_polygon(args) -> Any:
    p = t_polygon(seed_from_json(_read_doc(args.input)))
    return polygon_to_json(canonical_polygon(p) if args.canonical else p)


def cmd_seed_roots(args) -> Any:
    s = seed_from_json(_read_doc(args.input))
    roots = find_roots(s, args.depth if args.depth is not None else 2)
    return [{"vector": list(r.vector), "word": [list(w) for w in r.word], "pair": list(r.pair)}
            for _, r in sorted(roots.items())]


def cmd_seed_check(args) -> Any:
    s = seed_from_json(_read_doc(args.input))
    cert = is_q_painleve(s)
    out: dict[str, Any] = {"q_painleve": cert.ok, "radical": [list(v) for v in cert.radical]}
    if cert.witness is not None:
        out["witness"] = list(cert.witness)
        out["witness_value"] = cert.witness_value
    if cert.ok and cert.radical_rank == 1:
        d, coeff = delta_class(s)
        out["delta"] = list(d)
        out["delta_coefficients"] = list(coeff)
        out["polygon_problems"] = check_t_polygon(t_polygon(s))
    return out


# collection ------------------------------------------------------------------------------------

def cmd_collection_check(args) -> Any:
    cert = check_very_strong(_read_collection(args.input))
    return {"very_strong": True, "shift": cert.shift, "slopes": [str(x) for x in cert.slopes]}


def cmd_collection_dual(args) -> Any:
    c = _read_collection(args.input)
    return {"duals": [kclass_to_json(F) for F in c.duals], "psi": [list(p) for p in c.dual_psi]}


def cmd_collection_seed(args) -> Any:
    return seed_to_json(seed_of(_read_collection(args.input)))


def cmd_collection_tilt(args) -> Any:
    c = _read_collection(args.input)
    j = args.j
    if args.find_thread:
        c, _, j = find_good_thread(c, j)
    return collection_to_json(tilt_minus(c, j) if args.minus else tilt_plus(c, j))


def cmd_collection_rotate(args) -> Any:
    return collection_to_json(rotate_thread(_read_collection(args.input), args.k))


def cmd_collection_reorder(args) -> Any:
    return collection_to_json(reorder(_read_collection(args.input), args.i, args.j))


def cmd_collection_tensor(args) -> Any:
    return collection_to_json(apply_step(_read_collection(args.input), Tensor(args.c1)))


# surface ---------------------------------------------------------------------------------------

def cmd_surface_roots(args) -> Any:
    S = _surface(args)
    return [kclass_to_json(a) for a in sorted(finite_roots(S), key=lambda a: a.vector)]


def cmd_surface_weyl(args) -> Any:
    S = _surface(args)
    return {"surface": S.name, "order": len(weyl_closure(S))}


def cmd_surface_type(args) -> Any:
    info = root_lattice_type(_surface(args))
    return {
        "label": info.label,
        "components": list(info.components),
        "simple_roots": [kclass_to_json(a) for a in info.simple_roots],
        "complement": [list(v) for v in info.complement],
        "complement_gram": [list(r) for r in info.complement_gram],
    }


# connect, oracle, corpus -----------------------------------------------------------------------

def cmd_connect(args) -> Any:
    a = _read_collection(args.a)
    b = _read_collection(args.b)
    result = connect(a, b, _limits(args))
    for line in result.log:
        print(line, file=sys.stderr)
    return trace_to_json(result.trace)


def cmd_oracle_toric_check(args) -> Any:
    report = oracle_check(seed_from_json(_read_doc(args.input)))
    bad = [r for r in report if not r["ok"]]
    if bad:
        _emit(args, report)
        raise OracleMismatch(f"{len(bad)} of {len(report)} pairings disagree")
    return report


def cmd_corpus_list(args) -> Any:
    return corpus.names()


def cmd_corpus_show(args) -> Any:
    try:
        return collection_to_json(corpus.load(args.name))
    except KeyError as exc:
        raise InvalidInput(exc.args[0]) from exc


# plumbing --------------------------------------------------------------------------------------

def _emit(args, doc: Any) -> None:
    text = dumps(doc) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sign(text: str) -> int:
    if text in ("+", "1", "+1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    common.add_argument("--depth", type=int, help="search depth (tilts or mutations)")
    common.add_argument("--limits", help="JSON object or file with depth, weyl_depth, max_states")

    p = argparse.ArgumentParser(prog="dphelix", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, func, help_text, inp=True):
        q = parent.add_parser(name, parents=[common], help=help_text)
        if inp:
            q.add_argument("input", nargs="?", help="JSON file, corpus:NAME for collections, or - for stdin")
        q.set_defaults(func=func)
        return q

    seed = groups.add_parser("seed", help="seeds of a lattice with a map to Z^2").add_subparsers(dest="cmd", required=True)
    q = sub(seed, "mutate", cmd_seed_mutate, "mutate at index j (1-based)")
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--sign", type=_sign, default=1, help="+ or -")
    q = sub(seed, "polygon", cmd_seed_polygon, "T-polygon of a seed")
    q.add_argument("--canonical", action="store_true", help="normal form up to SL(2,Z)")
    sub(seed, "roots", cmd_seed_roots, "roots visible within --depth mutations")
    sub(seed, "check", cmd_seed_check, "form certificate, delta and polygon checks")

    col = groups.add_parser("collection", help="numerical exceptional collections").add_subparsers(dest="cmd", required=True)
    sub(col, "check", cmd_collection_check, "certify very strong")
    sub(col, "dual", cmd_collection_dual, "dual classes and their (rank, degree)")
    sub(col, "seed", cmd_collection_seed, "seed of the dual basis")
    q = sub(col, "tilt", cmd_collection_tilt, "tilt at object j")
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--minus", action="store_true", help="inverse tilt")
    q.add_argument("--find-thread", action="store_true", help="rotate to a good thread first")
    q = sub(col, "rotate", cmd_collection_rotate, "slide the thread along the helix")
    q.add_argument("--k", type=int, required=True)
    q = sub(col, "reorder", cmd_collection_reorder, "swap two objects of equal slope")
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--j", type=int, required=True)
    q = sub(col, "tensor", cmd_collection_tensor, "twist by a line bundle")
    q.add_argument("--c1", type=_int_list, required=True, help="comma-separated divisor coordinates")

    surf = groups.add_parser("surface", help="root systems of a surface").add_subparsers(dest="cmd", required=True)
    for name, func, text in (("roots", cmd_surface_roots, "finite roots"),
                             ("weyl", cmd_surface_weyl, "order of the Weyl group"),
                             ("type", cmd_surface_type, "root lattice type")):
        q = sub(surf, name, func, text, inp=False)
        q.add_argument("--m", type=int, help="number of blown-up points (0 for P2)")
        q.add_argument("--p1xp1", action="store_true")

    q = groups.add_parser("connect", parents=[common], help="trace between two collections")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_connect)

    orc = groups.add_parser("oracle", help="independent cross-checks").add_subparsers(dest="cmd", required=True)
    sub(orc, "toric-check", cmd_oracle_toric_check, "compare with toric intersection numbers")

    cor = groups.add_parser("corpus", help="shipped collections").add_subparsers(dest="cmd", required=True)
    sub(cor, "list", cmd_corpus_list, "names", inp=False)
    q = sub(cor, "show", cmd_corpus_show, "print a collection", inp=False)
    q.add_argument("name")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _emit(args, args.func(args))
    except SearchExhausted as exc:
        print(f"SearchExhausted: {exc}", file=sys.stderr)
        return 2
    except (DPHelixError, IndexError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
