"""Command line surface: components, sample, verify, basis, distinguish, euler, graph.

Every output embeds the effective configuration and the tool version, and
re-running a command with the embedded configuration reproduces the output
byte for byte.  JSON is the single persistence format; DOT only for graphs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .components import enumerate_components, export_crystal_graph, one_vertex_labels
from .convolution import (
    DEFAULT_PRIMES,
    NoConsensus,
    NonPolynomialCount,
    distinguished_functions,
    evaluate_word,
    one_vertex_basis,
)
from .quiver import DimVector, QuiverError, load_quiver
from .rep import Rep
from .sampler import SamplerConfig, SamplingFailed, certificate, sample_component
from .verify import run_suite

EX_OK = 0
EX_HARDFAIL = 1
EX_INCONCLUSIVE = 2
EX_USAGE = 64
EX_NOINPUT = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _base_parser():
    parser = _Parser(prog="seminil", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    default_seed = int(os.environ.get("SEMINIL_SEED", "0"))

    def common(p, need_alpha=True):
        p.add_argument("--quiver", required=True, help="path to a quiver JSON document")
        if need_alpha:
            p.add_argument("--alpha", required=True, help="comma list of per-vertex dimensions")
        p.add_argument("--seed", type=int, default=default_seed)
        p.add_argument("--bound", type=int, default=10, help="random coefficient bound")
        p.add_argument("--retries", type=int, default=64)
        p.add_argument("--n-seeds", type=int, default=3, dest="n_seeds")
        p.add_argument("--primes", default=None, help="comma list overriding the prime pool")
        p.add_argument("--output", default=None, help="write here instead of stdout")
        p.add_argument("--format", default="json", choices=["json", "table", "dot"])

    common(sub.add_parser("components", help="catalog the irreducible components"))
    p = sub.add_parser("sample", help="sample one pseudo-generic component point")
    common(p)
    p.add_argument("--label", default=None, help="tuple label like '1,2' for concentrated dimensions")
    p.add_argument("--index", type=int, default=None, help="component index into the catalog")
    common(sub.add_parser("verify", help="run the verification suite"))
    common(sub.add_parser("basis", help="one-vertex unitriangular basis"))
    common(sub.add_parser("distinguish", help="distinguishing functions for all components"))
    p = sub.add_parser("euler", help="one oracle query: flag fiber Euler characteristic")
    common(p, need_alpha=False)
    p.add_argument("--rep", required=True, help="path to a representation JSON document")
    p.add_argument("--word", required=True, help="atoms 'v:l,v:l' left to right")
    common(sub.add_parser("graph", help="DOT export of the peel graph"))
    return parser


def _config_echo(args) -> dict:
    keys = ["command", "quiver", "alpha", "seed", "bound", "retries", "n_seeds", "primes", "format", "label", "index", "rep", "word"]
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


def _cfg(args) -> SamplerConfig:
    return SamplerConfig(args.seed, args.bound, args.retries, args.n_seeds)


def _primes(args):
    if getattr(args, "primes", None):
        return tuple(int(p) for p in args.primes.split(","))
    return DEFAULT_PRIMES


def _load_quiver_file(path):
    try:
        with open(path) as fh:
            return load_quiver(fh.read())
    except OSError as e:
        raise FileNotFoundError(f"cannot read quiver file {path}: {e}") from e


def _alpha(args, quiver) -> DimVector:
    try:
        return DimVector.of(quiver, [int(c) for c in args.alpha.split(",")])
    except ValueError as e:
        raise UsageError(f"bad --alpha {args.alpha!r}: {e}") from e


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _payload(args, body: dict) -> dict:
    return {"version": __version__, "config": _config_echo(args), **body}


def _pick_label(args, quiver, alpha, cfg):
    con = alpha.concentrated()
    if args.label is not None:
        if con is None:
            raise UsageError("--label tuples only name components of concentrated dimensions")
        v, n = con
        parts = tuple(int(p) for p in args.label.split(","))
        if sum(parts) != n:
            raise UsageError(f"label {parts} does not sum to {n}")
        for lab in one_vertex_labels(quiver, v, n):
            if lab.parts == parts:
                return lab
        raise UsageError(f"{parts} does not label a component here")
    catalog = enumerate_components(quiver, alpha, cfg)
    if args.index is None:
        if len(catalog.entries) == 1:
            return catalog.entries[0].label
        raise UsageError("several components: pick one with --label or --index")
    try:
        return catalog.entries[args.index].label
    except IndexError:
        raise UsageError(f"--index {args.index} out of range ({len(catalog.entries)} components)")


def main(argv=None) -> int:
    parser = _base_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EX_USAGE
    if args.command is None:
        print("usage error: no command given", file=sys.stderr)
        return EX_USAGE
    try:
        return _dispatch(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EX_USAGE
    except (FileNotFoundError, QuiverError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EX_NOINPUT
    except (SamplingFailed, NonPolynomialCount, NoConsensus) as e:
        print(f"computation failed: {e}", file=sys.stderr)
        return EX_HARDFAIL


def _dispatch(args) -> int:
    quiver = _load_quiver_file(args.quiver)
    cfg = _cfg(args)
    primes = _primes(args)

    if args.command == "components":
        alpha = _alpha(args, quiver)
        catalog = enumerate_components(quiver, alpha, cfg)
        _emit(args, _json_text(_payload(args, catalog.to_json())))
        return EX_OK

    if args.command == "graph":
        alpha = _alpha(args, quiver)
        catalog = enumerate_components(quiver, alpha, cfg)
        _emit(args, export_crystal_graph(catalog))
        return EX_OK

    if args.command == "sample":
        alpha = _alpha(args, quiver)
        label = _pick_label(args, quiver, alpha, cfg)
        x = sample_component(label, cfg)
        body = {"label": label.to_json(), "rep": x.to_json(), "certificate": certificate(x, cfg)}
        _emit(args, _json_text(_payload(args, body)))
        return EX_OK

    if args.command == "verify":
        alpha = _alpha(args, quiver)
        report = run_suite(quiver, alpha, cfg)
        if args.format == "table":
            _emit(args, report.to_table())
        else:
            _emit(args, _json_text(_payload(args, report.to_json())))
        return report.exit_code()

    if args.command == "basis":
        alpha = _alpha(args, quiver)
        con = alpha.concentrated()
        if con is None:
            raise UsageError("basis needs a dimension concentrated at one vertex")
        v, n = con
        result = one_vertex_basis(quiver, v, n, cfg, primes)
        body = {
            "order": [list(w) for w in result.order],
            "basis": [{"w": list(w), "expr": result.basis[w].to_json()} for w in result.order],
            "matrix": [
                {"row": list(r), "col": list(c), "value": str(val)}
                for (r, c), val in sorted(result.matrix.items())
            ],
        }
        _emit(args, _json_text(_payload(args, body)))
        return EX_OK

    if args.command == "distinguish":
        alpha = _alpha(args, quiver)
        result = distinguished_functions(quiver, alpha, cfg, primes)
        keys = [e.label.key() for e in result.catalog.entries]
        identity = all(
            result.matrix[(r, c)] == (Fraction(1) if r == c else Fraction(0))
            for r in keys
            for c in keys
        )
        body = {
            "components": [e.to_json() for e in result.catalog.entries],
            "functions": [
                {"label": k, "expr": result.functions[k].to_json()} for k in keys
            ],
            "matrix": [
                {"row": r, "col": c, "value": str(result.matrix[(r, c)])}
                for r in keys
                for c in keys
            ],
            "identity": identity,
        }
        _emit(args, _json_text(_payload(args, body)))
        return EX_OK if identity else EX_HARDFAIL

    if args.command == "euler":
        try:
            with open(args.rep) as fh:
                doc = json.load(fh)
        except OSError as e:
            raise FileNotFoundError(f"cannot read rep file {args.rep}: {e}") from e
        x = Rep.from_json(quiver, doc)
        word = []
        for bit in args.word.split(","):
            v, _, l = bit.partition(":")
            word.append((v, int(l)))
        chi = evaluate_word(tuple(word), x, primes)
        body = {"chi": chi, "word": [[v, l] for v, l in word]}
        _emit(args, _json_text(_payload(args, body)))
        return EX_OK

    raise UsageError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
