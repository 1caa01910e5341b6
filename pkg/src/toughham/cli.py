"""Command-line front end.

Every command prints one JSON document with the fields query, parameters,
result, witness, transcript and timing.  Exit codes: 0 success, 1 semantic
failure (the witness is in the document), 2 unreadable input, 3 resource
limit reached.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__
from .cograph_ham import jung_ham_connected, jung_ham_cycle, jung_ham_path
from .cycles import main_hamiltonian
from .errors import HypothesisViolation, Infeasible, InstanceTooLarge, MalformedInput, SearchExhausted
from .freeness import InducedWitness, find_induced_p4, find_induced_p4_union_p1
from .generators import FAMILIES, FamilySpec, generate
from .graph import Graph, count_components, first_bad_edge, members
from .graphio import ParseError, dump_document, load_document, read_graph, read_vertex_set, write_graph
from .metrics import (DEFAULT_CAP, INF, format_rational, parse_rational, scattering, toughness,
                      toughness_wrt, wrt_violation)
from .oracles import ORACLE_CAP, oracle_ham_cycle, oracle_scattering, oracle_toughness

OK, FAILED, UNREADABLE, RESOURCE = 0, 1, 2, 3


class Outcome(Exception):
    """Carries the exit code and result of a command that ended early."""

    def __init__(self, code: int, result: dict, witness=None):
        super().__init__(result.get("message", ""))
        self.code = code
        self.result = result
        self.witness = witness


def _rational(text: str) -> Fraction:
    value = parse_rational(text)
    if not isinstance(value, Fraction):
        raise argparse.ArgumentTypeError(f"{text!r} is not a finite rational")
    return value


def _count(text: str) -> int:
    try:
        value = _rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if value.denominator != 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a whole number")
    return int(value)


def _t_flag(text: str) -> Fraction:
    try:
        return _rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _graph_info(g: Graph) -> dict:
    return {"n": g.n, "m": g.num_edges()}


# ---------------------------------------------------------------------------
# commands: each returns (exit code, result, witness, transcript)


def cmd_free_check(args, g: Graph):
    finder = find_induced_p4 if args.pattern == "p4" else find_induced_p4_union_p1
    found = finder(g)
    if found is None:
        return OK, {"free": True, "pattern": args.pattern}, None, []
    return FAILED, {"free": False, "pattern": args.pattern}, found.to_dict(), []


def cmd_toughness(args, g: Graph):
    if args.wrt is not None:
        s = read_vertex_set(args.wrt, g.n)
        cert = toughness_wrt(g, s, args.cap)
        result = {"value": format_rational(cert.value), "wrt": s}
        if args.t is not None:
            found = wrt_violation(g, s, args.t, args.cap)
            result["t"] = format_rational(args.t)
            result["tough_enough"] = found is None
    else:
        cert = toughness(g, args.cap)
        result = {"value": format_rational(cert.value)}
        if args.t is not None:
            result["t"] = format_rational(args.t)
            result["tough_enough"] = cert.value == INF or cert.value >= args.t
    witness = None
    if cert.witness is not None:
        witness = {"cutset": members(cert.witness), "components": cert.components}
    code = FAILED if result.get("tough_enough") is False else OK
    return code, result, witness, []


def cmd_scattering(args, g: Graph):
    cert = scattering(g, args.cap)
    value = cert.value if cert.witness is not None else str(cert.value)
    witness = None
    if cert.witness is not None:
        witness = {"set": members(cert.witness), "components": cert.components}
    return OK, {"value": value}, witness, []


def _check_cycle(g: Graph, cycle: list[int]) -> dict:
    bad = first_bad_edge(g, cycle, closed=True)
    if len(cycle) != g.n or len(set(cycle)) != g.n or bad is not None:
        raise Outcome(FAILED, {"status": "unverified", "message": "cycle failed its edge check",
                               "bad_edge": list(bad) if bad else None})
    if g.n <= ORACLE_CAP:
        if not oracle_ham_cycle(g):
            raise Outcome(FAILED, {"status": "unverified",
                                   "message": "oracle disagrees: graph has no Hamiltonian cycle"})
        return {"method": "oracle"}
    return {"method": "edges"}


def cmd_hamcycle(args, g: Graph):
    found = main_hamiltonian(g, t=args.t, assume_tough=args.assume_tough, cap=args.cap)
    result = {"status": "hamiltonian", "cycle": found.cycle, "length": len(found.cycle)}
    if args.verify:
        result["verified"] = _check_cycle(g, found.cycle)
    return OK, result, None, found.transcript


def cmd_cograph_ham(args, g: Graph):
    if args.connect is not None:
        u, v = args.connect
        path = jung_ham_connected(g, u, v)
        return OK, {"mode": "connect", "path": path, "ends": [u, v]}, None, []
    if args.cycle:
        return OK, {"mode": "cycle", "cycle": jung_ham_cycle(g)}, None, []
    return OK, {"mode": "path", "path": jung_ham_path(g)}, None, []


_FAMILY_PARAMS = {
    "complete": ("n",),
    "complete-multipartite": ("sizes",),
    "clique-join": ("s", "parts"),
    "random-cograph": ("n", "p_join"),
    "clique-join-cograph": ("s", "h", "p_join"),
}
_LISTS = ("sizes", "parts")


def _family_params(family: str, values: list[str]) -> dict:
    names = _FAMILY_PARAMS[family]
    if len(values) > len(names):
        raise MalformedInput(f"{family} takes at most {len(names)} parameters ({', '.join(names)})")
    params = {}
    for name, raw in zip(names, values):
        params[name] = [x for x in raw.split(",") if x.strip()] if name in _LISTS else raw
    return params


def cmd_gen(args, _g=None):
    spec = FamilySpec(args.family, _family_params(args.family, args.params), args.seed)
    made = generate(spec)
    cert = made.toughness
    write_graph(args.output, made.graph, f"{spec.describe()}\ntoughness {format_rational(cert.value)}")
    result = {"file": args.output, "graph": _graph_info(made.graph),
              "toughness": format_rational(cert.value), "method": made.method,
              "cotree": str(made.tree)}
    witness = None
    if cert.witness is not None:
        witness = {"cutset": members(cert.witness), "components": cert.components}
    return OK, result, witness, []


# ---------------------------------------------------------------------------
# verify


def _check_witness(g: Graph, witness) -> list[str]:
    """Re-derive whatever the witness asserts; returns failure messages."""
    if not isinstance(witness, dict):
        return []
    problems = []
    if "pattern" in witness and "vertices" in witness:
        if not InducedWitness(witness["pattern"], tuple(witness["vertices"])).verify(g):
            problems.append(f"vertices {witness['vertices']} do not induce {witness['pattern']}")
    if "cutset" in witness and "components" in witness:
        c = count_components(g, witness["cutset"])
        if c != witness["components"]:
            problems.append(f"cutset leaves {c} components, certificate says {witness['components']}")
        elif "ratio" in witness and c and parse_rational(witness["ratio"]) != Fraction(len(witness["cutset"]), c):
            problems.append("ratio does not match the cutset")
    if "set" in witness and "components" in witness:
        c = count_components(g, witness["set"])
        if c != witness["components"]:
            problems.append(f"set leaves {c} components, certificate says {witness['components']}")
    if "independent_set" in witness:
        ind = witness["independent_set"]
        for i, a in enumerate(ind):
            for b in ind[i + 1:]:
                if g.has_edge(a, b):
                    problems.append(f"independent set contains edge {a}-{b}")
    if "vertex" in witness and "degree" in witness:
        if g.degree(witness["vertex"]) != witness["degree"]:
            problems.append(f"vertex {witness['vertex']} has degree {g.degree(witness['vertex'])}")
    return problems


def _verify_value(g: Graph, doc: dict) -> list[str]:
    query, result, witness = doc["query"], doc["result"], doc.get("witness")
    problems = []
    if query == "toughness":
        value = parse_rational(result["value"])
        if witness is None:
            if "wrt" not in result and not g.is_complete():
                problems.append("value inf claimed for a non-complete graph")
        else:
            c = count_components(g, witness["cutset"])
            if c < 2 or Fraction(len(witness["cutset"]), c) != value:
                problems.append("witness cutset does not attain the stated value")
            if "wrt" not in result and g.n <= 12 and oracle_toughness(g).answer != value:
                problems.append("oracle finds a different toughness")
    elif query == "scattering":
        if witness is None:
            if not g.is_complete():
                problems.append("-inf claimed for a non-complete graph")
        else:
            c = count_components(g, witness["set"])
            if c < 2 or c - len(witness["set"]) != result["value"]:
                problems.append("witness set does not attain the stated value")
            if g.n <= 12 and oracle_scattering(g).answer != result["value"]:
                problems.append("oracle finds a different scattering number")
    return problems


def _verify_walk(g: Graph, result: dict) -> list[str]:
    if "cycle" in result:
        seq, closed, label = result["cycle"], True, "cycle"
    elif "path" in result:
        seq, closed, label = result["path"], False, "path"
    else:
        return []
    problems = []
    if sorted(seq) != list(range(g.n)):
        problems.append(f"{label} does not visit every vertex exactly once")
    bad = first_bad_edge(g, seq, closed)
    if bad is not None:
        problems.insert(0, f"first bad edge {bad[0]}-{bad[1]}")
    ends = result.get("ends")
    if ends and seq and [seq[0], seq[-1]] != ends:
        problems.append(f"path does not run from {ends[0]} to {ends[1]}")
    return problems


def cmd_verify(args, g: Graph):
    doc = load_document(args.certificate)
    info = doc.get("parameters", {}).get("graph")
    if info and info != _graph_info(g):
        raise Outcome(FAILED, {"valid": False, "problems": ["certificate was issued for a different graph"]})
    problems = _verify_walk(g, doc["result"]) + _verify_value(g, doc) + _check_witness(g, doc.get("witness"))
    if problems:
        bad = first_bad_edge(g, doc["result"].get("cycle", doc["result"].get("path", [])),
                             "cycle" in doc["result"])
        result = {"valid": False, "problems": problems}
        if bad is not None:
            result["bad_edge"] = list(bad)
        return FAILED, result, None, []
    return OK, {"valid": True, "checked": doc["query"]}, None, []


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toughham", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free-check", help="look for an induced P4 (or P4+P1)")
    p.add_argument("file")
    p.add_argument("--pattern", choices=("p4", "p4+p1"), default="p4")
    p.set_defaults(run=cmd_free_check)

    p = sub.add_parser("toughness", help="exact toughness with a witness cutset")
    p.add_argument("file")
    p.add_argument("--wrt", metavar="S-FILE", help="toughness relative to this vertex set")
    p.add_argument("--t", type=_t_flag, help="also report whether the value reaches t")
    p.add_argument("--cap", type=_count, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_toughness)

    p = sub.add_parser("scattering", help="exact scattering number with a witness set")
    p.add_argument("file")
    p.add_argument("--cap", type=_count, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_scattering)

    p = sub.add_parser("hamcycle", help="Hamiltonian cycle of a tough (P4+P1)-free graph")
    p.add_argument("file")
    p.add_argument("--t", type=_t_flag, default=Fraction(23))
    how = p.add_mutually_exclusive_group()
    how.add_argument("--assume-tough", action="store_true", help="trust that the graph is t-tough")
    how.add_argument("--certify", action="store_true", help="compute the toughness first (default)")
    p.add_argument("--verify", action="store_true", help="re-check the cycle before printing it")
    p.add_argument("--cap", type=_count, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_hamcycle)

    p = sub.add_parser("cograph-ham", help="Hamiltonian path/cycle of a P4-free graph")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--path", action="store_true", help="Hamiltonian path (default)")
    mode.add_argument("--cycle", action="store_true")
    mode.add_argument("--connect", nargs=2, type=_count, metavar=("U", "V"))
    p.set_defaults(run=cmd_cograph_ham)

    p = sub.add_parser("gen", help="write a generated instance to a graph file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", nargs="*",
                   help="; ".join(f"{f}: {' '.join(ps)}" for f, ps in _FAMILY_PARAMS.items()))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=_count, default=0)
    p.set_defaults(run=cmd_gen, graph_free=True)

    p = sub.add_parser("verify", help="re-check a certificate printed by another command")
    p.add_argument("file", metavar="graph-file")
    p.add_argument("certificate", metavar="certificate-file")
    p.set_defaults(run=cmd_verify)
    return parser


def _parameters(args, g: Graph | None) -> dict:
    skip = {"run", "command", "graph_free"}
    params = {k: (format_rational(v) if isinstance(v, Fraction) else v)
              for k, v in vars(args).items() if k not in skip}
    if g is not None:
        params["graph"] = _graph_info(g)
    return params


def _failure(exc) -> Outcome:
    if isinstance(exc, HypothesisViolation):
        return Outcome(FAILED, {"status": "violation", "kind": exc.kind, "claim": exc.claim,
                                "message": str(exc)}, exc.witness)
    if isinstance(exc, Infeasible):
        cert = exc.certificate
        if hasattr(cert, "witness") and hasattr(cert, "value"):
            witness = {"set": members(cert.witness) if cert.witness is not None else None,
                       "components": cert.components, "value": cert.value}
        else:
            witness = cert
        return Outcome(FAILED, {"status": "infeasible", "message": str(exc)}, witness)
    if isinstance(exc, (InstanceTooLarge, SearchExhausted)):
        return Outcome(RESOURCE, {"status": "resource", "message": str(exc)})
    return Outcome(FAILED, {"status": "malformed", "message": str(exc)}, exc.witness)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    g = None
    transcript = []
    try:
        if not getattr(args, "graph_free", False):
            g = read_graph(args.file)
        code, result, witness, transcript = args.run(args, g)
    except ParseError as exc:
        print(f"toughham: {exc}" + (f" (line {exc.line})" if exc.line else ""), file=sys.stderr)
        return UNREADABLE
    except Outcome as exc:
        code, result, witness = exc.code, exc.result, exc.witness
    except (HypothesisViolation, Infeasible, InstanceTooLarge, SearchExhausted, MalformedInput) as exc:
        fail = _failure(exc)
        code, result, witness = fail.code, fail.result, fail.witness
    doc = {"query": args.command, "parameters": _parameters(args, g), "result": result,
           "witness": witness, "transcript": transcript,
           "timing": {"seconds": round(time.perf_counter() - started, 6)}}
    print(dump_document(doc), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
