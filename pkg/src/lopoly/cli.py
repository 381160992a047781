"""Command line front end.

Every command emits either short text lines or JSON records (one per line)
of the form ``{"command", "input_digest", "outcome", "payload"}``.  Exit
status: 0 ok, 1 violation / unsatisfiable, 2 usage error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Callable

from . import aip as aip_mod
from .hypergraph import InstanceFormatError, format_instance, gadget_reduce, parse_instance
from .lemmas import lemma_suite
from .minors import ChainError, MinorChain, chain_condition, random_chain
from .polymorph import BudgetExhausted, Filter, enumerate_polymorphisms, is_polymorphism
from .recolour import DEFAULT_PURE_BUDGET, saturate
from .sets import TableFormatError, decode_table, encode_table
from .structure import reconfig_graph, verify_structure_theorem
from .templates import parse_target, z_check

OK, VIOLATION, USAGE, BUDGET = "ok", "violation", "usage", "budget"
EXIT = {OK: 0, VIOLATION: 1, USAGE: 2, BUDGET: 3}
_SEVERITY = {OK: 0, VIOLATION: 1, BUDGET: 2}


class UsageError(Exception):
    pass


class Run:
    """Buffers records and text for one invocation."""

    def __init__(self, command: str, fmt: str, digest: str):
        self.command = command
        self.fmt = fmt
        self.digest = digest
        self.lines: list[str] = []
        self.outcome = OK

    def emit(self, outcome: str, payload: dict, text: list[str] | str) -> None:
        if _SEVERITY[outcome] > _SEVERITY[self.outcome]:
            self.outcome = outcome
        if self.fmt == "records":
            rec = {"command": self.command, "input_digest": self.digest,
                   "outcome": outcome, "payload": payload}
            self.lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
        else:
            self.lines.extend([text] if isinstance(text, str) else text)


def parse_budget(text: str) -> int:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be a number, got {text!r}") from None
    if value < 1 or value != int(value):
        raise argparse.ArgumentTypeError(f"budget must be a positive integer, got {text!r}")
    return int(value)


def _read_input(args) -> str:
    if args.input is None:
        raise UsageError(f"{args.command} needs --input FILE")
    return Path(args.input).read_text()


def _table(args):
    return decode_table(_read_input(args))


def _target(args):
    return parse_target(args.target)


# command handlers


def cmd_check(args, run: Run) -> None:
    f = _table(args)
    target = _target(args)
    w = is_polymorphism(f, target)
    payload = {"table": encode_table(f), "target": args.target, "verdict": w.verdict}
    text = f"polymorphism of (LO2, {args.target}): {str(w.verdict).lower()}"
    if not w.verdict:
        payload["violation"] = list(w.violation)
        payload["values"] = list(w.values)
        text += f"\nviolating partition X={w.violation.x} Y={w.violation.y} Z={w.violation.z} values={w.values}"
    run.emit(OK if w.verdict else VIOLATION, payload, text)


def cmd_enum(args, run: Run) -> None:
    if args.arity is None:
        raise UsageError("enum needs --arity")
    target = _target(args)
    count = 0
    outcome = OK
    try:
        for f in enumerate_polymorphisms(args.arity, target, args.filter, budget=args.budget):
            count += 1
            run.emit(OK, {"table": encode_table(f)}, f.digits())
    except BudgetExhausted:
        outcome = BUDGET
    summary = {"arity": args.arity, "target": args.target, "filter": args.filter,
               "count": count, "complete": outcome == OK}
    note = "" if outcome == OK else " (budget exhausted, partial)"
    run.emit(outcome, summary, f"count {count}{note}")


def cmd_saturate(args, run: Run) -> None:
    f = _table(args)
    if f.ell != 3 or not is_polymorphism(f):
        run.emit(VIOLATION, {"table": encode_table(f), "error": "input is not an (LO2, LO3) polymorphism"},
                 "input is not an (LO2, LO3) polymorphism")
        return
    res = saturate(f)
    text = [f"steps {len(res.path)}", f"pure {str(res.pure).lower()}", res.result.digits()]
    run.emit(OK, res.to_record(), text)


def cmd_structure(args, run: Run) -> None:
    f = _table(args)
    if f.ell != 3 or not is_polymorphism(f):
        run.emit(VIOLATION, {"table": encode_table(f), "error": "input is not an (LO2, LO3) polymorphism"},
                 "input is not an (LO2, LO3) polymorphism")
        return
    budget = args.budget or DEFAULT_PURE_BUDGET
    v = verify_structure_theorem(f, budget)
    outcome = BUDGET if v.unknown else OK if v.conforms else VIOLATION
    payload = {"table": encode_table(f), **v.to_record()}
    conforms = "unknown" if v.unknown else str(v.conforms).lower()
    run.emit(outcome, payload, [f"conforms {conforms}", f"dictating {v.dictating}", v.detail])


def cmd_reconfig(args, run: Run) -> None:
    if args.arity is None:
        raise UsageError("reconfig needs --arity")
    try:
        rep = reconfig_graph(args.arity, args.budget)
    except BudgetExhausted:
        run.emit(BUDGET, {"arity": args.arity}, "budget exhausted")
        return
    outcome = OK if rep.unique_projection_per_component else VIOLATION
    text = [f"vertices {rep.vertex_count}, removed {rep.removed}, components {len(rep.components)}"]
    text += [f"  size {c.size} projections {list(c.projections)}" for c in rep.components]
    run.emit(outcome, rep.to_record(), text)


def _chain_payload(chain: MinorChain, seed: int | None) -> tuple[str, dict, str]:
    res = chain_condition(chain)
    payload = {"chain": chain.to_dict(), "witness": list(res.witness) if res.witness else None,
               "selections": [list(s.variables) for s in res.selections],
               "branches": [s.branch.value for s in res.selections]}
    if seed is not None:
        payload["seed"] = seed
    label = "" if seed is None else f"seed {seed}: "
    if res.violation:
        return VIOLATION, payload, f"{label}VIOLATION"
    return OK, payload, f"{label}witness {res.witness}"


def cmd_chain_check(args, run: Run) -> None:
    if args.input is not None:
        chain = MinorChain.from_json(_read_input(args))
        run.emit(*_chain_payload(chain, None))
        return
    top = args.arity or 9
    seed = args.seed or 0
    for s in range(seed, seed + args.count):
        run.emit(*_chain_payload(random_chain(s, 1, top, args.length), s))


def cmd_lemmas(args, run: Run) -> None:
    suite = lemma_suite(args.arity or 4, args.budget, seed=args.seed or 0)
    for r in suite.to_records():
        outcome = VIOLATION if r["violations"] else OK if r["complete"] else BUDGET
        status = "ok" if outcome == OK else outcome
        run.emit(outcome, r, f"{r['lemma']:32s} n={r['arity']} checked={r['checked']} "
                             f"violations={r['violations']} {status}")


def cmd_reduce(args, run: Run) -> None:
    h = gadget_reduce(parse_instance(_read_input(args)))
    text = format_instance(h)
    run.emit(OK, {"instance": text}, text.rstrip("\n").split("\n"))


def cmd_aip(args, run: Run) -> None:
    h = parse_instance(_read_input(args))
    a = aip_mod.aip_pipeline(h)
    if a is aip_mod.NO_INTEGER_SOLUTION:
        run.emit(VIOLATION, {"result": "NO_INTEGER_SOLUTION"}, "NO_INTEGER_SOLUTION")
    else:
        run.emit(OK, {"assignment": list(a)}, " ".join(["a", *map(str, a)]))


def cmd_zcheck(args, run: Run) -> None:
    v = z_check(_target(args))
    payload = {"target": args.target, "verdict": v.verdict.value, "edges": [list(e) for e in v.edges],
               "loops": list(v.loops), "cycle": list(v.cycle)}
    outcome = OK if v.verdict.value == "NO_HOM_TO_Z_TARGET" else VIOLATION
    run.emit(outcome, payload, v.verdict.value)


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "enum": cmd_enum,
    "saturate": cmd_saturate,
    "structure": cmd_structure,
    "reconfig": cmd_reconfig,
    "chain-check": cmd_chain_check,
    "lemmas": cmd_lemmas,
    "reduce": cmd_reduce,
    "aip": cmd_aip,
    "zcheck": cmd_zcheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity", type=int)
    common.add_argument("--target", default="lo3")
    common.add_argument("--filter", choices=[f.value for f in Filter], default="all")
    common.add_argument("--budget", type=parse_budget)
    common.add_argument("--seed", type=int)
    common.add_argument("--input")
    common.add_argument("--output")
    common.add_argument("--format", choices=("text", "records"), default="text")
    parser = argparse.ArgumentParser(prog="lopoly", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "chain-check":
            p.add_argument("--count", type=int, default=1)
            p.add_argument("--length", type=int, default=4)
    return parser


def _digest(args, raw: str | None) -> str:
    if raw is not None:
        data = raw.encode()
    else:
        keys = ("command", "arity", "target", "filter", "budget", "seed", "count", "length")
        data = json.dumps({k: getattr(args, k, None) for k in keys}, sort_keys=True).encode()
    return hashlib.sha256(data).hexdigest()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        raw = Path(args.input).read_text() if args.input is not None else None
        run = Run(args.command, args.format, _digest(args, raw))
        COMMANDS[args.command](args, run)
    except (UsageError, OSError, ValueError, TableFormatError, InstanceFormatError, ChainError) as e:
        parser.print_usage(sys.stderr)
        print(f"lopoly {args.command}: error: {e}", file=sys.stderr)
        return EXIT[USAGE]
    out = "".join(line + "\n" for line in run.lines)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT[run.outcome]


if __name__ == "__main__":
    sys.exit(main())
