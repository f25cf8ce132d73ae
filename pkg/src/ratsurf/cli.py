"""Command-line front end.

Every subcommand except ``prop41`` reads one JSON document (a file path, or
``-`` for standard input) and writes either text or a structured JSON
document carrying ``schema_version``.

Exit codes: 0 success, 1 a verification ran and failed, 2 invalid input,
3 internal disagreement between a closed form and its lattice check.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from .birational import LinearSystemSpec, TransformChain, apply_chain
from .classifier import ConicBundleInput, classify
from .errors import InvalidInputError, OracleDisagreement, RatSurfError
from .linsys import PlaneSystem, expected_dim, genus
from .modp import DEFAULT_MODULUS
from .oracle import verify_expected
from .pipeline import TheoremChaseSpec, replay_prop41, theorem_chase, verify_pencil_property
from .schema import SCHEMA_VERSION, validate

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

DEFAULT_SEED = 1
DEFAULT_SEED_COUNT = 3


def _read_payload(path: str | None) -> Any:
    if path is None:
        raise InvalidInputError("this subcommand needs an input document (path or '-')")
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _seeds(args) -> list[int]:
    return list(range(args.seed, args.seed + args.seeds))


def _envelope(command: str, result: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "result": result}


# each handler returns (exit status, structured result, text rendering)


def _cmd_apply(args, payload):
    start = LinearSystemSpec.from_dict(payload["system"])
    chain = TransformChain.from_list(payload["chain"])
    final, trace = apply_chain(chain, start)
    ok = all(t.ok for t in trace)
    result = {
        "system": final.to_dict(),
        "chain": chain.to_list(),
        "certificates_ok": ok,
        "flags": sorted({f for t in trace for f in t.flags}),
    }
    lines = []
    if args.trace:
        result["trace"] = [t.to_dict() for t in trace]
        for t in trace:
            mark = "ok" if t.ok else "FAILED"
            lines.append(f"{t.index}: {t.step.describe()}  {t.before} -> {t.after}  [{mark}]")
    lines.append(str(final))
    return (EXIT_OK if ok else EXIT_FAILED), result, "\n".join(lines)


def _cmd_dim(args, payload):
    s = PlaneSystem.from_dict(payload["system"])
    v = expected_dim(s)
    return EXIT_OK, {"system": s.to_dict(), "expected_dim": v}, str(v)


def _cmd_genus(args, payload):
    s = PlaneSystem.from_dict(payload["system"])
    v = genus(s)
    return EXIT_OK, {"system": s.to_dict(), "genus": v}, str(v)


def _cmd_oracle(args, payload):
    s = PlaneSystem.from_dict(payload["system"])
    report = verify_expected(s, _seeds(args), args.modulus)
    actual = ", ".join(f"seed {k}: {v}" for k, v in report.actual.items())
    text = f"expected {report.expected}; actual {actual}; {report.verdict}"
    return EXIT_OK, report.to_dict(), text


def _cmd_prop41(args, payload):
    table = replay_prop41()
    return EXIT_OK, table.to_dict(), table.render().rstrip("\n")


def _cmd_chase(args, payload):
    spec = TheoremChaseSpec(**{k: v for k, v in payload.items() if k != "schema_version"})
    report = theorem_chase(spec)
    result = report.to_dict(include_trace=args.trace)
    ok = report.ok
    lines = [
        f"e={spec.e} delta={spec.delta} a={spec.a}",
        f"plane target            {report.target}",
        f"before de Jonquieres    {report.intermediate_plane}",
        f"d on S (lattice)        {report.lattice_d}",
        f"d on S (reference)      {report.reference_d}",
        f"d on S (ref. formula)   {report.reference_formula_d}",
    ]
    for name, good in report.certificates.items():
        lines.append(f"  {name}: {'ok' if good else 'FAILED'}")
    if args.trace:
        for t in report.trace:
            lines.append(f"  {t.index}: {t.step.describe()}  -> {t.after}")
    if args.verify_pencil:
        pencil = verify_pencil_property(spec.e, spec.delta, _seeds(args), args.modulus)
        result["pencil"] = pencil.to_dict()
        lines.append(f"pencil check: {pencil.status}")
        ok = ok and pencil.status == "pass"
    return (EXIT_OK if ok else EXIT_FAILED), result, "\n".join(lines)


def _cmd_classify(args, payload):
    cb = ConicBundleInput.from_dict(payload)
    v = classify(cb)
    result = {"input": cb.to_dict(), **v.to_dict()}
    lines = [v.outcome.label] + [f"  - {j}" for j in v.justification]
    lines += [f"  caveat: {c}" for c in v.caveats]
    return EXIT_OK, result, "\n".join(lines)


COMMANDS = {
    "apply": (_cmd_apply, "apply a chain of birational steps to a linear system"),
    "dim": (_cmd_dim, "expected dimension of a plane system"),
    "genus": (_cmd_genus, "arithmetic genus of a plane system"),
    "oracle": (_cmd_oracle, "actual vs expected dimension at random general points"),
    "prop41": (_cmd_prop41, "replay the degree 4 -> 11 Cremona table"),
    "chase": (_cmd_chase, "class chase from the plane pencil back to the conic bundle"),
    "classify": (_cmd_classify, "rationality verdict from discriminant data"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="first sampling seed")
    common.add_argument("--seeds", type=int, default=DEFAULT_SEED_COUNT, help="number of seeds")
    common.add_argument("--modulus", type=int, default=DEFAULT_MODULUS, help="prime field size")
    common.add_argument("--trace", action="store_true", help="include per-step traces")

    parser = argparse.ArgumentParser(prog="ratsurf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name != "prop41":
            p.add_argument("input", nargs="?", help="JSON document, or '-' for stdin")
        if name == "chase":
            p.add_argument("--verify-pencil", action="store_true", help="also check the pencil numerically")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seeds < 1:
        parser.error("--seeds must be at least 1")
    handler, _ = COMMANDS[args.command]
    try:
        payload = None
        if args.command != "prop41":
            payload = _read_payload(args.input)
            validate(args.command, payload)
        status, result, text = handler(args, payload)
    except OracleDisagreement as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (RatSurfError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "structured":
        json.dump(_envelope(args.command, result), sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
