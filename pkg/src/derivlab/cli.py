"""Command-line front end.

Commands::

    derivlab check --input task.json [--out report.json]
    derivlab reproduce EXAMPLE_ID [--n K] [--char P] [--seed S] [--depth D] [--out FILE]
    derivlab classify --algebra algebra.json [--seed S] [--samples N] [--depth D] [--out FILE]

Exit codes: 0 certified or all claims pass, 1 refuted or a claim failed,
2 inconclusive at the bound, 3 bad input (the message names the field).

A task file is one JSON object::

    {
      "schema": "derivlab/1",
      "task": "deg",
      "ring": {"coefficients": "Q", "variables": ["x", "y"]},
      "derivations": {"D": {"x": "1"}, "E": {"y": "x"}},
      "set": ["D", "E"],
      "element": "x^2*y"
    }

Task kinds and the keys they read:

=============== ==============================================================
deg             ``set``, ``element``
nil-membership  ``set``, ``element``, optional ``schedule``
                ``{"preperiod": [...], "period": [...]}`` of actor names
set-lnd         ``set``, optional ``generators`` (element list)
lie-unil        ``set``, ``element``
classify        ``algebra``, optional ``generators``, ``samples``
ad-index        ``D``, ``E`` (derivation names)
fg-nilpotency   ``set`` (derivation names)
reproduce       ``example``, optional ``params``
=============== ==============================================================

Actors come from ``derivations`` (name to ``{variable: expression}``) or
``operators`` (name to a list of matrix rows).  Elements are polynomial
expressions for derivations and coordinate lists for operators.  Optional
``depth_bound`` (default 16), ``dim_bound`` (default 64) and ``seed``
(default 0) are echoed in every report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Dict, List, Optional

from .constructions import EXAMPLE_IDS, UnknownExampleError, build, run_claims
from .corealg import Field, ParseError, Ring, parse_poly
from .derfinite import DerivationLieAlgebra, ad_nilpotence_index, fg_lie_nilpotency
from .derivcalc import Derivation
from .nilcert import (
    DEFAULT_DEPTH_BOUND,
    DEFAULT_DIM_BOUND,
    OperatorSet,
    Verdict,
    deg_delta,
    nil_membership,
    set_locally_nilpotent,
    unil_lie_membership,
)
from .nilclass import classify
from .opalg import InvalidAlgebraError, LinearOperator, StructureAlgebra

SCHEMA = "derivlab/1"
TASK_KINDS = ("deg", "nil-membership", "set-lnd", "lie-unil", "classify", "ad-index", "fg-nilpotency", "reproduce")

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
_VERDICT_EXIT = {Verdict.CERTIFIED: EXIT_OK, Verdict.REFUTED: EXIT_REFUTED, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class InputError(Exception):
    """Invalid task input; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _require(spec: dict, key: str):
    if key not in spec:
        raise InputError(key, "missing")
    return spec[key]


def _positive(spec: dict, key: str, default: int) -> int:
    value = spec.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise InputError(key, f"must be a positive integer, got {value!r}")
    return value


class _Context:
    """Parsed ring, actors and bounds of one task."""

    def __init__(self, spec: dict):
        if not isinstance(spec, dict):
            raise InputError("task", "top level must be a JSON object")
        schema = spec.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise InputError("schema", f"unsupported schema {schema!r}")
        self.spec = spec
        self.depth = _positive(spec, "depth_bound", DEFAULT_DEPTH_BOUND)
        self.dim = _positive(spec, "dim_bound", DEFAULT_DIM_BOUND)
        seed = spec.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise InputError("seed", "must be an integer")
        self.seed = seed
        ring_spec = spec.get("ring", {})
        try:
            self.field = Field.from_json(ring_spec.get("coefficients", "Q"))
        except (ValueError, TypeError) as exc:
            raise InputError("ring.coefficients", str(exc)) from None
        self.ring: Optional[Ring] = None
        if "variables" in ring_spec:
            names = ring_spec["variables"]
            if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
                raise InputError("ring.variables", "must be a list of names")
            try:
                self.ring = Ring(self.field, tuple(names))
            except ValueError as exc:
                raise InputError("ring.variables", str(exc)) from None
        self.actors: Dict[str, object] = {}
        for name, data in spec.get("derivations", {}).items():
            if self.ring is None:
                raise InputError("ring.variables", "derivations need a ring")
            if not isinstance(data, dict):
                raise InputError(f"derivations.{name}", "must map variables to expressions")
            try:
                self.actors[name] = Derivation.from_json(data, self.ring)
            except ParseError as exc:
                raise InputError(f"derivations.{name}", str(exc)) from None
            except KeyError as exc:
                raise InputError(f"derivations.{name}", str(exc.args[0])) from None
        for name, rows in spec.get("operators", {}).items():
            if name in self.actors:
                raise InputError(f"operators.{name}", "name already used")
            try:
                rows = [[self.field(str(c)) for c in row] for row in rows]
                self.actors[name] = LinearOperator.from_rows(rows, self.field)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InputError(f"operators.{name}", str(exc)) from None

    def actor_set(self, key: str = "set") -> OperatorSet:
        names = _require(self.spec, key)
        if not isinstance(names, list):
            raise InputError(key, "must be a list of actor names")
        for n in names:
            if n not in self.actors:
                raise InputError(key, f"unknown actor {n!r}")
        try:
            return OperatorSet([self.actors[n] for n in names], names)
        except (TypeError, ValueError) as exc:
            raise InputError(key, str(exc)) from None

    def element(self, delta: OperatorSet, value, key: str):
        if delta.kind == "operator" or (delta.kind == "empty" and self.ring is None):
            if not isinstance(value, list):
                raise InputError(key, "must be a list of coordinates")
            dim = delta.actors[0].dim if delta.actors else len(value)
            if len(value) != dim:
                raise InputError(key, f"must be a list of {dim} coordinates")
            try:
                return tuple(self.field(str(c)) for c in value)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(key, str(exc)) from None
        if not isinstance(value, str):
            raise InputError(key, "must be a polynomial expression")
        try:
            return parse_poly(value, self.ring)
        except ParseError as exc:
            raise InputError(key, str(exc)) from None

    def schedule(self, delta: OperatorSet):
        sched = self.spec.get("schedule")
        if sched is None:
            return None
        out = []
        for part in ("preperiod", "period"):
            names = sched.get(part, [])
            try:
                out.append([delta.names.index(n) for n in names])
            except ValueError:
                raise InputError(f"schedule.{part}", f"unknown actor in {names!r}") from None
        if not out[1]:
            raise InputError("schedule.period", "must be nonempty")
        return tuple(out)


def run_task(spec: dict):
    """Execute a parsed task; returns ``(report, exit_code, summary)``."""
    ctx = _Context(spec)
    kind = _require(spec, "task")
    if kind not in TASK_KINDS:
        raise InputError("task", f"unknown task kind {kind!r}")
    report = {"schema": SCHEMA, "task": kind,
              "bounds": {"depth_bound": ctx.depth, "dim_bound": ctx.dim}, "seed": ctx.seed}

    if kind in ("deg", "nil-membership", "lie-unil"):
        delta = ctx.actor_set()
        x = ctx.element(delta, _require(spec, "element"), "element")
        if kind == "deg":
            cert = deg_delta(delta, x, ctx.depth)
        elif kind == "nil-membership":
            cert = nil_membership(delta, x, ctx.depth, ctx.schedule(delta))
        else:
            cert = unil_lie_membership(delta, x, ctx.depth)
        report["result"] = cert.to_json()
        summary = f"{kind}: {cert.verdict.value}"
        if cert.certified and report["result"]["degree"] is not None:
            summary += f" (degree {report['result']['degree']})"
        return report, _VERDICT_EXIT[cert.verdict], summary

    if kind == "set-lnd":
        delta = ctx.actor_set()
        gens = spec.get("generators")
        if gens is not None:
            gens = [ctx.element(delta, g, f"generators[{i}]") for i, g in enumerate(gens)]
        cert = set_locally_nilpotent(delta, gens, ctx.depth)
        report["result"] = cert.to_json()
        return report, _VERDICT_EXIT[cert.verdict], f"set-lnd: {cert.verdict.value}"

    if kind == "classify":
        A = _algebra(_require(spec, "algebra"), "algebra")
        gens = spec.get("generators")
        samples = _positive(spec, "samples", 20)
        if gens is not None:
            if not isinstance(gens, list) or any(not isinstance(g, list) or len(g) != A.dim for g in gens):
                raise InputError("generators", f"must be a list of length-{A.dim} coordinate lists")
            try:
                gens = [[A.field(str(c)) for c in g] for g in gens]
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InputError("generators", str(exc)) from None
        rep = classify(A, gens, samples, ctx.depth, ctx.seed)
        report["result"] = rep.to_json()
        code = EXIT_OK if rep.all_certified() else EXIT_REFUTED
        verdicts = " ".join(f"{k}={v.value}" for k, v in rep.verdicts.items())
        return report, code, f"classify: {verdicts}"

    if kind == "ad-index":
        D, E = (_derivation(ctx, spec, key) for key in ("D", "E"))
        cert = ad_nilpotence_index(D, E, ctx.depth)
        report["result"] = cert.to_json()
        return report, _VERDICT_EXIT[cert.verdict], f"ad-index: {cert.verdict.value} (index {cert.degree})"

    if kind == "fg-nilpotency":
        delta = ctx.actor_set()
        if delta.kind != "derivation":
            raise InputError("set", "must name derivations")
        rep = fg_lie_nilpotency(DerivationLieAlgebra(delta.actors), ctx.dim, ctx.depth)
        report["result"] = rep.to_json()
        return report, _VERDICT_EXIT[rep.verdict], f"fg-nilpotency: {rep.verdict.value} (dim {rep.dim})"

    # reproduce
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise InputError("params", "must be an object")
    return _reproduce(_require(spec, "example"), params, ctx.depth, report)


def _derivation(ctx: _Context, spec: dict, key: str) -> Derivation:
    name = _require(spec, key)
    actor = ctx.actors.get(name)
    if not isinstance(actor, Derivation):
        raise InputError(key, f"{name!r} is not a derivation")
    return actor


def _algebra(data, key: str) -> StructureAlgebra:
    try:
        return StructureAlgebra.from_json(data)
    except (InvalidAlgebraError, KeyError, ValueError, TypeError) as exc:
        raise InputError(key, str(exc)) from None


def _reproduce(example: str, params: dict, depth: int, report: dict):
    try:
        inst = build(example, **params)
    except UnknownExampleError:
        raise InputError("example", f"unknown example {example!r}; known: {', '.join(EXAMPLE_IDS)}") from None
    except ValueError as exc:
        raise InputError("params", str(exc)) from None
    result = run_claims(inst, depth)
    report["result"] = result
    failed = [c["name"] for c in result["claims"] if c["status"] != "pass"]
    if failed:
        return report, EXIT_REFUTED, f"{example}: failed claims: {'; '.join(failed)}"
    return report, EXIT_OK, f"{example}: {len(result['claims'])} claims pass"


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".derivlab-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(report: dict, summary: str, out: Optional[str]) -> None:
    text = dumps(report)
    if out:
        write_atomic(out, text)
        print(summary)
    else:
        # the report owns stdout; keep the summary off it
        sys.stdout.write(text)
        print(summary, file=sys.stderr)


def _load_json(path: str, field: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(field, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(field, f"invalid JSON at line {exc.lineno} column {exc.colno}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derivlab", description="Certify local nilpotence of derivations and operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a JSON task file")
    p.add_argument("--input", required=True)
    p.add_argument("--out")

    p = sub.add_parser("reproduce", help="check the claims of a built-in example")
    p.add_argument("example")
    p.add_argument("--n", type=int)
    p.add_argument("--char", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH_BOUND)
    p.add_argument("--out")

    p = sub.add_parser("classify", help="classify a structure-constant algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH_BOUND)
    p.add_argument("--out")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            report, code, summary = run_task(_load_json(args.input, "input"))
        elif args.command == "reproduce":
            if args.depth < 1:
                raise InputError("depth", "must be a positive integer")
            params = {"n": args.n, "char": args.char, "seed": args.seed}
            params = {k: v for k, v in params.items() if v is not None}
            report = {"schema": SCHEMA, "task": "reproduce",
                      "bounds": {"depth_bound": args.depth, "dim_bound": DEFAULT_DIM_BOUND},
                      "seed": args.seed if args.seed is not None else 0}
            report, code, summary = _reproduce(args.example, params, args.depth, report)
        else:
            spec = {"task": "classify", "algebra": _load_json(args.algebra, "algebra"), "seed": args.seed,
                    "samples": args.samples, "depth_bound": args.depth}
            report, code, summary = run_task(spec)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, summary, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
