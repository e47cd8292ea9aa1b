"""Command-line interface: ``crn-tdi {check,fan,embed,verify,refute,simulate} FILE``."""
from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .dynamics import IntegrationError, RateSchedule, integrate, persistence_report, write_csv
from .egraph import is_reversible, is_weakly_reversible
from .endotactic import is_endotactic
from .fan import DegenerateSources, Fan, build_fan
from .parser import ParseError, load_network, parse_number
from .tdi import (IsEndotactic, NotEndotactic, SamplerConfig, Target, embedding_parameters,
                  refute_embedding, verify_embedding)

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_PRECONDITION = 0, 2, 64, 65
DEFAULT_EPSILON = 0.5


class CliError(Exception):
    def __init__(self, message: str, code: int, payload: dict | None = None):
        super().__init__(message)
        self.code, self.payload = code, payload


def _epsilon(text: str) -> float:
    try:
        eps = float(parse_number(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < eps <= 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1]")
    return eps


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _fan_spec(text: str):
    """``"a,b;c,d@delta"``: semicolon-separated hyperplane normals and a radius."""
    try:
        normals, _, delta = text.rpartition("@")
        rows = [tuple(parse_number(x) for x in row.split(",")) for row in normals.split(";")]
        return rows, float(parse_number(delta))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad fan spec {text!r}; expected 'a,b;c,d@delta'") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help=".crn network file")
    common.add_argument("--epsilon", type=_epsilon, default=None,
                        help="rate bound: eps <= k <= 1/eps (default: file value or 0.5)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_positive_int, default=1000)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", default=None, help="write the report here")

    p = argparse.ArgumentParser(prog="crn-tdi", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="reversibility and endotacticity")
    sub.add_parser("fan", parents=[common], help="fan of source differences")
    sub.add_parser("embed", parents=[common], help="embedding parameters K0 and delta")
    sub.add_parser("verify", parents=[common], help="sample the embedding")
    r = sub.add_parser("refute", parents=[common], help="counterexample certificate")
    r.add_argument("--delta", type=float, action="append", default=[],
                   help="target: the graph's own fan with this delta (repeatable)")
    r.add_argument("--fan", type=_fan_spec, action="append", default=[],
                   help="target: custom fan 'a,b;c,d@delta' (repeatable)")
    s = sub.add_parser("simulate", parents=[common], help="integrate and write CSV")
    s.add_argument("--t-end", type=float, default=10.0)
    s.add_argument("--rtol", type=float, default=1e-8)
    s.add_argument("--x0", default=None, help="comma-separated initial state (default all ones)")
    s.add_argument("--rates", default=None, help="comma-separated constant rates (default all ones)")
    s.add_argument("--schedule", choices=("constant", "sinusoid"), default="constant")
    s.add_argument("--points", type=_positive_int, default=200)
    s.add_argument("--report", default=None, help="write the persistence report here")
    return p


def _load(path):
    try:
        return load_network(path)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_PARSE) from None


def _resolve_epsilon(args, doc) -> float:
    if args.epsilon is not None:
        return args.epsilon
    return float(doc.epsilon) if doc.epsilon is not None else DEFAULT_EPSILON


def _witness_payload(G, verdict) -> dict:
    w = verdict.witness
    s, t = G.edge_coords()[w.violating_edge]
    return {"endotactic": False,
            "witness_direction": [str(Fraction(x)) for x in w.direction],
            "violating_edge": w.violating_edge,
            "violating_edge_coords": [[str(c) for c in s], [str(c) for c in t]]}


def cmd_check(args) -> tuple[dict, int]:
    G = _load(args.path).graph
    verdict = is_endotactic(G)
    out = {"reversible": is_reversible(G), "weakly_reversible": is_weakly_reversible(G),
           "endotactic": verdict.endotactic}
    if not verdict.endotactic:
        out.update(_witness_payload(G, verdict))
    return out, EXIT_OK


def cmd_fan(args) -> tuple[dict, int]:
    G = _load(args.path).graph
    if not G.sources:
        raise CliError("graph has no edges; the fan is trivial", EXIT_PRECONDITION)
    fan = build_fan(G.sources)
    return {"dim": fan.dim, "dim_J": fan.J.dim, "n_normals": len(fan.normals),
            "n_chambers": len(fan.chambers),
            "n_rays": len(fan.rays) if fan.J.dim else 0,
            "normals": [list(n) for n in fan.normals]}, EXIT_OK


def _params(G, eps):
    try:
        return embedding_parameters(G, eps)
    except NotEndotactic as exc:
        raise CliError(str(exc), EXIT_PRECONDITION,
                       _witness_payload(G, is_endotactic(G))) from None
    except DegenerateSources as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from None


def cmd_embed(args) -> tuple[dict, int]:
    doc = _load(args.path)
    params = _params(doc.graph, _resolve_epsilon(args, doc))
    return params.to_json(), EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    doc = _load(args.path)
    eps = _resolve_epsilon(args, doc)
    params = _params(doc.graph, eps)
    report = verify_embedding(doc.graph, eps, SamplerConfig(args.samples, args.seed),
                              params=params)
    return report.to_json(), EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_refute(args) -> tuple[dict, int]:
    G = _load(args.path).graph
    targets = []
    own = None
    for d in args.delta:
        own = own or build_fan(G.sources or [tuple([0] * G.dim)])
        targets.append(Target(own, d))
    for normals, d in args.fan:
        if any(len(n) != G.dim for n in normals):
            raise CliError(f"fan normals must have {G.dim} coordinates", EXIT_PARSE)
        targets.append(Target(Fan.from_normals(normals, G.dim), d))
    if not targets:
        targets.append(Target(build_fan(G.sources or [tuple([0] * G.dim)]), 1.0))
    if any(not t.delta > 0 for t in targets):
        raise CliError("target delta must be positive", EXIT_PARSE)
    try:
        cert = refute_embedding(G, targets)
    except IsEndotactic as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from None
    return cert.to_json(), EXIT_OK


def cmd_simulate(args) -> tuple[str, int, dict]:
    doc = _load(args.path)
    G = doc.graph
    eps = _resolve_epsilon(args, doc)
    x0 = np.ones(G.dim) if args.x0 is None else np.array([float(v) for v in args.x0.split(",")])
    if args.schedule == "sinusoid":
        schedule = RateSchedule.random_sinusoids(G.n_edges, eps, np.random.default_rng(args.seed))
    else:
        rates = [1.0] * G.n_edges if args.rates is None else [float(v) for v in args.rates.split(",")]
        if len(rates) != G.n_edges:
            raise CliError(f"expected {G.n_edges} rates, got {len(rates)}", EXIT_PARSE)
        try:
            schedule = RateSchedule.constant(rates, eps if args.epsilon is not None else None)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PARSE) from None
    try:
        traj = integrate(G, schedule, x0, args.t_end, rtol=args.rtol, n_report=args.points)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from None
    except IntegrationError as exc:
        raise CliError(str(exc), EXIT_VIOLATION,
                       {"t": exc.t, "last_state": [float(v) for v in exc.state]}) from None
    buf = io.StringIO()
    write_csv(traj, buf)
    return buf.getvalue(), EXIT_OK, persistence_report(traj, G).to_json()


COMMANDS = {"check": cmd_check, "fan": cmd_fan, "embed": cmd_embed, "verify": cmd_verify,
            "refute": cmd_refute}


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    return "".join(f"{k}: {json.dumps(v)}\n" for k, v in sorted(payload.items()))


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            csv_text, code, report = cmd_simulate(args)
            _emit(csv_text, args.output)
            rendered = _render(report, args.format)
            if args.report:
                _emit(rendered, args.report)
            else:
                (sys.stdout if args.output else sys.stderr).write(rendered)
            return code
        payload, code = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"crn-tdi: {exc}", file=sys.stderr)
        if exc.payload:
            sys.stderr.write(_render(exc.payload, args.format))
        return exc.code
    _emit(_render(payload, args.format), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
