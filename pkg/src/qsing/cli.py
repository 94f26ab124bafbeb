"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (non-simple settings, invalid
representation types, exhausted budgets), 2 on malformed input or usage.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__
from ._kernels import BudgetExceeded
from .compactify import MINUS_TO_PLUS, PLUS_TO_MINUS, acyclify, control_check
from .formats import (
    FormatError,
    dumps,
    int_list,
    load_json,
    quiver_from_json,
    quiver_to_json,
    reptype_from_json,
    setting_from_json,
    setting_to_dot,
    setting_to_json,
)
from .local import RepType, direct_successors, local_quiver
from .moduli import (
    MODULAR_GENERATORS,
    MODULAR_QUIVER,
    MODULAR_THETA,
    GeneratorSet,
    ModuliProblem,
    analyze,
    controlling_quiver,
)
from .names import setting_for
from .poset import TypePoset, build_poset, default_budget
from .quiver import QuiverError, quotient_dim
from .reduction import is_smooth_type, reduction_trace, type_of_setting

log = logging.getLogger("qsing")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_dot(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _type_report(t, source=None, d: int | None = None, poset: TypePoset | None = None) -> dict:
    doc = {
        "name": poset.name(t) if poset is not None else t.name,
        "hash": t.hash,
        "dim": t.dim,
        "smooth": is_smooth_type(t),
        "setting": setting_to_json(t.setting),
    }
    if source is not None:
        doc["quotient_dim"] = quotient_dim(source)
        doc["affine_factor"] = d
    return doc


def cmd_reduce(args) -> int:
    s = setting_from_json(load_json(args.setting))
    trace = reduction_trace(s)
    lines = []
    for step in trace:
        lines.append(
            dumps(
                {
                    "kind": step.kind.value,
                    "vertex": step.vertex,
                    "before": setting_to_json(step.before),
                    "after": setting_to_json(step.after),
                    "chi_gain": step.chi_gain,
                }
            )
        )
    t = type_of_setting(trace[-1].after if trace else s)
    d = sum(step.chi_gain for step in trace)
    lines.append(dumps({"type": _type_report(t, s, d)}))
    _emit("".join(lines), args.out)
    _write_dot(setting_to_dot(t.setting, "type"), args.dot)
    return 0


def cmd_type(args) -> int:
    s = setting_from_json(load_json(args.setting))
    trace = reduction_trace(s)
    t = type_of_setting(trace[-1].after if trace else s)
    d = sum(step.chi_gain for step in trace)
    doc = _type_report(t, s, d)
    if args.successors:
        doc["successors"] = sorted(
            (_type_report(u) for u in direct_successors(t)), key=lambda x: (x["dim"], x["hash"])
        )
    _emit(dumps(doc), args.out)
    _write_dot(setting_to_dot(t.setting, "type"), args.dot)
    return 0


def cmd_local_quiver(args) -> int:
    q = quiver_from_json(load_json(args.quiver))
    sigma = RepType(q, reptype_from_json(load_json(args.reptype)))
    s = local_quiver(sigma)
    _emit(dumps(setting_to_json(s)), args.out)
    _write_dot(setting_to_dot(s, "local"), args.dot)
    return 0


def _budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


def _load_poset(path: str | None) -> TypePoset:
    if path and Path(path).exists():
        return TypePoset.from_json(load_json(path))
    return TypePoset()


def cmd_poset(args) -> int:
    p = build_poset(args.max_dim, budget=_budget(args), threads=args.threads)
    _emit(dumps(p.to_json()), args.out)
    _write_dot(p.to_dot(), args.dot)
    return 0


def problem_from_json(doc: Any) -> ModuliProblem:
    if not isinstance(doc, dict):
        raise FormatError("problem must be a JSON object")
    missing = [k for k in ("quiver", "theta", "alpha", "generators") if k not in doc]
    if missing:
        raise FormatError(f"problem is missing {', '.join(missing)}")
    q = quiver_from_json(doc["quiver"])
    theta = int_list(doc["theta"], "theta")
    if not isinstance(doc["generators"], list):
        raise FormatError("generators must be a list of integer lists")
    gens = [int_list(g, "generator") for g in doc["generators"]]
    return ModuliProblem(q, theta, int_list(doc["alpha"], "alpha"), GeneratorSet(gens, theta))


def problem_to_json(p: ModuliProblem) -> dict:
    return {
        "quiver": quiver_to_json(p.quiver),
        "theta": [int(x) for x in p.theta],
        "alpha": [int(x) for x in p.alpha],
        "generators": [[int(x) for x in g] for g in p.generators.gens],
    }


def cmd_analyze(args) -> int:
    p = problem_from_json(load_json(args.problem))
    poset = _load_poset(args.poset)
    report = analyze(p, poset)
    doc = report.to_json()
    doc["q_theta"] = quiver_to_json(p.q_theta)
    _emit(dumps(doc), args.out)
    if report.stable_exists:
        _write_dot(report.to_dot(), args.dot)
    if args.poset:
        Path(args.poset).write_text(dumps(poset.to_json()), encoding="utf-8")
    return 0


def cmd_compactify(args) -> int:
    q = quiver_from_json(load_json(args.quiver))
    theta = args.theta if args.theta is not None else [0] * q.n
    plan = acyclify(
        q,
        theta,
        vertices=args.vertices,
        weights=args.weights,
        dim_bound=args.dim_bound,
        loop_orientation=args.loop_orientation,
    )
    doc = plan.to_json()
    doc["loop_orientation"] = args.loop_orientation
    if args.check is not None:
        doc["control_failures"] = [list(a) for a in control_check(plan, args.check)]
    _emit(dumps(doc), args.out)
    _write_dot(setting_to_dot(plan.result, "split"), args.dot)
    return 1 if doc.get("control_failures") else 0


def cmd_export_dot(args) -> int:
    doc = load_json(args.file)
    if isinstance(doc, dict) and "nodes" in doc and "edges" in doc:
        text = TypePoset.from_json(doc).to_dot(include_trivial=args.trivial)
    elif isinstance(doc, dict) and "quiver" in doc and ("dim" in doc or "alpha" in doc) and "theta" not in doc:
        text = setting_to_dot(setting_from_json(doc))
    elif isinstance(doc, dict) and "vertices" in doc:
        text = setting_to_dot(quiver_from_json(doc))
    elif isinstance(doc, dict) and "generators" in doc:
        text = analyze(problem_from_json(doc)).to_dot()
    else:
        raise FormatError("cannot tell what kind of document this is")
    _emit(text, args.out)
    return 0


def seed_documents() -> dict[str, Any]:
    """Ready-made instance files: settings, problems, quivers and rep types."""
    docs: dict[str, Any] = {}
    for name, fname in [
        ("3_c", "conifold"),
        ("4_2", "d4_4_2"),
        ("4_3a", "d4_4_3a"),
        ("4_3b", "d4_4_3b"),
        ("5_1", "two_loop_dim2"),
    ]:
        docs[f"{fname}.json"] = setting_to_json(setting_for(name))
    docs["two_loop_dim2_quiver.json"] = quiver_to_json(setting_for("5_1").quiver)
    docs["two_loop_dim2_reptype.json"] = {"factors": [[1, [1]], [1, [1]]]}
    gens = GeneratorSet(MODULAR_GENERATORS, MODULAR_THETA)
    for alpha in [(3, 3, 2, 2, 2), (4, 2, 2, 2, 2)]:
        p = ModuliProblem(MODULAR_QUIVER, MODULAR_THETA, alpha, gens)
        docs["modular_" + "".join(map(str, alpha[:3])) + ".json"] = problem_to_json(p)
    docs["modular_quiver.json"] = quiver_to_json(MODULAR_QUIVER)
    docs["conifold_witness_reptype.json"] = {"factors": [[1, [2, 1, 1, 1, 1]], [1, [1, 2, 1, 1, 1]]]}
    hexagon = controlling_quiver(gens, MODULAR_QUIVER)
    docs["hexagon.json"] = quiver_to_json(hexagon)
    plan = acyclify(hexagon, [0] * 6, vertices=[1, 3, 5], weights=[1, 2, 3])
    docs["q_prime.json"] = quiver_to_json(plan.result)
    return docs


def cmd_seed_examples(args) -> int:
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in sorted(seed_documents().items()):
        (out / name).write_text(dumps(doc), encoding="utf-8")
        print(out / name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qsing", description="Singularity types of quiver quotients and quiver moduli.")
    ap.add_argument("--version", action="version", version=f"qsing {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str, dot: bool = True):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write the main output here instead of stdout")
        if dot:
            sp.add_argument("--dot", metavar="PATH", help="also write a Graphviz diagram to PATH")
        return sp

    sp = add("reduce", cmd_reduce, "reduction trace (JSON lines) and the resulting type")
    sp.add_argument("setting")

    sp = add("type", cmd_type, "type of a simple setting")
    sp.add_argument("setting")
    sp.add_argument("--successors", action="store_true", help="include direct successors of the type")

    sp = add("local-quiver", cmd_local_quiver, "local quiver setting of a representation type")
    sp.add_argument("quiver")
    sp.add_argument("reptype")

    sp = add("poset", cmd_poset, "all types up to a quotient dimension, with successor edges")
    sp.add_argument("--max-dim", type=int, required=True)
    sp.add_argument("--budget", type=int, help="search node cap (default: $QSING_BUDGET or 2e9)")
    sp.add_argument("--threads", type=int, default=1)

    sp = add("analyze", cmd_analyze, "singularity types of a quiver moduli space")
    sp.add_argument("problem")
    sp.add_argument("--poset", metavar="PATH", help="type cache; read if present, updated afterwards")

    sp = add("compactify", cmd_compactify, "split vertices until the quiver is acyclic")
    sp.add_argument("quiver")
    sp.add_argument("--theta", type=_ints, help="stability (default: all zero)")
    sp.add_argument("--weights", type=_ints, help="splitting weight per step")
    sp.add_argument("--vertices", type=_ints, help="vertices to split, in order (default: greedy)")
    sp.add_argument("--dim-bound", type=int, default=4, help="total dimension bound behind the default weights")
    sp.add_argument("--loop-orientation", choices=[MINUS_TO_PLUS, PLUS_TO_MINUS], default=MINUS_TO_PLUS)
    sp.add_argument("--check", type=int, metavar="N", help="run the control check up to total dimension N")

    sp = add("export-dot", cmd_export_dot, "Graphviz rendering of a quiver, setting, poset or problem", dot=False)
    sp.add_argument("file")
    sp.add_argument("--trivial", action="store_true", help="keep edges into the point in poset diagrams")

    sp = sub.add_parser("seed-examples", help="write the reference instances as JSON files")
    sp.set_defaults(fn=cmd_seed_examples)
    sp.add_argument("directory", nargs="?", default="instances")
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except (FormatError, OSError, KeyError, TypeError) as exc:
        print(f"qsing: malformed input: {exc}", file=sys.stderr)
        return 2
    except (QuiverError, BudgetExceeded) as exc:
        print(f"qsing: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
