"""``sandpile-lab`` command line.

Exit status: 0 on success, 1 on a domain error (bad graph, unstable
configuration, bound exceeded, failed selftest), 2 on a usage error
(unknown flag, missing argument, unreadable or malformed input).  Output
is produced only after the command has fully succeeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bipartite as bp
from . import operators as op
from .acceptance import run_all
from .complete_graph import CompleteConfig, phi_kn, psi_kn
from .enumeration import (
    DEFAULT_CYCLIC_BOUND,
    DEFAULT_ENUM_BOUND,
    count_report,
    enumerate_pattern,
    enumerate_polyominoes,
    pattern_report,
    verify_cyclic_lemma,
)
from .graph_core import (
    Graph,
    SandpileError,
    check_config,
    is_parking,
    is_recurrent,
    is_stable,
)
from .paths import FramedPair, Polyomino, config_to_framed_pair, is_polyomino, jump
from .render import render

RENDER_HELP = """\
ASCII pictures put the origin at the bottom-left, one text row per unit of
height.  The upper path is drawn with '|' and '_', the lower path of a pair
with ':' and '.', polyomino cells with '#', stable intersections with '*'
and the frame anchor with 'o', all inside a box border.  SVG output draws
one unit square per cell; PNG output goes through matplotlib."""

CONFIG_KEYS = {"threads": int, "enum_bound": int, "cyclic_bound": int, "subset_limit": int}
DEFAULTS = {"threads": 1, "enum_bound": DEFAULT_ENUM_BOUND,
            "cyclic_bound": DEFAULT_CYCLIC_BOUND, "subset_limit": op.MAX_SUBSET_SCAN}


class UsageError(Exception):
    """Bad invocation or unreadable input; maps to exit status 2."""


def read_config_file(path: Optional[str]) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    settings = dict(DEFAULTS)
    if not path:
        return settings
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected one of {sorted(CONFIG_KEYS)} = value")
        try:
            settings[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: {key} needs an integer") from None
    return settings


def load_json(arg: str):
    """Inline JSON if it looks like JSON, otherwise a UTF-8 file path."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {arg[:40]!r}: {exc}") from None


def _config_heights(data) -> list:
    if isinstance(data, dict):
        if "heights" not in data:
            raise UsageError("configuration JSON needs a 'heights' list")
        return data["heights"]
    return data


def _bipartite(data) -> bp.SortedBipartiteConfig:
    try:
        return bp.SortedBipartiteConfig.from_json(data)
    except (KeyError, TypeError):
        raise UsageError("bipartite JSON needs m, n, nonsink and sinkpart") from None


def _pair(args) -> FramedPair:
    if args.bipartite:
        return config_to_framed_pair(_bipartite(load_json(args.bipartite)))
    if not (args.upper and args.lower):
        raise UsageError("give --upper and --lower, or --bipartite")
    return FramedPair(args.upper, args.lower, tuple(args.anchor))


def _graph(arg: str) -> Graph:
    try:
        return Graph.from_json(load_json(arg))
    except (KeyError, TypeError):
        raise UsageError("graph JSON needs 'vertices' and 'edges'") from None


# --- subcommands ---------------------------------------------------------

def cmd_classify(args, settings):
    g = _graph(args.graph)
    c = check_config(g, _config_heights(load_json(args.config)))
    stable = is_stable(g, c)
    return {"stable": stable,
            "recurrent": stable and is_recurrent(g, c),
            "parking": stable and is_parking(g, c)}


def cmd_apply(args, settings):
    limit = settings["subset_limit"]
    if args.bipartite:
        c = _bipartite(load_json(args.bipartite))
        ops = {"phi": bp.phi_kmn, "psi": bp.psi_kmn, "rho-beta": bp.rho_beta,
               "recurrent": bp.recurrent_of, "parking": bp.parking_of}
        if args.op not in ops:
            raise UsageError(f"--op {args.op} is not available with --bipartite")
        out = ops[args.op](c)
        return {"op": args.op, "input": c.to_json(), "output": out.to_json(),
                "grade": bp.grade_kmn(out) if out.is_stable() else None}
    if not (args.graph and args.config):
        raise UsageError("apply needs --graph and --config, or --bipartite")
    g = _graph(args.graph)
    c = check_config(g, _config_heights(load_json(args.config)))
    if args.op in ("psi", "phi"):
        step = op.psi_step if args.op == "psi" else op.phi_step
        out, subset = step(g, c, limit)
        return {"op": args.op, "input": list(c), "output": list(out),
                "subset": list(subset) if subset else None}
    if args.op == "beta":
        return {"op": "beta", "input": list(c), "output": list(op.beta(g, c))}
    if args.op in ("recurrent", "parking"):
        fixed, steps = op.normalize(g, c, args.op, limit=limit)
        return {"op": args.op, "input": list(c), "output": list(fixed), "steps": steps}
    raise UsageError(f"unknown --op {args.op}")


def cmd_walk(args, settings):
    if args.bipartite:
        c = _bipartite(load_json(args.bipartite))
        walk = bp.walk_class(c)
        return {"walk": [dict(x.to_json(), grade=bp.grade_kmn(x)) for x in walk],
                "index_of_input": walk.index(c)}
    if not (args.graph and args.config):
        raise UsageError("walk needs --bipartite, or --graph and --config")
    g = _graph(args.graph)
    c = check_config(g, _config_heights(load_json(args.config)))
    fixed, steps, path = op.normalize(g, c, args.target, trajectory=True,
                                      limit=settings["subset_limit"])
    return {"target": args.target, "steps": steps, "trajectory": [list(x) for x in path]}


def cmd_frame(args, settings):
    fp = _pair(args)
    if args.jump:
        fp = jump(fp, args.jump)
    a, b = fp.measure(fp.anchor)
    return {"upper": fp.upper, "lower": fp.lower, "anchor": list(fp.anchor),
            "m": fp.m, "n": fp.n,
            "stable_intersections": [list(p) for p in fp.stable_intersections(not args.raw)],
            "is_stable_intersection": fp.is_stable_intersection(fp.anchor),
            "measure": {"nonsink": list(a), "sinkpart": list(b)},
            "pos": [fp.pos(fp.anchor[0] + i) for i in range(fp.m)]}


def cmd_cyclic_verify(args, settings):
    bound = args.bound or settings["cyclic_bound"]
    threads = args.threads or settings["threads"]
    if args.pair:
        r = verify_cyclic_lemma(args.m, args.n, "sample", bound=bound, threads=threads,
                                at=[tuple(args.pair)])
    elif args.sample:
        r = verify_cyclic_lemma(args.m, args.n, "sample", sample=args.sample, bound=bound,
                                threads=threads)
    else:
        r = verify_cyclic_lemma(args.m, args.n, bound=bound, threads=threads)
    return r.to_json()


def cmd_enumerate(args, settings):
    bound = args.bound or settings["enum_bound"]
    if args.pattern:
        polys = enumerate_pattern(args.pattern, bound)
    elif args.m and args.n:
        polys = enumerate_polyominoes(args.m, args.n, bound, args.threads or settings["threads"])
    else:
        raise UsageError("enumerate needs --m and --n, or --pattern")
    return {"count": len(polys), "polyominoes": [p.to_json() for p in polys]}


def cmd_count(args, settings):
    bound = args.bound or settings["enum_bound"]
    if args.kind:
        if not (args.a and args.b and args.c):
            raise UsageError("pattern counts need --a, --b and --c")
        return pattern_report(args.a, args.b, args.c, args.kind, args.brute, bound).to_json()
    if not (args.m and args.n):
        raise UsageError("count needs --m and --n, or --kind with --a --b --c")
    return count_report(args.m, args.n, args.brute, bound,
                        args.threads or settings["threads"]).to_json()


def cmd_kn(args, settings):
    v = CompleteConfig(args.n, args.heights)
    fn = phi_kn if args.op == "phi" else psi_kn
    result, k, path = fn(v, engine=args.engine, trajectory=True)
    return {"op": args.op, "n": args.n, "input": list(v.heights),
            "output": list(result.heights), "k": k,
            "lifted": [{"nonsink": list(a), "sinkpart": list(b)} for a, b in path]}


def cmd_render(args, settings):
    if args.polyomino:
        up, lo = args.polyomino
        if not is_polyomino(up, lo):
            raise SandpileError(f"({up}, {lo}) is not a parallelogram polyomino")
        obj = Polyomino(up, lo)
    else:
        obj = _pair(args)
    if args.format == "png" and not args.out:
        raise UsageError("--format png needs --out")
    text = render(obj, args.format, Path(args.out) if args.out else None)
    if args.format == "png":
        return {"written": text}
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        return {"written": args.out}
    return text


def cmd_selftest(args, settings):
    lines = []
    outcomes = run_all(args.only or None, echo=lines.append)
    failed = [o.number for o in outcomes if not o.passed]
    lines.append(f"{len(outcomes) - len(failed)}/{len(outcomes)} criteria passed")
    return _SelftestResult("\n".join(lines) + "\n", bool(failed))


class _SelftestResult:
    def __init__(self, text: str, failed: bool):
        self.text, self.failed = text, failed


# --- parser --------------------------------------------------------------

def _anchor(text: str) -> tuple[int, int]:
    try:
        x, y = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("anchor must look like X,Y") from None
    return x, y


def _heights(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("heights must be comma-separated integers") from None


def _pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--upper", help="upper word u'' over N/E")
    p.add_argument("--lower", help="lower word l' over N/E")
    p.add_argument("--anchor", type=_anchor, default=(0, 0), help="frame anchor X,Y")
    p.add_argument("--bipartite", help="sorted K_{m,n} configuration (JSON or file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sandpile-lab",
        description="Sandpile operators, path-pair frames and polyomino enumeration.",
        epilog=RENDER_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config-file", help="key=value settings (threads, enum_bound, "
                        "cyclic_bound, subset_limit); flags override it")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--format", choices=["json", "table"], default="json",
                        help="report format (default json)")

    p = sub.add_parser("classify", parents=[report], help="stable / recurrent / parking flags")
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True)

    p = sub.add_parser("apply", parents=[report], help="apply psi, phi, beta or normalise")
    p.add_argument("--graph")
    p.add_argument("--config")
    p.add_argument("--bipartite")
    p.add_argument("--op", required=True,
                   choices=["psi", "phi", "beta", "rho-beta", "recurrent", "parking"])

    p = sub.add_parser("walk", parents=[report],
                       help="class walk on K_{m,n}, or a normalising trajectory")
    p.add_argument("--bipartite")
    p.add_argument("--graph")
    p.add_argument("--config")
    p.add_argument("--target", choices=[op.RECURRENT, op.PARKING], default=op.PARKING)

    p = sub.add_parser("frame", parents=[report], help="measure a framed path pair")
    _pair_flags(p)
    p.add_argument("--jump", choices=["next", "prev"])
    p.add_argument("--raw", action="store_true", help="unnormalised intersection coordinates")

    p = sub.add_parser("cyclic-verify", parents=[report], help="check the cyclic partition")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sample", type=int)
    p.add_argument("--pair", nargs=2, metavar=("UPPER", "LOWER"))
    p.add_argument("--bound", type=int)
    p.add_argument("--threads", type=int)

    p = sub.add_parser("enumerate", parents=[report], help="list parallelogram polyominoes")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--pattern", help="fixed lower path")
    p.add_argument("--bound", type=int)
    p.add_argument("--threads", type=int)

    p = sub.add_parser("count", parents=[report],
                       help="polyomino counts, formula and optionally brute force")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--kind", choices=["simple", "double"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--brute", action="store_true")
    p.add_argument("--bound", type=int)
    p.add_argument("--threads", type=int)

    p = sub.add_parser("kn", parents=[report], help="phi or psi on K_n through K_{n,n}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--heights", type=_heights, required=True, help="e.g. 0,2,2,3")
    p.add_argument("--op", choices=["phi", "psi"], default="phi")
    p.add_argument("--engine", choices=["sorted", "general"], default="sorted")

    p = sub.add_parser("render", help="ASCII, SVG or PNG picture", description=RENDER_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _pair_flags(p)
    p.add_argument("--polyomino", nargs=2, metavar=("UPPER", "LOWER"))
    p.add_argument("--format", choices=["ascii", "svg", "png"], default="ascii")
    p.add_argument("--out", help="output file (required for png)")

    p = sub.add_parser("selftest", parents=[report], help="run the acceptance criteria")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    return parser


COMMANDS = {
    "classify": cmd_classify, "apply": cmd_apply, "walk": cmd_walk, "frame": cmd_frame,
    "cyclic-verify": cmd_cyclic_verify, "enumerate": cmd_enumerate, "count": cmd_count,
    "kn": cmd_kn, "render": cmd_render, "selftest": cmd_selftest,
}


def _nested(value) -> bool:
    return isinstance(value, dict) or (
        isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value))


def _table(data, indent: str = "") -> str:
    """Aligned key/value lines; nested containers are indented below their key."""
    if isinstance(data, dict):
        out = []
        for key in sorted(data):
            value = data[key]
            if _nested(value):
                out.append(f"{indent}{key}:\n" + _table(value, indent + "  "))
            else:
                out.append(f"{indent}{key:<24} {json.dumps(value, sort_keys=True)}\n")
        return "".join(out)
    if isinstance(data, list):
        rows = [_table(x, indent) if isinstance(x, dict)
                else f"{indent}{json.dumps(x, sort_keys=True)}\n" for x in data]
        sep = f"{indent}--\n" if any(isinstance(x, dict) for x in data) else ""
        return sep.join(rows)
    return f"{indent}{data}\n"


def emit(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if fmt == "table":
        return _table(result)
    return json.dumps(result, sort_keys=True) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        # SANDPILE_LAB_THREADS is applied where workers are spawned
        settings = read_config_file(args.config_file)
        result = COMMANDS[args.command](args, settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sandpile-lab: error: {exc}", file=sys.stderr)
        return 2
    except (SandpileError, RuntimeError, ArithmeticError) as exc:
        print(f"sandpile-lab: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, _SelftestResult):
        sys.stdout.write(result.text)
        return 1 if result.failed else 0
    sys.stdout.write(emit(result, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
