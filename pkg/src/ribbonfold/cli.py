"""Command-line surface for the folding pipeline.

Machine-readable JSON goes to stdout, human summaries to stderr, and
identical inputs with identical flags produce byte-identical outputs.
Exit codes: 0 success, 1 parse or validation problem, 2 precondition
failure (reducible crossing, split diagram), 3 internal check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .bound import (
    block_counts,
    comparison_bounds,
    compute_bound,
    report_json,
    rib_upper_bound,
    run_pipeline,
    theoretical_bound,
)
from .expand import BgdFormatError, build_bgd, parse_bgd
from .ingest import (
    LabelError,
    PdSyntaxError,
    TableError,
    detect_nugatory,
    load_table,
    parse_pd,
)
from .invariants import bgd_to_pd, jones_fingerprint
from .leveling import (
    FlipChoice,
    NoLevelingFound,
    PreconditionViolated,
    apply_flip,
    check_leveling,
    find_leveling,
    optimize_flips,
)
from .layout import (
    LayoutConfig,
    LayoutOverlap,
    build_pile,
    core_diagram,
    emit_svg,
    ribbon_length,
    schedule_json,
)
from .model import (
    PORTION_KINDS,
    BinaryGridDiagram,
    BoundReport,
    PlanarDiagram,
    RibbonfoldError,
    RoutingError,
    check_bgd,
    validate_diagram,
)
from .rewrite import RewriteError, normalize

__all__ = ["run_command", "main"]


class _Exit(Exception):
    """Carries an exit code and a message for stderr."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _Exit(1, f"{self.prog}: {message}")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2))


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------


def _detect_format(path: str, override: Optional[str]) -> str:
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix == ".pd":
        return "pd"
    if suffix == ".bgd":
        return "bgd"
    raise _Exit(1, f"cannot detect input format of {path!r}; pass --format")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Exit(1, f"cannot read {path}: {e}") from e


def _gate_diagram(d: PlanarDiagram) -> None:
    """Map structural problems to exit codes before the pipeline runs."""
    issues = validate_diagram(d)
    split = [i for i in issues if i.code == "Disconnected"]
    if split:
        raise _Exit(2, "split diagram: " + "; ".join(i.message for i in split))
    if issues:
        raise _Exit(
            1, "; ".join(f"{i.code}: {i.message}" for i in issues)
        )
    if d.crossings:
        bad = detect_nugatory(d)
        if bad:
            raise _Exit(
                2,
                f"reducible (nugatory) crossing{'s' if len(bad) > 1 else ''} "
                f"{', '.join(map(str, bad))}: untwist before folding",
            )


def _load_pd(path: str, allow_unknot: bool) -> PlanarDiagram:
    d = parse_pd(_read(path), allow_unknot=allow_unknot)
    _gate_diagram(d)
    return d


def _load_bgd(path: str) -> BinaryGridDiagram:
    g = parse_bgd(_read(path))
    problems = check_bgd(g)
    if problems:
        raise _Exit(1, "invalid grid: " + "; ".join(problems))
    return g


def _grid_readback(g: BinaryGridDiagram) -> PlanarDiagram:
    """Read the grid core back as a diagram; split cores are a precondition
    failure, anything else structurally wrong is a validation failure."""
    try:
        return bgd_to_pd(g)
    except RoutingError as e:
        code = 2 if "Disconnected" in str(e) else 1
        raise _Exit(code, f"grid readback failed: {e}") from e


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def _bound_from_grid(g: BinaryGridDiagram, name: Optional[str]) -> BoundReport:
    """Report for a grid input; the leveling stage never ran."""
    gn = normalize(g)
    counts = block_counts(gn)
    c = g.crossing_number
    cmp = comparison_bounds(c)
    floor_form: Optional[int] = None
    linear_form: Optional[Fraction] = None
    if c >= 2:
        floor_form, linear_form = theoretical_bound(c)
    return BoundReport(
        name=name,
        crossings=c,
        portion_counts={k: 0 for k in PORTION_KINDS},
        flip_x=False,
        flip_y=False,
        block_counts=counts,
        certified_bound=rib_upper_bound(counts),
        theoretical_floor=floor_form,
        theoretical_linear=linear_form,
        tian_bound=cmp["tian"],
        denne_bound=cmp["denne"],
        note="grid input: portion counts unavailable",
    )


def _cmd_bound(ns) -> int:
    fmt = _detect_format(ns.input, ns.format)
    name = Path(ns.input).stem
    if fmt == "pd":
        d = _load_pd(ns.input, ns.allow_unknot)
        report = compute_bound(d, name=name)
    else:
        g = _load_bgd(ns.input)
        _grid_readback(g)
        report = _bound_from_grid(g, name)
    _emit_json(report_json(report))
    linear = (
        "none" if report.theoretical_linear is None
        else f"{float(report.theoretical_linear):g}"
    )
    _say(
        f"{name}: {report.crossings} crossings, certified bound "
        f"{report.certified_bound}, closed form {linear}"
    )
    return 0


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------


def _auto_epsilon(schedule, width: Fraction) -> Fraction:
    """Largest safe default: well under every plane's fold-back budget."""
    order = {slot: j for j, slot in enumerate(schedule.connection_order)}
    worst = max(
        (order[p.insertion[1]] - order[p.insertion[0]] for p in schedule.planes),
        default=0,
    )
    return min(Fraction(1, 100), width / (2 * (worst + 2)))


def _cmd_layout(ns) -> int:
    fmt = _detect_format(ns.input, ns.format)
    if fmt == "pd":
        d = _load_pd(ns.input, ns.allow_unknot)
        gn = run_pipeline(d).normal if d.crossings else BinaryGridDiagram(())
    else:
        g = _load_bgd(ns.input)
        _grid_readback(g)
        gn = normalize(g)
    schedule = build_pile(gn)

    width = Fraction(ns.width) if ns.width is not None else Fraction(1)
    if width <= 0:
        raise _Exit(1, "width must be positive")
    eps = (
        Fraction(ns.epsilon) if ns.epsilon is not None
        else _auto_epsilon(schedule, width)
    )
    if eps <= 0:
        raise _Exit(1, "epsilon must be positive")
    cfg = LayoutConfig(width=width, epsilon=eps)
    try:
        svg = emit_svg(schedule, cfg)
    except LayoutOverlap as e:
        raise _Exit(1, str(e)) from e
    Path(ns.output).write_text(svg, encoding="utf-8")
    if ns.schedule:
        doc = schedule_json(schedule, epsilon=eps, width=width)
        Path(ns.schedule).write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
    _emit_json(
        {
            "svg": ns.output,
            "schedule": ns.schedule,
            "planes": len(schedule.planes),
            "caps": len(schedule.caps),
            "epsilon": float(eps),
            "width": float(width),
            "ribbon_length": float(ribbon_length(schedule, eps)),
        }
    )
    _say(
        f"{Path(ns.input).stem}: {len(schedule.planes)} planes, "
        f"{len(schedule.caps)} caps -> {ns.output}"
    )
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _stage(stages: List[Dict[str, object]], name: str, ok: bool, detail: str):
    stages.append({"stage": name, "ok": bool(ok), "detail": detail})


def _verify_grid_stages(
    g: BinaryGridDiagram,
    fp0: Tuple[str, ...],
    stages: List[Dict[str, object]],
    per_step: bool,
) -> BinaryGridDiagram:
    trace: Optional[List] = [] if per_step else None
    gn = normalize(g, trace=trace)
    ok = jones_fingerprint(bgd_to_pd(gn)) == fp0
    if per_step and trace is not None:
        for _msg, gi in trace:
            if jones_fingerprint(bgd_to_pd(gi)) != fp0:
                ok = False
        detail = f"{len(trace)} steps checked"
    else:
        detail = "endpoint checked"
    _stage(stages, "rewrite", ok, detail)

    s = build_pile(gn)
    _stage(
        stages,
        "layout",
        jones_fingerprint(core_diagram(s)) == fp0,
        f"{len(s.planes)} planes, {len(s.caps)} caps",
    )
    return gn


def _cmd_verify(ns) -> int:
    fmt = _detect_format(ns.input, ns.format)
    stages: List[Dict[str, object]] = []
    if fmt == "pd":
        d = _load_pd(ns.input, ns.allow_unknot)
        c = d.crossing_number
        if c == 0:
            payload = {
                "input": ns.input,
                "crossings": 0,
                "per_step": ns.per_step,
                "stages": [],
                "ok": True,
                "note": "no crossings: every stage is trivial",
            }
            _emit_json(payload)
            _say("trivial diagram: nothing to check")
            return 0
        fp0 = jones_fingerprint(d)

        ld = find_leveling(d)
        _stage(
            stages,
            "leveling",
            not check_leveling(ld) and jones_fingerprint(ld.diagram) == fp0,
            f"order {list(ld.order)}",
        )
        flips_ok = True
        for fx in (False, True):
            for fy in (False, True):
                fl = apply_flip(ld, FlipChoice(fx, fy))
                if check_leveling(fl) or jones_fingerprint(fl.diagram) != fp0:
                    flips_ok = False
        _stage(stages, "flips", flips_ok, "4 variants")
        best, choice = optimize_flips(ld)
        g = build_bgd(best)
        _stage(
            stages,
            "expansion",
            jones_fingerprint(bgd_to_pd(g)) == fp0,
            f"{len(g.rows)} rows, flips x={choice.flip_x} y={choice.flip_y}",
        )
        _verify_grid_stages(g, fp0, stages, ns.per_step)
    else:
        g = _load_bgd(ns.input)
        c = g.crossing_number
        fp0 = jones_fingerprint(_grid_readback(g))
        _verify_grid_stages(g, fp0, stages, ns.per_step)

    ok = all(s["ok"] for s in stages)
    _emit_json(
        {
            "input": ns.input,
            "crossings": c,
            "per_step": ns.per_step,
            "stages": stages,
            "ok": ok,
        }
    )
    for s in stages:
        _say(f"{'ok ' if s['ok'] else 'FAIL'} {s['stage']}: {s['detail']}")
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

_TABLE_COLUMNS = [
    "name",
    "crossings",
    "certified_bound",
    "theoretical_floor",
    "theoretical_bound",
    "tian_bound",
    "denne_bound",
    "note",
]


def _table_row(item: Tuple[str, str]) -> List[str]:
    name, pd_text = item
    report = compute_bound(parse_pd(pd_text), name=name)
    return [
        name,
        str(report.crossings),
        str(report.certified_bound),
        "" if report.theoretical_floor is None else str(report.theoretical_floor),
        "" if report.theoretical_linear is None
        else str(float(report.theoretical_linear)),
        str(report.tian_bound),
        str(report.denne_bound),
        report.note,
    ]


def _cmd_table(ns) -> int:
    if ns.jobs < 1:
        raise _Exit(1, "jobs must be at least 1")
    entries = load_table(ns.input)
    items = [(e.name, e.pd_text) for e in entries]
    for e in entries:
        bad = detect_nugatory(e.diagram)
        if bad:
            raise _Exit(
                2,
                f"{e.name}: reducible (nugatory) crossings "
                f"{', '.join(map(str, bad))}: untwist before folding",
            )
    if ns.jobs > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            rows = list(pool.map(_table_row, items))
    else:
        rows = [_table_row(item) for item in items]
    with open(ns.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_TABLE_COLUMNS)
        writer.writerows(rows)
    _emit_json({"entries": len(rows), "output": ns.output})
    _say(f"{len(rows)} entries -> {ns.output}")
    return 0


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ribbonfold",
        description="Certified folded-ribbon length bounds for knot diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, unknot=True):
        p.add_argument("input", help="input file (.pd or .bgd)")
        p.add_argument(
            "--format", choices=["pd", "bgd"], help="override extension detection"
        )
        if unknot:
            p.add_argument(
                "--allow-unknot",
                action="store_true",
                help="accept crossingless input and report the trivial bound",
            )

    p = sub.add_parser("bound", help="print the certified bound report as JSON")
    common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("layout", help="emit the fold schematic as SVG")
    common(p)
    p.add_argument("-o", "--output", required=True, help="SVG output path")
    p.add_argument("--schedule", help="also write the fold schedule JSON here")
    p.add_argument(
        "--epsilon",
        type=Fraction,
        help="wing/cap allowance in width units (default: auto)",
    )
    p.add_argument("--width", type=Fraction, help="ribbon width (default 1)")
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("verify", help="check knot-type preservation per stage")
    common(p)
    p.add_argument(
        "--per-step",
        action="store_true",
        help="check every rewrite step, not just stage endpoints",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("table", help="batch-run a knot table CSV")
    p.add_argument("input", help="CSV with columns name,crossings,pd")
    p.add_argument("-o", "--output", required=True, help="result CSV path")
    p.add_argument(
        "--jobs", type=int, default=1, help="parallel workers (default 1)"
    )
    p.set_defaults(func=_cmd_table)
    return parser


def run_command(argv: Sequence[str]) -> int:
    """Run one CLI invocation and return its exit code."""
    try:
        ns = _build_parser().parse_args(list(argv))
        return ns.func(ns)
    except _Exit as e:
        _say(f"error: {e}")
        return e.code
    except (PdSyntaxError, LabelError, BgdFormatError, LayoutOverlap) as e:
        _say(f"error: {e}")
        return 1
    except TableError as e:
        _say(f"error: bad table: {e}")
        return 1
    except PreconditionViolated as e:
        _say(f"error: {e}")
        return 2
    except (NoLevelingFound, RewriteError, RoutingError, RibbonfoldError) as e:
        _say(f"internal check failure: {e}")
        return 3
    except Exception as e:  # anything unexpected is an internal failure
        _say(f"internal check failure: {type(e).__name__}: {e}")
        return 3


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
