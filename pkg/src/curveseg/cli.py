"""Command-line front end: parse an equation, run the sweep, emit outputs.

Outputs are a JSON topology report (schema documented in docs/schema.md), a
DOT graph, and an SVG rendering of the straight-line embedding.  All three
are byte-deterministic for a fixed input and configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .counters import OpCounters
from .errors import (
    AllDerivativesVanish,
    ConservationViolation,
    CoverTooCoarse,
    CurvesegError,
    DuplicateAbscissa,
    EmptyDomain,
    GeneralPositionFailure,
    InvalidRange,
    NegativeBranchCount,
    NonSquarefree,
    NotRegularValue,
    ParseError,
    ShrinkEpsilon,
    VerticalLineComponent,
    ZeroPolynomial,
)
from .parsing import canonical_text, parse_polynomial
from .sweep import general_position_pipeline
from .topology import build_graph, complete_to_data, connected_components, refine

SCHEMA_VERSION = "1"

EXIT_CODES = {
    ParseError: 2,
    ZeroPolynomial: 3,
    VerticalLineComponent: 4,
    GeneralPositionFailure: 5,
    NegativeBranchCount: 6,
    ConservationViolation: 7,
    NonSquarefree: 8,
    NotRegularValue: 9,
    DuplicateAbscissa: 10,
    CoverTooCoarse: 11,
    ShrinkEpsilon: 12,
    AllDerivativesVanish: 13,
    EmptyDomain: 14,
    InvalidRange: 15,
    OSError: 16,
}


@dataclass
class RunConfig:
    mode: str = "float"
    epsilon: Fraction = Fraction(1, 1024)
    x_range: tuple | None = None
    margin: Fraction = Fraction(1)
    refine_count: int = 0
    derivative_test: bool = True
    no_discriminant: bool = False
    seed: int = 0
    max_shear_attempts: int = 20
    json_path: str | None = None
    dot_path: str | None = None
    svg_path: str | None = None
    show_counters: bool = False

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.x_range is not None and self.x_range[0] >= self.x_range[1]:
            raise InvalidRange("x-range must satisfy lo < hi")


@dataclass
class TopologyReport:
    config: RunConfig
    input_text: str
    curve_text: str
    shear: Fraction
    data: object
    graph: object
    components: int
    counters: OpCounters

    def to_dict(self):
        table = self.data.table
        certified = table.mode == "certified"

        def rat(v):
            return str(v)

        def x_value(entry):
            if certified:
                return [rat(entry.lo), rat(entry.hi)]
            return rat(entry.sample)

        def y_value(p):
            if certified:
                return [rat(p.y_lo), rat(p.y_hi)]
            return rat(p.sample)

        partition = [
            {"x": x_value(e), "approx": float(e.sample), "critical": e.critical}
            for e in table.partition.entries
        ]
        fibers = []
        for i, fiber in enumerate(table.fibers):
            fibers.append(
                [
                    {
                        "y": y_value(p),
                        "approx": float(p.sample),
                        "delta": p.delta,
                        "L": self.data.L[i][j],
                        "R": self.data.R[i][j],
                    }
                    for j, p in enumerate(fiber)
                ]
            )
        return {
            "schema_version": SCHEMA_VERSION,
            "mode": table.mode,
            "input": self.input_text,
            "curve": self.curve_text,
            "shear": rat(self.shear),
            "degree": table.degree,
            "epsilon": rat(self.config.epsilon),
            "partition": partition,
            "fibers": fibers,
            "L": [list(row) for row in self.data.L],
            "R": [list(row) for row in self.data.R],
            "edges": [
                [[a[0] + 1, a[1] + 1], [b[0] + 1, b[1] + 1]] for a, b in self.graph.edges
            ],
            "components": self.components,
            "counters": self.counters.as_dict(),
        }


def _widest_gap_midpoint(entries):
    best = None
    for a, b in zip(entries, entries[1:]):
        width = b.lo - a.hi
        if best is None or width > best[0]:
            best = (width, (a.hi + b.lo) / 2)
    return best[1]


def run(config, g):
    """Drive the full pipeline for a parsed curve equation."""
    counters = OpCounters()
    result = general_position_pipeline(
        g,
        max_attempts=config.max_shear_attempts,
        rng_seed=config.seed,
        mode=config.mode,
        epsilon=config.epsilon,
        margin=config.margin,
        x_range=config.x_range,
        use_derivative_test=config.derivative_test,
        no_discriminant=config.no_discriminant,
        counters=counters,
    )
    data = complete_to_data(result.table, use_derivative_test=config.derivative_test, counters=counters)
    for _ in range(config.refine_count):
        x = _widest_gap_midpoint(data.table.partition.entries)
        data = refine(data, x, config.epsilon, counters)
    graph = build_graph(data, counters)
    components = connected_components(graph)
    report = TopologyReport(
        config=config,
        input_text=canonical_text(g),
        curve_text=canonical_text(result.curve),
        shear=result.shear,
        data=data,
        graph=graph,
        components=components,
        counters=counters,
    )
    if config.json_path:
        emit_json(report, config.json_path)
    if config.dot_path:
        emit_dot(graph, config.dot_path)
    if config.svg_path:
        emit_svg(graph, config.svg_path)
    return report


def emit_json(report, path):
    """Write the topology report as deterministic JSON."""
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _fmt(v):
    return format(float(v), ".6g")


def emit_dot(graph, path):
    """Write an undirected DOT graph with pinned vertex positions."""
    lines = ["graph curve {", "  node [shape=point];"]
    for v in graph.vertices:
        lines.append(f'  v{v.fiber + 1}_{v.rank + 1} [pos="{_fmt(v.x)},{_fmt(v.y)}!"];')
    for (i, j), (k, l) in graph.edges:
        lines.append(f"  v{i + 1}_{j + 1} -- v{k + 1}_{l + 1};")
    lines.append("}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_svg(graph, path):
    """Render vertices and straight edges to a standalone SVG file.

    Critical vertices are drawn larger and in a distinct colour; the viewBox
    is the data extent padded by 5%.  No timestamps or other run-varying
    content is written.
    """
    pts = {(v.fiber, v.rank): (float(v.x), -float(v.y)) for v in graph.vertices}
    if pts:
        xs = [p[0] for p in pts.values()]
        ys = [p[1] for p in pts.values()]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        pad = 0.05 * max(x1 - x0, y1 - y0, 1.0)
        x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    else:
        x0, y0, x1, y1 = 0.0, 0.0, 1.0, 1.0
    width, height = x1 - x0, y1 - y0
    unit = max(width, height)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(width)} {_fmt(height)}">',
    ]
    stroke = unit / 200
    for (i, j), (k, l) in graph.edges:
        ax, ay = pts[(i, j)]
        bx, by = pts[(k, l)]
        lines.append(
            f'  <line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
            f'stroke="#1f6feb" stroke-width="{_fmt(stroke)}"/>'
        )
    for v in graph.vertices:
        px, py = pts[(v.fiber, v.rank)]
        r = unit / 80 if v.critical else unit / 120
        color = "#d62728" if v.critical else "#24292f"
        lines.append(f'  <circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(r)}" fill="{color}"/>')
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _parse_range(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected lo,hi")
    return (_parse_fraction(parts[0]), _parse_fraction(parts[1]))


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="curveseg",
        description="Compute an isotopic straight-line graph of a real algebraic plane curve.",
    )
    ap.add_argument("polynomial", help="curve equation, e.g. 'y^2 - x^3 - x^2'")
    ap.add_argument("--mode", choices=("float", "certified"), default="float")
    ap.add_argument("--epsilon", type=_parse_fraction, default=Fraction(1, 1024), metavar="P/Q")
    ap.add_argument("--x-range", type=_parse_range, default=None, metavar="LO,HI")
    ap.add_argument("--margin", type=_parse_fraction, default=Fraction(1), metavar="P/Q")
    ap.add_argument("--refine", type=int, default=0, metavar="N")
    ap.add_argument("--no-derivative-test", action="store_true")
    ap.add_argument("--no-discriminant", action="store_true")
    ap.add_argument("--seed", type=int, default=0, metavar="N")
    ap.add_argument("--max-shear-attempts", type=int, default=20, metavar="N")
    ap.add_argument("--json", dest="json_path", default=None, metavar="PATH")
    ap.add_argument("--dot", dest="dot_path", default=None, metavar="PATH")
    ap.add_argument("--svg", dest="svg_path", default=None, metavar="PATH")
    ap.add_argument("--counters", action="store_true")
    return ap


def _summary(report):
    table = report.data.table
    flags = table.partition.flags
    parts = [
        f"{x}{'*' if f else ''}" for x, f in zip(table.partition.xs, flags)
    ]
    lines = [
        f"curve: {report.curve_text}" + (f" (shear t = {report.shear})" if report.shear else ""),
        f"degree: {table.degree}  mode: {table.mode}",
        "partition: " + ", ".join(parts) + "  (* = critical)",
        "fiber sizes: " + " ".join(str(len(f)) for f in table.fibers),
        f"edges: {len(report.graph.edges)}  components: {report.components}",
    ]
    if report.config.show_counters:
        for name, value in report.counters.as_dict().items():
            lines.append(f"  {name}: {value}")
    return "\n".join(lines)


def main(argv=None):
    ap = build_arg_parser()
    ns = ap.parse_args(argv)
    seed = ns.seed
    env_seed = os.environ.get("CURVESEG_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            print(f"curveseg: invalid CURVESEG_SEED {env_seed!r}", file=sys.stderr)
            return 2
    try:
        config = RunConfig(
            mode=ns.mode,
            epsilon=ns.epsilon,
            x_range=ns.x_range,
            margin=ns.margin,
            refine_count=ns.refine,
            derivative_test=not ns.no_derivative_test,
            no_discriminant=ns.no_discriminant,
            seed=seed,
            max_shear_attempts=ns.max_shear_attempts,
            json_path=ns.json_path,
            dot_path=ns.dot_path,
            svg_path=ns.svg_path,
            show_counters=ns.counters,
        )
        g = parse_polynomial(ns.polynomial)
        report = run(config, g)
    except tuple(EXIT_CODES) as exc:
        code = next(c for t, c in EXIT_CODES.items() if isinstance(exc, t))
        print(f"curveseg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    print(_summary(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
