"""Command-line front end: variants, render, stats, check, bench.

Exit codes: 0 success, 2 input error, 3 unknown variant/case reference,
1 internal error. stdout carries data only; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .ingest import ColumnMap, EventLog, ParseError, group_by_case, parse_csv, parse_xes
from .layout import layout_to_json, variant_table
from .order import build_interval_order, validate
from .render import RenderConfig, render_svg, render_text
from .stats import GeneratorSpec, generate_log, report, report_to_json, report_to_text

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_BAD_REFERENCE = 3


class InputError(Exception):
    """Bad invocation or unusable input file (exit 2)."""


class UnknownReference(Exception):
    """Requested variant key or case id does not exist (exit 3)."""


@dataclass(slots=True)
class CliConfig:
    input: Path | None
    format: str
    columns: ColumnMap
    output: Path | None
    output_format: str | None
    threads: int
    seed: int
    generate: GeneratorSpec | None


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    threads = args.threads
    if threads is None:
        env = os.environ.get("VW_THREADS", "1")
        try:
            threads = int(env)
        except ValueError:
            raise InputError(f"VW_THREADS is not an integer: {env!r}")
    if threads < 1:
        raise InputError(f"--threads must be >= 1, got {threads}")

    generate = None
    if args.generate is not None:
        generate = _parse_generate(args.generate, args.seed)

    input_path = Path(args.input) if args.input else None
    if (input_path is None) == (generate is None):
        raise InputError("exactly one of --input and --generate is required")
    if input_path is not None and not input_path.exists():
        raise InputError(f"input file does not exist: {input_path}")

    columns = ColumnMap()
    if args.columns:
        parts = [p.strip() for p in args.columns.split(",")]
        if len(parts) != 4:
            raise InputError(
                "--columns needs four comma-separated names: case,label,start,complete"
            )
        columns = ColumnMap(*parts)

    return CliConfig(
        input=input_path,
        format=args.format,
        columns=columns,
        output=Path(args.output) if args.output else None,
        output_format=args.output_format,
        threads=threads,
        seed=args.seed,
        generate=generate,
    )


_GENERATE_KEYS = (
    "num_templates", "traces_per_template", "instances_per_trace",
    "overlap_density", "seed",
)


def _parse_generate(text: str, seed: int) -> GeneratorSpec:
    fields: dict[str, str] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in _GENERATE_KEYS:
            raise InputError(
                f"--generate entries must be key=value with keys {_GENERATE_KEYS}, got {part!r}"
            )
        fields[key] = value.strip()
    try:
        return GeneratorSpec(
            num_templates=int(fields.get("num_templates", 5)),
            traces_per_template=int(fields.get("traces_per_template", 100)),
            instances_per_trace=int(fields.get("instances_per_trace", 10)),
            overlap_density=float(fields.get("overlap_density", 0.3)),
            seed=int(fields.get("seed", seed)),
        )
    except ValueError as exc:
        raise InputError(f"bad --generate spec: {exc}")


def _detect_format(path: Path, explicit: str) -> str:
    if explicit != "auto":
        return explicit
    name = path.name.lower()
    if name.endswith((".xes", ".xes.gz")):
        return "xes"
    if name.endswith(".csv"):
        return "csv"
    raise InputError(
        f"cannot infer format of {path.name!r}; pass --format xes|csv"
    )


def _load_log(config: CliConfig) -> tuple[EventLog, float]:
    """Parse or generate the event log; returns (log, parse seconds)."""
    if config.generate is not None:
        return generate_log(config.generate), 0.0
    fmt = _detect_format(config.input, config.format)
    t0 = time.perf_counter()
    if fmt == "xes":
        log = parse_xes(config.input)
    else:
        log = parse_csv(config.input, config.columns)
    return log, time.perf_counter() - t0


def _emit_diagnostics(log: EventLog) -> None:
    meta = log.source_meta
    for kind, messages in (("warning", meta.warnings), ("error", meta.errors)):
        for message in messages[:20]:
            print(f"{kind}: {message}", file=sys.stderr)
        if len(messages) > 20:
            print(f"... and {len(messages) - 20} more {kind}s", file=sys.stderr)


def _resolve_output_format(config: CliConfig, default: str, allowed: set[str]) -> str:
    fmt = config.output_format
    if fmt is None and config.output is not None:
        suffix = config.output.suffix.lower().lstrip(".")
        if suffix in allowed:
            fmt = suffix
    if fmt is None:
        fmt = default
    if fmt not in allowed:
        raise InputError(f"output format {fmt!r} not supported here (use {sorted(allowed)})")
    return fmt


def _write_output(config: CliConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        config.output.write_text(text, encoding="utf-8")


def cmd_variants(config: CliConfig, args, log: EventLog, parse_seconds: float) -> int:
    table = variant_table(log, threads=config.threads)
    fmt = _resolve_output_format(config, default="json", allowed={"json", "text"})
    if fmt == "json":
        payload = {
            "num_variants": len(table.entries),
            "total_traces": table.total_count,
            "skipped_traces": len(table.skipped),
            "variants": [
                {
                    "key": key,
                    "count": entry.count,
                    "has_fallback": entry.has_fallback,
                    "representative_cases": entry.case_ids[:5],
                    "layout": layout_to_json(entry.layout),
                }
                for key, entry in table.sorted_items()
            ],
        }
        _write_output(config, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    else:
        lines = [
            f"{entry.count}\t{render_text(entry.layout)}"
            for _, entry in table.sorted_items()
        ]
        _write_output(config, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_render(config: CliConfig, args, log: EventLog, parse_seconds: float) -> int:
    table = variant_table(log, threads=config.threads)
    if args.key is not None:
        entry = table.entries.get(args.key)
        if entry is None:
            raise UnknownReference(f"no variant with key {args.key!r}")
    else:
        found = table.find_case(args.case)
        if found is None:
            raise UnknownReference(f"no case with id {args.case!r}")
        entry = found[1]
    fmt = _resolve_output_format(config, default="svg", allowed={"svg", "text", "json"})
    if fmt == "svg":
        text = render_svg(entry.layout, RenderConfig(palette_seed=config.seed))
    elif fmt == "text":
        text = render_text(entry.layout) + "\n"
    else:
        text = json.dumps(layout_to_json(entry.layout), ensure_ascii=False, indent=2) + "\n"
    _write_output(config, text)
    return EXIT_OK


def cmd_stats(config: CliConfig, args, log: EventLog, parse_seconds: float) -> int:
    rep = report(log, threads=config.threads, extra_preprocessing_seconds=parse_seconds)
    fmt = _resolve_output_format(config, default="text", allowed={"json", "text"})
    if fmt == "json":
        _write_output(config, json.dumps(report_to_json(rep), indent=2) + "\n")
    else:
        name = config.input.name if config.input else "synthetic"
        _write_output(config, report_to_text(rep, name))
    return EXIT_OK


def cmd_check(config: CliConfig, args, log: EventLog, parse_seconds: float) -> int:
    traces = group_by_case(log)
    lines = []
    bad = 0
    for trace in traces:
        if not trace.instances:
            continue
        for violation in validate(build_interval_order(trace)):
            bad += 1
            lines.append(f"case {trace.case_id}: {violation}")
    lines.append(f"checked {len(traces)} traces: {bad} violations")
    _write_output(config, "".join(line + "\n" for line in lines))
    # A constructed order violating its own axioms is an internal error.
    return EXIT_OK if bad == 0 else EXIT_INTERNAL


def cmd_bench(config: CliConfig, args, log: EventLog, parse_seconds: float) -> int:
    runs = []
    for _ in range(args.repeat):
        runs.append(report(log, threads=config.threads))
    phases = {
        "preprocessing": [r.timings.preprocessing for r in runs],
        "building_orders": [r.timings.building_orders for r in runs],
        "cutting": [r.timings.cutting for r in runs],
        "total": [r.timings.total for r in runs],
    }
    fmt = _resolve_output_format(config, default="text", allowed={"json", "text"})
    if fmt == "json":
        payload = {
            "runs": args.repeat,
            "phases": {
                name: {"min": min(vals), "median": statistics.median(vals)}
                for name, vals in phases.items()
            },
        }
        _write_output(config, json.dumps(payload, indent=2) + "\n")
    else:
        lines = [f"benchmark: {args.repeat} runs", f"{'phase':<16} {'min':>10} {'median':>10}"]
        for name, vals in phases.items():
            lines.append(
                f"{name:<16} {min(vals):>9.3f}s {statistics.median(vals):>9.3f}s"
            )
        _write_output(config, "".join(line + "\n" for line in lines))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="path to a .xes, .xes.gz or .csv event log")
    common.add_argument(
        "--generate",
        metavar="SPEC",
        help=(
            "synthesize a log instead of reading one; SPEC is key=value pairs: "
            "num_templates,traces_per_template,instances_per_trace,overlap_density[,seed]"
        ),
    )
    common.add_argument(
        "--format", choices=("auto", "xes", "csv"), default="auto",
        help="input format (default: by file extension)",
    )
    common.add_argument(
        "--columns",
        help="CSV column names as case,label,start,complete (default exactly those)",
    )
    common.add_argument("--output", "-o", help="output path (default: stdout)")
    common.add_argument(
        "--output-format", choices=("json", "svg", "text"),
        help="output format (default: per command, or by --output extension)",
    )
    common.add_argument(
        "--threads", type=int, default=None,
        help="worker threads; falls back to VW_THREADS, then 1",
    )
    common.add_argument("--seed", type=int, default=0, help="seed for colors and --generate")

    parser = argparse.ArgumentParser(
        prog="variantview",
        description="Trace variant explorer for partially ordered event data.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("variants", parents=[common], help="list interval-ordered variants")
    p.set_defaults(func=cmd_variants)

    p = sub.add_parser("render", parents=[common], help="render one variant as SVG/text")
    selector = p.add_mutually_exclusive_group(required=True)
    selector.add_argument("--key", help="canonical variant key to render")
    selector.add_argument("--case", help="case id whose variant to render")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("stats", parents=[common], help="log and variant statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("check", parents=[common], help="validate every trace's interval order")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", parents=[common], help="repeat the pipeline and time phases")
    p.add_argument("--repeat", type=int, default=5, help="number of runs (default 5)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        config = _config_from_args(args)
        log, parse_seconds = _load_log(config)
        _emit_diagnostics(log)
        return args.func(config, args, log, parse_seconds)
    except (InputError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnknownReference as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_REFERENCE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
