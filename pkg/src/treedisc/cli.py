"""Command-line access to the discovery engine.

Exit codes: 0 success, 2 unreadable/unparsable input, 3 empty or invalid
variant selection, 4 consistency violation, 5 environment failure.
"""

from __future__ import annotations

import json
import os
import socket
import sys
from pathlib import Path

import click

from .alignment import align, is_fitting
from .errors import EngineError, InconsistentInput
from .eventlog import EventLog, TraceVariant, extract_variants, parse_xes
from .incremental import add_trace
from .miner import discover_from_variants
from .petri import serialize_pnml, tree_to_petri_net
from .service import share_string
from .tree import TreeNode, format_tree, parse_ptml, serialize_ptml, validation_errors

EXIT_INPUT = 2
EXIT_SELECTION = 3
EXIT_CONSISTENCY = 4
EXIT_ENVIRONMENT = 5


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_log(path: str) -> tuple[EventLog, list[TraceVariant]]:
    try:
        data = Path(path).read_bytes()
        log = parse_xes(data, source_name=path)
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read {path}: {exc}")
    except EngineError as exc:
        _fail(EXIT_INPUT, f"cannot parse {path}: {exc}")
    return log, extract_variants(log)


def _read_tree(path: str) -> TreeNode:
    try:
        tree = parse_ptml(Path(path).read_bytes())
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read {path}: {exc}")
    except EngineError as exc:
        _fail(EXIT_INPUT, f"cannot parse {path}: {exc}")
    errors = validation_errors(tree)
    if errors:
        _fail(EXIT_INPUT, f"invalid tree: {errors[0].code} at {list(errors[0].path)}")
    return tree


def _select_variants(variants: list[TraceVariant], selector: str,
                     total_cases: int) -> list[TraceVariant]:
    if selector.startswith("top:"):
        try:
            n = int(selector[4:])
        except ValueError:
            raise click.UsageError(f"bad selector {selector!r}")
        selection = variants[:n]
    elif selector.startswith("ids:"):
        try:
            ids = {int(x) for x in selector[4:].split(",") if x.strip() != ""}
        except ValueError:
            raise click.UsageError(f"bad selector {selector!r}")
        known = {v.variant_id for v in variants}
        missing = sorted(ids - known)
        if missing:
            _fail(EXIT_SELECTION, f"variant ids out of range: {missing}")
        selection = [v for v in variants if v.variant_id in ids]
    elif selector.startswith("share>="):
        try:
            threshold = float(selector[7:])
        except ValueError:
            raise click.UsageError(f"bad selector {selector!r}")
        selection = [v for v in variants if v.frequency_share >= threshold]
    else:
        raise click.UsageError(
            f"bad selector {selector!r}; use top:N, ids:1,4,7 or share>=0.05")
    if not selection:
        _fail(EXIT_SELECTION, f"selector {selector!r} selects no variants")
    return selection


def _color(text: str, color: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return click.style(text, fg=color)


@click.group()
def main() -> None:
    """Incremental process-tree discovery toolkit."""


@main.command("variants")
@click.argument("log_path")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
@click.option("--plot", type=click.Path(), default=None,
              help="Render a frequency chart (PNG/SVG/PDF by extension).")
def cmd_variants(log_path: str, fmt: str, plot: str | None) -> None:
    """Rank the trace variants of an event log."""
    log, variants = _read_log(log_path)
    total = len(log.traces)
    if fmt == "json":
        rows = [{"rank": v.variant_id + 1, "count": v.case_count,
                 "share": share_string(v.case_count, total) if total else "0",
                 "activities": list(v.activities)} for v in variants]
        click.echo(json.dumps(rows, indent=2))
    else:
        click.echo("rank\tcount\tshare\tactivities")
        for v in variants:
            share = share_string(v.case_count, total) if total else "0"
            click.echo(f"{v.variant_id + 1}\t{v.case_count}\t{share}\t{','.join(v.activities)}")
    if plot:
        from .report import variant_frequency_figure
        variant_frequency_figure(variants, total, plot)
        click.echo(f"wrote {plot}", err=True)


@main.command("discover")
@click.argument("log_path")
@click.option("--select", "selector", default="top:1", show_default=True,
              help="top:N, ids:1,4,7 or share>=0.05")
@click.option("-o", "--out", "out_path", required=True, type=click.Path())
def cmd_discover(log_path: str, selector: str, out_path: str) -> None:
    """Discover a process tree from selected variants, write PTML."""
    log, variants = _read_log(log_path)
    selection = _select_variants(variants, selector, len(log.traces))
    tree = discover_from_variants(selection)
    Path(out_path).write_bytes(serialize_ptml(tree))
    click.echo(f"model: {format_tree(tree)}")
    for v in selection:
        fits = is_fitting(tree, v.activities)
        mark = _color("ok", "green") if fits else _color("MISS", "red")
        click.echo(f"{mark}\tvariant {v.variant_id}\t{','.join(v.activities)}")
    click.echo(f"wrote {out_path}")


@main.command("extend")
@click.argument("log_path")
@click.argument("tree_path")
@click.option("--select", "selector", required=True, help="variants to add")
@click.option("--added", "added_selector", default=None,
              help="variants previously added to the model (ids:1,4,7)")
@click.option("-o", "--out", "out_path", required=True, type=click.Path())
def cmd_extend(log_path: str, tree_path: str, selector: str,
               added_selector: str | None, out_path: str) -> None:
    """Add selected variants to an existing model, write the new PTML."""
    log, variants = _read_log(log_path)
    tree = _read_tree(tree_path)
    total = len(log.traces)
    selection = _select_variants(variants, selector, total)
    previously = (_select_variants(variants, added_selector, total)
                  if added_selector else [])

    net = tree_to_petri_net(tree)
    for v in previously:
        if align(net, v.activities).cost != 0:
            _fail(EXIT_CONSISTENCY,
                  f"previously added variant {v.variant_id} does not fit the input model")

    added_traces = {v.activities for v in previously}
    for v in sorted(selection, key=lambda v: v.variant_id):
        try:
            tree = add_trace(tree, added_traces, v.activities)
        except InconsistentInput as exc:
            _fail(EXIT_CONSISTENCY, str(exc))
        added_traces.add(v.activities)
        click.echo(f"added\tvariant {v.variant_id}\t{','.join(v.activities)}")

    for trace in sorted(added_traces):
        if not is_fitting(tree, trace):
            _fail(EXIT_CONSISTENCY, f"postcondition violated for {list(trace)}")
    Path(out_path).write_bytes(serialize_ptml(tree))
    click.echo(f"model: {format_tree(tree)}")
    click.echo(f"wrote {out_path}")


@main.command("check")
@click.argument("log_path")
@click.argument("tree_path")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
@click.option("--plot", type=click.Path(), default=None,
              help="Render a conformance chart next to the report.")
def cmd_check(log_path: str, tree_path: str, fmt: str, plot: str | None) -> None:
    """Check which variants the model accepts; report the case fraction."""
    log, variants = _read_log(log_path)
    tree = _read_tree(tree_path)
    net = tree_to_petri_net(tree)
    verdicts: dict[int, bool | None] = {}
    for v in variants:
        try:
            verdicts[v.variant_id] = align(net, v.activities).cost == 0
        except EngineError:
            verdicts[v.variant_id] = None

    total = sum(v.case_count for v in variants)
    accepted_cases = sum(v.case_count for v in variants if verdicts[v.variant_id] is True)
    fraction = share_string(accepted_cases, total) if total else "0"
    if fmt == "json":
        click.echo(json.dumps({
            "results": [{"variant_id": v.variant_id, "accepted": verdicts[v.variant_id],
                         "count": v.case_count} for v in variants],
            "accepted_case_fraction": fraction,
        }, indent=2))
    else:
        click.echo("variant\taccepted\tcount\tactivities")
        for v in variants:
            verdict = verdicts[v.variant_id]
            text = {True: _color("yes", "green"), False: _color("no", "red"),
                    None: "unknown"}[verdict]
            click.echo(f"{v.variant_id}\t{text}\t{v.case_count}\t{','.join(v.activities)}")
        click.echo(f"accepted_case_fraction\t{fraction}")
    if plot:
        from .report import conformance_figure
        conformance_figure(variants, verdicts, plot)
        click.echo(f"wrote {plot}", err=True)


@main.command("convert")
@click.argument("tree_path")
@click.option("-o", "--out", "out_path", required=True, type=click.Path())
def cmd_convert(tree_path: str, out_path: str) -> None:
    """Translate a PTML tree into a PNML workflow net."""
    tree = _read_tree(tree_path)
    Path(out_path).write_bytes(serialize_pnml(tree_to_petri_net(tree)))
    click.echo(f"wrote {out_path}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8800, show_default=True, type=int)
@click.option("--static-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Serve a built UI bundle at /")
@click.option("--state-path", type=click.Path(), default=None,
              help="Write session snapshots to this JSON file on shutdown")
def cmd_serve(host: str, port: int, static_dir: str | None, state_path: str | None) -> None:
    """Run the HTTP session service (and optionally the web UI)."""
    import uvicorn

    from .service import create_app

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        _fail(EXIT_ENVIRONMENT, f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    app = create_app(state_path=state_path, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
