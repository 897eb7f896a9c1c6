"""Operator commands: serve the API, chat in a terminal, replay logs, and run
pipeline pieces standalone.

Exit codes: 0 ok, 2 usage, 3 validation, 4 provider/backend failure.
"""

from __future__ import annotations

import dataclasses
import functools
import json as jsonlib
import sys
from pathlib import Path

import click

from convds.config import load_settings
from convds.engine import Engine, build_backend, build_gateway, results_as_dict
from convds.errors import EngineError, TransportFailure
from convds.petel.expression import parse_petel, real_filters, to_dict
from convds.pipeline.attributes import petel_to_attributes
from convds.pipeline.backends import BuiltinBaselineBackend, HttpBackend, dispatch
from convds.pipeline.filters import apply_filters
from convds.pipeline.prep import prep_data
from convds.pipeline.request import build_train_request
from convds.petel.schema import MlTask
from convds.results import summarize_results, template_results
from convds.service.replay import replay_log
from convds.tabular.dataset import load_table
from convds.tabular.miniature import miniaturize
from convds.tabular.summarize import summarize_dataset
from convds.tabular.suggest import suggest_tasks


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TransportFailure as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(4)
        except EngineError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _settings_with(scripted: str | None, level: int | None):
    settings = load_settings()
    if scripted:
        settings = dataclasses.replace(
            settings, provider="scripted", script_path=scripted, script_strict=False
        )
    if level is not None:
        settings = dataclasses.replace(settings, level_override=level)
    return settings


@click.group()
def main() -> None:
    """Conversational data-science engine."""


@main.command()
@click.option("--host", default=None, help="Listen address (default from CONVDS_HOST).")
@click.option("--port", default=None, type=int, help="Listen port (default from CONVDS_PORT).")
@_guard
def serve(host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from convds.service import create_app

    settings = load_settings()
    if host:
        settings = dataclasses.replace(settings, host=host)
    if port:
        settings = dataclasses.replace(settings, port=port)
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scripted", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--level", default=None, type=int, help="TELeR level override.")
@_guard
def chat(dataset: str, scripted: str | None, level: int | None) -> None:
    """Interactive terminal chat over a local session."""
    settings = _settings_with(scripted, level)
    engine = Engine(build_gateway(settings), backend=build_backend(settings), seed=settings.seed)
    session = engine.new_session()
    path = Path(dataset)
    click.echo(engine.load_dataset(session, path.read_bytes(), name=path.stem))
    while True:
        try:
            text = click.prompt("you", prompt_suffix="> ")
        except (click.Abort, EOFError):
            break
        if text.strip().lower() in {"exit", "quit"}:
            break
        try:
            reply = engine.handle_message(session, text)
        except TransportFailure:
            raise
        except EngineError as exc:
            click.echo(f"error: {exc}", err=True)
            continue
        progress = engine.petel_progress(session)
        click.echo(f"[{session.state.value}] {reply}")
        total = len(progress["filled"]) + len(progress["missing"])
        if total:
            click.echo(f"(task slots filled: {len(progress['filled'])}/{total})")


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def replay(log_path: str, as_json: bool) -> None:
    """Replay an event log; nonzero exit on any invariant violation."""
    record = replay_log(log_path)
    if as_json:
        click.echo(jsonlib.dumps(dataclasses.asdict(record), indent=2))
        return
    click.echo(" → ".join(record.trajectory))
    if record.petel is not None:
        click.echo(jsonlib.dumps(record.petel, indent=2))


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scripted", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def summarize(dataset: str, scripted: str | None, as_json: bool) -> None:
    """Dataset summary plus task suggestions, no chat session."""
    settings = _settings_with(scripted, None)
    gateway = build_gateway(settings)
    path = Path(dataset)
    table = load_table(path.read_bytes(), name=path.stem)
    mini = miniaturize(table, seed=settings.seed)
    summary = summarize_dataset(mini, gateway)
    suggestions = suggest_tasks(summary, gateway)
    if as_json:
        click.echo(
            jsonlib.dumps(
                {
                    "summary": summary.summary,
                    "columns": [
                        {"name": c.name, "description": c.description} for c in summary.columns
                    ],
                    "row": summary.row,
                    "trend": summary.trend,
                    "tasks": [
                        {
                            "task": s.task.value,
                            "rationale": s.rationale,
                            "example_formulation": s.example_formulation,
                        }
                        for s in suggestions.tasks
                    ],
                },
                indent=2,
            )
        )
        return
    click.echo(summary.summary)
    click.echo(f"Sample row: {summary.row}")
    click.echo(f"Trend: {summary.trend}")
    click.echo("Suggested tasks:")
    for s in suggestions.tasks:
        click.echo(f"  - {s.task.value}: {s.rationale}")


@main.command("run-petel")
@click.option("--petel", "petel_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", default="builtin", help='"builtin" or a worker base URL.')
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def run_petel(petel_path: str, dataset: str, backend: str, seed: int, as_json: bool) -> None:
    """Filter, prep, dispatch one task expression; print the result summary."""
    petel = parse_petel(Path(petel_path).read_text(encoding="utf-8"))
    path = Path(dataset)
    table = load_table(path.read_bytes(), name=path.stem)
    filtered = apply_filters(table, real_filters(petel))
    plan = petel_to_attributes(petel, filtered)
    task_kind = "regression" if petel.problem_type is MlTask.REGRESSION else "classification"
    matrix = prep_data(filtered, plan, task=task_kind)
    request = build_train_request(petel, matrix, seed=seed)
    handle = BuiltinBaselineBackend() if backend == "builtin" else HttpBackend(backend)
    response = dispatch(request, handle)
    summary = summarize_results(response, petel)
    if as_json:
        payload = results_as_dict(summary)
        payload["petel"] = to_dict(petel)
        click.echo(jsonlib.dumps(payload, indent=2))
        return
    click.echo(template_results(summary))


if __name__ == "__main__":
    main()
