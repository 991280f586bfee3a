"""Command-line entry point: bank tooling, simulation, serving, replay."""

import json
import sys
import time
from pathlib import Path

import click

from .bank import (
    BankError,
    SheetError,
    load_banks_dir,
    parse_sheet_file,
    write_banks,
)
from .boards import BoardError, GameKind, load_boards_dir
from .engine import EngineError, Transcript, _loc_json, replay as replay_transcript, winner
from .report import (
    render_comparison,
    render_report,
    write_comparison_outputs,
    write_report_outputs,
)
from .service import DEFAULT_SESSION_TTL, serve as run_server
from .sim import (
    AlwaysCorrect,
    Bernoulli,
    SIM_LANGUAGE,
    SimError,
    compare_speeds,
    run_sim,
    sim_bank,
    sim_config,
)

DOMAIN_ERRORS = (BankError, BoardError, EngineError, SimError, OSError, ValueError)


def _fail(exc: Exception) -> "click.ClickException":
    if isinstance(exc, SheetError):
        # One line per problem so row numbers survive into the diagnostic.
        return click.ClickException("\n".join(str(p) for p in exc.problems))
    return click.ClickException(str(exc))


@click.group()
def main():
    """Question-gated board games: compile banks, simulate, serve, replay."""


@main.group()
def bank():
    """Question bank tooling."""


@bank.command("compile")
@click.option("--in", "sheet", required=True, type=click.Path(exists=True, dir_okay=False),
              help="CSV sheet exported from a spreadsheet.")
@click.option("--lang", default=None, help="Only compile this language (default: all found).")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Directory that receives one folder per language.")
@click.option("--assets-root", type=click.Path(exists=True, file_okay=False), default=None,
              help="Where image_ref paths resolve (default: the sheet's directory).")
def bank_compile(sheet, lang, out_dir, assets_root):
    """Compile a question sheet into per-language bank folders."""
    assets = Path(assets_root) if assets_root else Path(sheet).parent
    try:
        records = parse_sheet_file(sheet)
        languages = [lang] if lang else None
        written = write_banks(records, out_dir, assets, languages=languages)
    except DOMAIN_ERRORS as exc:
        raise _fail(exc)
    for language in sorted(written):
        click.echo(f"wrote {written[language]}")


@bank.command("validate")
@click.option("--in", "sheet", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--assets-root", type=click.Path(exists=True, file_okay=False), default=None,
              help="Also check that every image_ref resolves under this directory.")
def bank_validate(sheet, assets_root):
    """Parse a sheet and report its contents without writing anything."""
    try:
        records = parse_sheet_file(sheet)
        if assets_root:
            from .bank import compile_bank

            for language in sorted({r.language for r in records}):
                compile_bank(records, language, Path(assets_root))
    except DOMAIN_ERRORS as exc:
        raise _fail(exc)
    languages = sorted({r.language for r in records})
    click.echo(f"{len(records)} questions, languages: {', '.join(languages)}")
    for language in languages:
        topics = sorted({r.topic_id for r in records if r.language == language})
        click.echo(f"  {language}: topics {', '.join(topics)}")


@main.command()
@click.option("--game", "kind", required=True,
              type=click.Choice([k.value for k in GameKind]))
@click.option("--speed", type=click.Choice(["normal", "fast"]), default="normal")
@click.option("--games", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--teams", default=2, show_default=True)
@click.option("--accuracy", type=float, default=None,
              help="Chance a team answers correctly (default: always correct).")
@click.option("--compare", is_flag=True,
              help="Run Normal and Fast arms with paired seeds and report the ratio.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Also write report.json, report.csv, and PNG figures here.")
def simulate(kind, speed, games, seed, teams, accuracy, compare, out_dir):
    """Play games headlessly and print a length report."""
    policy = AlwaysCorrect() if accuracy is None else Bernoulli(accuracy)
    started = time.perf_counter()
    try:
        if compare:
            result = compare_speeds(kind, games, seed=seed, teams=teams, policy=policy)
            text = render_comparison(result)
        else:
            config = sim_config(kind, speed=speed, teams=teams, seed=seed)
            result = run_sim(config, policy, games)
            text = render_report(result)
        if out_dir:
            if compare:
                write_comparison_outputs(out_dir, result)
            else:
                write_report_outputs(out_dir, result)
    except DOMAIN_ERRORS as exc:
        raise _fail(exc)
    # Timing goes to stderr so the report bytes stay reproducible.
    click.echo(text, nl=False)
    click.echo(f"elapsed: {time.perf_counter() - started:.2f}s", err=True)
    if out_dir:
        click.echo(f"outputs written to {out_dir}", err=True)


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--banks-dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--boards-dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--session-ttl", default=DEFAULT_SESSION_TTL, show_default=True,
              help="Idle seconds before a session expires.")
def serve(port, banks_dir, boards_dir, session_ttl):
    """Run the HTTP game service."""
    try:
        run_server(port=port, banks_dir=banks_dir, boards_dir=boards_dir, session_ttl=session_ttl)
    except DOMAIN_ERRORS as exc:
        raise _fail(exc)


def _state_summary(state) -> str:
    lines = [
        f"game:   {state.config.kind.value} ({state.config.speed.value})",
        f"turns:  {state.turn_number + 1}   rolls: {state.roll_count}",
    ]
    team = winner(state)
    lines.append(f"winner: {'team ' + str(team) if team is not None else 'none (in progress)'}")
    lines.append(f"phase:  {type(state.phase).__name__}")
    for pid in range(len(state.progress)):
        loc = _loc_json(state, pid)
        where = {
            "on_track": lambda: f"square {loc['square']}",
            "in_corridor": lambda: f"corridor step {loc['step']}",
            "at_home": lambda: "home",
            "finished": lambda: "finished",
        }[loc["kind"]]()
        lines.append(f"  pawn {pid} (team {pid // state.ppt}): {where}")
    return "\n".join(lines)


@main.command()
@click.option("--transcript", "transcript_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--banks-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Needed when the transcript was recorded against compiled banks.")
@click.option("--boards-dir", type=click.Path(exists=True, file_okay=False), default=None)
def replay(transcript_path, banks_dir, boards_dir):
    """Re-run a recorded game and print the final state."""
    try:
        doc = json.loads(Path(transcript_path).read_text(encoding="utf-8"))
        transcript = Transcript.from_json_dict(doc)
        language = transcript.config.language
        if language == SIM_LANGUAGE:
            the_bank = sim_bank()
        else:
            if banks_dir is None:
                raise click.ClickException(
                    f"transcript uses language {language!r}; pass --banks-dir with its bank"
                )
            banks = load_banks_dir(banks_dir)
            if language not in banks:
                raise click.ClickException(f"no bank for language {language!r} under {banks_dir}")
            the_bank = banks[language]
        boards = load_boards_dir(boards_dir)
        final = replay_transcript(transcript, boards[transcript.config.kind], the_bank)
    except click.ClickException:
        raise
    except (DOMAIN_ERRORS, KeyError, json.JSONDecodeError) as exc:
        raise _fail(exc)
    click.echo(_state_summary(final))


if __name__ == "__main__":
    sys.exit(main())
