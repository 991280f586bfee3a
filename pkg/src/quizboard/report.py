"""Rendering for simulation results: text tables, JSON, CSV, and figures."""

import csv
import io
import json
from pathlib import Path

from .sim import SimReport, SpeedComparison

SAMPLE_FIELDS = ("game_index", "seed", "winner", "rolls", "turns")


def render_report(report: SimReport) -> str:
    lines = [
        "simulation report",
        f"  game:  {report.kind.value:<8} speed: {report.speed.value}",
        f"  games: {report.games:<8} seed:  {report.seed}",
        "",
        f"  {'metric':<8}{'mean':>10}{'median':>10}{'p95':>10}",
    ]
    for name, m in (("rolls", report.rolls), ("turns", report.turns)):
        lines.append(f"  {name:<8}{m.mean:>10.2f}{m.median:>10.2f}{m.p95:>10.2f}")
    wins = "  ".join(f"team {t}: {w}" for t, w in enumerate(report.wins))
    lines += ["", f"  wins:  {wins}", ""]
    return "\n".join(lines)


def render_comparison(cmp: SpeedComparison) -> str:
    lines = [
        "speed comparison",
        f"  game:  {cmp.kind.value:<8} games per arm: {cmp.games}   seed: {cmp.seed}",
        "",
        f"  {'arm':<8}{'mean rolls':>12}{'median':>10}{'p95':>10}{'mean turns':>12}",
    ]
    for name, rep in (("normal", cmp.normal), ("fast", cmp.fast)):
        lines.append(
            f"  {name:<8}{rep.rolls.mean:>12.2f}{rep.rolls.median:>10.2f}"
            f"{rep.rolls.p95:>10.2f}{rep.turns.mean:>12.2f}"
        )
    lines += ["", f"  mean-rolls ratio (normal / fast): {cmp.ratio:.3f}", ""]
    return "\n".join(lines)


def _json_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def _samples_csv(arms: list[tuple[str | None, SimReport]]) -> bytes:
    buf = io.StringIO(newline="")
    fields = SAMPLE_FIELDS if arms[0][0] is None else ("arm",) + SAMPLE_FIELDS
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for arm_name, rep in arms:
        for s in rep.samples:
            row = [s.index, s.seed, s.winner, s.rolls, s.turns]
            if arm_name is not None:
                row.insert(0, arm_name)
            writer.writerow(row)
    return buf.getvalue().encode()


def _hist_figure(path: Path, series: list[tuple[str, list[int]]], title: str, xlabel: str):
    # Agg backend only; figures go to files, never to a display.
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for label, values in series:
        ax.hist(values, bins=40, alpha=0.6 if len(series) > 1 else 0.9, label=label)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("games")
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _wins_figure(path: Path, report: SimReport):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    teams = [f"team {t}" for t in range(len(report.wins))]
    ax.bar(teams, report.wins)
    ax.set_title(f"wins per team ({report.kind.value}, {report.speed.value})")
    ax.set_ylabel("wins")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_report_outputs(out_dir: str | Path, report: SimReport) -> list[Path]:
    """Write report.json, report.csv, and PNG figures; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    json_path.write_bytes(_json_bytes(report.to_json_dict()))
    written.append(json_path)

    csv_path = out / "report.csv"
    csv_path.write_bytes(_samples_csv([(None, report)]))
    written.append(csv_path)

    rolls_png = out / "rolls_hist.png"
    _hist_figure(rolls_png, [("rolls", [s.rolls for s in report.samples])],
                 f"rolls per game ({report.kind.value}, {report.speed.value})", "rolls")
    written.append(rolls_png)

    wins_png = out / "wins.png"
    _wins_figure(wins_png, report)
    written.append(wins_png)
    return written


def write_comparison_outputs(out_dir: str | Path, cmp: SpeedComparison) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    json_path.write_bytes(_json_bytes(cmp.to_json_dict()))
    written.append(json_path)

    csv_path = out / "report.csv"
    csv_path.write_bytes(_samples_csv([("normal", cmp.normal), ("fast", cmp.fast)]))
    written.append(csv_path)

    png = out / "rolls_compare.png"
    _hist_figure(
        png,
        [("normal", [s.rolls for s in cmp.normal.samples]),
         ("fast", [s.rolls for s in cmp.fast.samples])],
        f"rolls per game by speed ({cmp.kind.value})",
        "rolls",
    )
    written.append(png)
    return written
