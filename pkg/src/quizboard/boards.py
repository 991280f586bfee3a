"""Board definitions: square counts, special-square effects, per-kind extras.

Boards are plain data loaded from JSON files so rule variants are data
changes, not code changes. The three default boards ship with the package
under ``quizboard/data/boards/``. The file format is documented in
``docs/board-format.md``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path


class GameKind(str, Enum):
    GOOSE = "goose"
    PARCHIS = "parchis"
    MOTOR = "motor"


class EffectKind(str, Enum):
    NONE = "none"
    JUMP_TO = "jump_to"
    EXTRA_ROLL = "extra_roll"
    SKIP_TURNS = "skip_turns"
    BACK_TO_START = "back_to_start"
    SAFE = "safe"
    TEAM_START = "team_start"


class BoardError(ValueError):
    """Raised for malformed or inconsistent board definitions."""


@dataclass(frozen=True)
class SquareEffect:
    kind: EffectKind
    target: int | None = None      # JUMP_TO destination
    extra_roll: bool = False       # JUMP_TO may also grant a re-roll
    turns: int = 0                 # SKIP_TURNS count, >= 1
    team: int | None = None        # TEAM_START owner


@dataclass(frozen=True)
class BoardDefinition:
    """Immutable board data shared by every game built on it."""

    kind: GameKind
    square_count: int
    effects: dict[int, SquareEffect] = field(default_factory=dict)
    goal: int | None = None                    # goose/motor: final square
    start_squares: tuple[int, ...] = ()        # parchis: per-team entry squares
    safe_squares: frozenset[int] = frozenset() # parchis: capture-proof squares
    ring_steps: int = 0                        # parchis: ring squares traversed entry->corridor
    corridor_length: int = 0                   # parchis: private final stretch

    def validate(self) -> None:
        if self.square_count < 2:
            raise BoardError("square_count must be at least 2")
        for square, eff in self.effects.items():
            if not 1 <= square <= self.square_count:
                raise BoardError(f"effect square {square} outside 1..{self.square_count}")
            if eff.kind is EffectKind.JUMP_TO:
                if eff.target is None or not 1 <= eff.target <= self.square_count:
                    raise BoardError(f"jump target {eff.target} outside board at square {square}")
            if eff.kind is EffectKind.SKIP_TURNS and eff.turns < 1:
                raise BoardError(f"skip_turns at square {square} must skip at least 1 turn")
        if self.kind in (GameKind.GOOSE, GameKind.MOTOR):
            if self.goal != self.square_count:
                raise BoardError(f"{self.kind.value} goal must equal square_count")
        else:
            if not self.start_squares:
                raise BoardError("parchis board needs start_squares")
            if self.corridor_length < 1:
                raise BoardError("parchis corridor_length must be >= 1")
            if not 1 <= self.ring_steps <= self.square_count:
                raise BoardError("parchis ring_steps must be within the ring")
            for sq in self.start_squares:
                if not 1 <= sq <= self.square_count:
                    raise BoardError(f"start square {sq} outside the ring")
            for sq in self.safe_squares:
                if not 1 <= sq <= self.square_count:
                    raise BoardError(f"safe square {sq} outside the ring")

    # parchis geometry: a pawn's track progress p (1-based, 1 = its entry
    # square) maps onto the shared ring for the first ring_steps steps,
    # then into the team's private corridor; goal_progress finishes.
    def ring_square(self, team: int, progress: int) -> int:
        entry = self.start_squares[team]
        return (entry - 1 + progress - 1) % self.square_count + 1

    @property
    def goal_progress(self) -> int:
        return self.ring_steps + self.corridor_length + 1


def effect_from_json(obj: dict) -> tuple[int, SquareEffect]:
    try:
        square = int(obj["square"])
        kind = EffectKind(obj["effect"])
    except (KeyError, ValueError) as exc:
        raise BoardError(f"bad effect entry {obj!r}") from exc
    return square, SquareEffect(
        kind=kind,
        target=int(obj["target"]) if "target" in obj else None,
        extra_roll=bool(obj.get("extra_roll", False)),
        turns=int(obj.get("turns", 0)),
        team=int(obj["team"]) if "team" in obj else None,
    )


def board_from_json(text: str | bytes) -> BoardDefinition:
    """Parse and validate a board definition document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BoardError(f"board file is not valid JSON: {exc}") from exc
    try:
        kind = GameKind(doc["kind"])
        square_count = int(doc["square_count"])
    except (KeyError, ValueError) as exc:
        raise BoardError(f"board document missing kind/square_count: {exc}") from exc

    effects: dict[int, SquareEffect] = {}
    safe = set(int(s) for s in doc.get("safe_squares", []))
    starts = [int(s) for s in doc.get("start_squares", [])]
    for entry in doc.get("effects", []):
        square, eff = effect_from_json(entry)
        # safe / team_start entries are folded into the dedicated sets so the
        # engine has one place to look for each rule.
        if eff.kind is EffectKind.SAFE:
            safe.add(square)
        elif eff.kind is EffectKind.TEAM_START:
            if eff.team is None:
                raise BoardError(f"team_start at {square} needs a team")
            while len(starts) <= eff.team:
                starts.append(0)
            starts[eff.team] = square
        else:
            effects[square] = eff

    board = BoardDefinition(
        kind=kind,
        square_count=square_count,
        effects=effects,
        goal=int(doc["goal"]) if "goal" in doc else (square_count if kind is not GameKind.PARCHIS else None),
        start_squares=tuple(starts),
        safe_squares=frozenset(safe),
        ring_steps=int(doc.get("ring_steps", 0)),
        corridor_length=int(doc.get("corridor_length", 0)),
    )
    board.validate()
    return board


def board_to_json(board: BoardDefinition) -> str:
    doc: dict = {"kind": board.kind.value, "square_count": board.square_count}
    if board.goal is not None:
        doc["goal"] = board.goal
    if board.kind is GameKind.PARCHIS:
        doc["start_squares"] = list(board.start_squares)
        doc["safe_squares"] = sorted(board.safe_squares)
        doc["ring_steps"] = board.ring_steps
        doc["corridor_length"] = board.corridor_length
    effects = []
    for square in sorted(board.effects):
        eff = board.effects[square]
        entry: dict = {"square": square, "effect": eff.kind.value}
        if eff.target is not None:
            entry["target"] = eff.target
        if eff.extra_roll:
            entry["extra_roll"] = True
        if eff.turns:
            entry["turns"] = eff.turns
        effects.append(entry)
    doc["effects"] = effects
    return json.dumps(doc, indent=2) + "\n"


def load_board_file(path: str | Path) -> BoardDefinition:
    return board_from_json(Path(path).read_text(encoding="utf-8"))


def default_board(kind: GameKind) -> BoardDefinition:
    """The packaged board for ``kind``."""
    data = resources.files("quizboard.data.boards").joinpath(f"{kind.value}.json")
    return board_from_json(data.read_text(encoding="utf-8"))


def load_boards_dir(path: str | Path | None) -> dict[GameKind, BoardDefinition]:
    """Boards for all kinds, preferring ``<dir>/<kind>.json`` over the packaged ones."""
    boards: dict[GameKind, BoardDefinition] = {}
    for kind in GameKind:
        override = Path(path) / f"{kind.value}.json" if path is not None else None
        if override is not None and override.exists():
            board = load_board_file(override)
            if board.kind is not kind:
                raise BoardError(f"{override} declares kind {board.kind.value}, expected {kind.value}")
            boards[kind] = board
        else:
            boards[kind] = default_board(kind)
    return boards
