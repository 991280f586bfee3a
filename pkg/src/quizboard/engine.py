"""Turn engines for the three question-gated board games.

One state machine drives all kinds: a roll draws a question, a correct
answer releases the rolled move, an incorrect answer passes the turn with
no pawn change. Goose and Motor race a single pawn per team over a linear
track with data-driven square effects; Parchís runs the full Spanish rule
set (entry on 5, barriers, captures with a 20-step bonus, a 10-step bonus
on finishing, extra roll on 6 with the triple-six penalty, private exact
count corridor in normal speed).

The public operations are pure: they clone the state, mutate the clone and
return it. The underscore-prefixed core mutates in place and is what the
simulation harness drives directly; it takes an optional events list and
skips all event construction when given None, which keeps the per-action
cost low enough for large Monte Carlo runs on one core.

All randomness comes from two independent ``random.Random`` streams (dice
and question selection) derived from the 64-bit config seed, so a
transcript of (config, actions) replays to a bit-identical state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .bank import (
    EmptyTopic,
    QuestionBank,
    QuestionRecord,
    SelectionCursor,
    UnknownTopic,
    select_question,
)
from .boards import BoardDefinition, EffectKind, GameKind
from .seeding import DICE_STREAM, QUESTION_STREAM, mix_seed

ENTRY_FACE = 5          # parchis: the face that brings a pawn out of home
REROLL_FACE = 6         # parchis: grants an extra roll, three in a row punished
CAPTURE_BONUS = 20
FINISH_BONUS = 10


class Speed(str, Enum):
    NORMAL = "normal"
    FAST = "fast"


class DiceMode(str, Enum):
    MANUAL = "manual"
    AUTO = "auto"


class EngineError(Exception):
    pass


class ConfigError(EngineError):
    pass


class KindMismatch(EngineError):
    pass


class WrongPhase(EngineError):
    pass


class ChoiceOutOfRange(EngineError):
    pass


class IllegalMove(EngineError):
    pass


class DivergentAction(EngineError):
    """A transcript action that is illegal at its phase; the transcript is corrupt."""


def dice_bounds(speed: Speed) -> tuple[int, int]:
    return (1, 6) if speed is Speed.NORMAL else (4, 9)


def pawns_per_team(kind: GameKind, speed: Speed) -> int:
    if kind is GameKind.PARCHIS:
        return 4 if speed is Speed.NORMAL else 2
    return 1


@dataclass(frozen=True)
class GameConfig:
    kind: GameKind
    team_count: int
    topics_per_team: tuple[frozenset[str], ...]
    speed: Speed = Speed.NORMAL
    dice_mode: DiceMode = DiceMode.MANUAL
    seed: int = 0
    language: str = "en"

    def __post_init__(self):
        # accept the JSON-friendly spellings (strings, lists of topics)
        try:
            object.__setattr__(self, "kind", GameKind(self.kind))
            object.__setattr__(self, "speed", Speed(self.speed))
            object.__setattr__(self, "dice_mode", DiceMode(self.dice_mode))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        object.__setattr__(
            self, "topics_per_team", tuple(frozenset(t) for t in self.topics_per_team)
        )

    def validate(self) -> None:
        if not isinstance(self.kind, GameKind):
            raise ConfigError(f"bad kind {self.kind!r}")
        if not 2 <= self.team_count <= 4:
            raise ConfigError(f"team_count {self.team_count} not in 2..4")
        if len(self.topics_per_team) != self.team_count:
            raise ConfigError(
                f"{len(self.topics_per_team)} topic sets for {self.team_count} teams"
            )
        for i, topics in enumerate(self.topics_per_team):
            if not topics:
                raise ConfigError(f"team {i} has no topics")
        if not isinstance(self.speed, Speed) or not isinstance(self.dice_mode, DiceMode):
            raise ConfigError("bad speed or dice_mode")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed {self.seed} not a 64-bit unsigned value")
        if not self.language:
            raise ConfigError("empty language tag")


# ---------------------------------------------------------------------------
# Phases and pawn views


@dataclass(frozen=True, slots=True)
class AwaitRoll:
    pass


@dataclass(frozen=True, slots=True)
class AwaitAnswer:
    question_id: str
    face: int


@dataclass(frozen=True, slots=True)
class AwaitMoveChoice:
    face: int
    movable: tuple[int, ...]
    bonus: bool = False


@dataclass(frozen=True, slots=True)
class TurnResolved:
    """Transient marker between an applied move and the next AwaitRoll.

    The engine never rests here: every operation that passes through it
    finishes the turn before returning, so observed states only ever hold
    one of the other phases.
    """


@dataclass(frozen=True, slots=True)
class GameOver:
    team: int


AWAIT_ROLL = AwaitRoll()

# internal phase codes, kept as plain ints on the state for speed
P_ROLL = 0
P_ANSWER = 1
P_CHOICE = 2
P_OVER = 3


@dataclass(frozen=True, slots=True)
class AtHome:
    pass


@dataclass(frozen=True, slots=True)
class OnTrack:
    square: int


@dataclass(frozen=True, slots=True)
class InCorridor:
    step: int


@dataclass(frozen=True, slots=True)
class Finished:
    pass


AT_HOME = AtHome()
FINISHED = Finished()

Location = AtHome | OnTrack | InCorridor | Finished


@dataclass(frozen=True, slots=True)
class Pawn:
    pawn_id: int
    team: int
    location: Location


# ---------------------------------------------------------------------------
# Transcript


ACTION_ROLL = "roll"
ACTION_ANSWER = "answer"
ACTION_CHOOSE = "choose_pawn"


@dataclass
class Transcript:
    """Seed-bearing config plus the ordered actions of one game."""

    config: GameConfig
    actions: list[tuple] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {
                "kind": cfg.kind.value,
                "team_count": cfg.team_count,
                "topics_per_team": [sorted(t) for t in cfg.topics_per_team],
                "speed": cfg.speed.value,
                "dice_mode": cfg.dice_mode.value,
                "seed": cfg.seed,
                "language": cfg.language,
            },
            "actions": [list(a) for a in self.actions],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Transcript":
        c = doc["config"]
        config = GameConfig(
            kind=GameKind(c["kind"]),
            team_count=int(c["team_count"]),
            topics_per_team=tuple(frozenset(t) for t in c["topics_per_team"]),
            speed=Speed(c["speed"]),
            dice_mode=DiceMode(c["dice_mode"]),
            seed=int(c["seed"]),
            language=c["language"],
        )
        actions = []
        for raw in doc["actions"]:
            kind = raw[0]
            if kind == ACTION_ROLL:
                actions.append((ACTION_ROLL,))
            elif kind == ACTION_ANSWER:
                actions.append((ACTION_ANSWER, int(raw[1])))
            elif kind == ACTION_CHOOSE:
                actions.append((ACTION_CHOOSE, int(raw[1])))
            else:
                raise DivergentAction(f"unknown action {raw!r}")
        return cls(config=config, actions=actions)


# ---------------------------------------------------------------------------
# Game state


class GameState:
    """Full engine state for one game.

    ``progress`` holds one integer per pawn. Goose/Motor: the square number,
    with the goal square meaning finished. Parchís: 0 = home, 1..ring_steps =
    position along the team's own ring path, then corridor steps, and
    ``goal_progress`` = finished. ``occ``/``barriers`` are derived caches of
    the ring occupancy, maintained incrementally.
    """

    __slots__ = (
        "config", "board", "bank", "cursor", "rng",
        "progress", "current_team", "skip_counters", "consecutive_sixes",
        "bonus_queue", "last_moved", "turn_number", "roll_count", "last_face",
        "phase_code", "pending_question", "pending_face", "movable",
        "movable_bonus", "pending_extra_roll", "winner_team",
        "ppt", "ring", "entry_squares", "occ", "safe_mask",
        "ring_steps", "goal_progress", "goal", "fast", "is_parchis",
    )

    def __init__(self, config: GameConfig, board: BoardDefinition, bank: QuestionBank):
        config.validate()
        if board.kind is not config.kind:
            raise KindMismatch(f"board is {board.kind.value}, config wants {config.kind.value}")
        if bank.language != config.language:
            raise EmptyTopic(
                f"no questions for language {config.language!r} (bank is {bank.language!r})"
            )
        for i, topics in enumerate(config.topics_per_team):
            missing = topics - bank.topics.keys()
            if missing:
                raise UnknownTopic(f"team {i}: topics not in bank: {sorted(missing)}")
        self.config = config
        self.board = board
        self.bank = bank
        self.cursor = SelectionCursor.from_seed(mix_seed(config.seed, QUESTION_STREAM))
        self.rng = random.Random(mix_seed(config.seed, DICE_STREAM))

        self.fast = config.speed is Speed.FAST
        self.is_parchis = config.kind is GameKind.PARCHIS
        self.ppt = pawns_per_team(config.kind, config.speed)
        n = config.team_count * self.ppt
        self.current_team = 0
        self.skip_counters = [0] * config.team_count
        self.consecutive_sixes = 0
        self.bonus_queue: list[int] = []
        self.last_moved: list[int | None] = [None] * config.team_count
        self.turn_number = 0
        self.roll_count = 0
        self.last_face: int | None = None
        self.phase_code = P_ROLL
        self.pending_question: QuestionRecord | None = None
        self.pending_face = 0
        self.movable: tuple[int, ...] = ()
        self.movable_bonus = False
        self.pending_extra_roll = False
        self.winner_team: int | None = None

        if self.is_parchis:
            self.progress = [0] * n
            self.ring_steps = board.ring_steps
            self.goal_progress = board.goal_progress
            self.goal = 0
            self.entry_squares = board.start_squares[: config.team_count]
            # ring[t][p] = the ring square under team t's pawn at progress p
            self.ring = tuple(
                (0,) + tuple(board.ring_square(t, p) for p in range(1, board.ring_steps + 1))
                for t in range(config.team_count)
            )
            self.occ: list[list[int]] | None = [[] for _ in range(board.square_count + 1)]
            mask = bytearray(board.square_count + 1)
            for sq in board.safe_squares:
                mask[sq] = 1
            self.safe_mask: bytearray | None = mask
        else:
            self.progress = [1] * n
            self.ring_steps = 0
            self.goal_progress = 0
            self.goal = board.goal or board.square_count
            self.entry_squares = ()
            self.ring = ()
            self.occ = None
            self.safe_mask = None

    # -- copying and equality ------------------------------------------------

    def clone(self) -> "GameState":
        other = object.__new__(GameState)
        other.config = self.config
        other.board = self.board
        other.bank = self.bank
        other.cursor = _clone_cursor(self.cursor)
        other.rng = random.Random()
        other.rng.setstate(self.rng.getstate())
        other.progress = self.progress.copy()
        other.current_team = self.current_team
        other.skip_counters = self.skip_counters.copy()
        other.consecutive_sixes = self.consecutive_sixes
        other.bonus_queue = self.bonus_queue.copy()
        other.last_moved = self.last_moved.copy()
        other.turn_number = self.turn_number
        other.roll_count = self.roll_count
        other.last_face = self.last_face
        other.phase_code = self.phase_code
        other.pending_question = self.pending_question
        other.pending_face = self.pending_face
        other.movable = self.movable
        other.movable_bonus = self.movable_bonus
        other.pending_extra_roll = self.pending_extra_roll
        other.winner_team = self.winner_team
        other.ppt = self.ppt
        other.ring = self.ring
        other.entry_squares = self.entry_squares
        other.occ = [l.copy() for l in self.occ] if self.occ is not None else None
        other.safe_mask = self.safe_mask
        other.ring_steps = self.ring_steps
        other.goal_progress = self.goal_progress
        other.goal = self.goal
        other.fast = self.fast
        other.is_parchis = self.is_parchis
        return other

    def fingerprint(self) -> tuple:
        """Everything that defines the state, including both RNG streams."""
        cursor_state = tuple(
            (team, tuple(sorted(pool.topic_key)), tuple(pool.order), pool.pos)
            for team, pool in sorted(self.cursor.pools.items())
        )
        return (
            self.config,
            tuple(self.progress),
            self.current_team,
            self.phase_code,
            self.pending_question.id if self.pending_question else None,
            self.pending_face,
            self.movable,
            self.movable_bonus,
            self.pending_extra_roll,
            tuple(self.skip_counters),
            self.consecutive_sixes,
            tuple(self.bonus_queue),
            tuple(self.last_moved),
            self.turn_number,
            self.roll_count,
            self.last_face,
            self.winner_team,
            self.rng.getstate(),
            self.cursor.rng.getstate(),
            cursor_state,
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GameState) and self.fingerprint() == other.fingerprint()

    def __repr__(self) -> str:
        return (
            f"GameState({self.config.kind.value}, team={self.current_team}, "
            f"phase={self.phase!r}, progress={self.progress})"
        )

    # -- views ---------------------------------------------------------------

    @property
    def phase(self):
        code = self.phase_code
        if code == P_ROLL:
            return AWAIT_ROLL
        if code == P_ANSWER:
            return AwaitAnswer(self.pending_question.id, self.pending_face)
        if code == P_CHOICE:
            return AwaitMoveChoice(self.pending_face, self.movable, self.movable_bonus)
        return GameOver(self.winner_team)

    @property
    def pending_bonus(self) -> int | None:
        return self.bonus_queue[0] if self.bonus_queue else None

    def pawn_location(self, pawn_id: int) -> Location:
        p = self.progress[pawn_id]
        if not self.is_parchis:
            return FINISHED if p == self.goal else OnTrack(p)
        if p == 0:
            return AT_HOME
        if p <= self.ring_steps:
            return OnTrack(self.ring[pawn_id // self.ppt][p])
        if p < self.goal_progress:
            return InCorridor(p - self.ring_steps)
        return FINISHED

    @property
    def pawns(self) -> list[Pawn]:
        return [
            Pawn(pid, pid // self.ppt, self.pawn_location(pid))
            for pid in range(len(self.progress))
        ]


def _clone_cursor(cursor: SelectionCursor) -> SelectionCursor:
    from .bank import _TeamPool

    rng = random.Random()
    rng.setstate(cursor.rng.getstate())
    clone = SelectionCursor(rng=rng)
    for team, pool in cursor.pools.items():
        clone.pools[team] = _TeamPool(pool.topic_key, pool.order.copy(), pool.pos)
    return clone


# ---------------------------------------------------------------------------
# Events

# Events are plain dicts with a "type" key so they serialize to JSON as-is.
# Every mutating core function takes events=None and skips construction
# entirely on the simulation fast path.


def _loc_json(state: GameState, pawn_id: int) -> dict:
    loc = state.pawn_location(pawn_id)
    if type(loc) is OnTrack:
        return {"kind": "on_track", "square": loc.square}
    if type(loc) is InCorridor:
        return {"kind": "in_corridor", "step": loc.step}
    if type(loc) is AtHome:
        return {"kind": "at_home"}
    return {"kind": "finished"}


# ---------------------------------------------------------------------------
# Core turn flow (mutating)


def _advance_turn(state: GameState, events: list | None) -> None:
    """Pass possession to the next team, consuming skip counters on the way."""
    state.consecutive_sixes = 0
    state.pending_extra_roll = False
    state.pending_question = None
    state.movable = ()
    teams = state.config.team_count
    team = state.current_team
    while True:
        team = (team + 1) % teams
        if state.skip_counters[team] > 0:
            state.skip_counters[team] -= 1
            if events is not None:
                events.append({"type": "team_skipped", "team": team,
                               "remaining": state.skip_counters[team]})
            continue
        break
    if events is not None and team != state.current_team:
        events.append({"type": "turn_passed", "from_team": state.current_team, "to_team": team})
    state.current_team = team
    state.turn_number += 1
    state.phase_code = P_ROLL


def _grant_reroll(state: GameState, events: list | None) -> None:
    state.pending_extra_roll = False
    state.pending_question = None
    state.movable = ()
    state.phase_code = P_ROLL
    if events is not None:
        events.append({"type": "extra_roll", "team": state.current_team})


def _finish_turn(state: GameState, events: list | None) -> None:
    if state.pending_extra_roll:
        _grant_reroll(state, events)
    else:
        _advance_turn(state, events)


def _win(state: GameState, team: int, events: list | None) -> None:
    state.winner_team = team
    state.phase_code = P_OVER
    state.bonus_queue.clear()
    state.pending_question = None
    state.movable = ()
    state.pending_extra_roll = False
    if events is not None:
        events.append({"type": "win", "team": team})


def _roll(state: GameState, events: list | None) -> int:
    if state.phase_code != P_ROLL:
        raise WrongPhase(f"roll_dice at {state.phase!r}")
    if state.fast:
        face = state.rng.randrange(4, 10)
    else:
        face = state.rng.randrange(1, 7)
    team = state.current_team
    question, _ = select_question(
        state.bank, state.cursor, team, state.config.topics_per_team[team]
    )
    state.pending_question = question
    state.pending_face = face
    state.last_face = face
    state.roll_count += 1
    state.phase_code = P_ANSWER
    if events is not None:
        events.append({"type": "roll", "team": team, "face": face})
        events.append({"type": "question", "question_id": question.id,
                       "topic_id": question.topic_id})
    return face


def _answer(state: GameState, choice: int, events: list | None) -> bool:
    if state.phase_code != P_ANSWER:
        raise WrongPhase(f"submit_answer at {state.phase!r}")
    question = state.pending_question
    if not 0 <= choice < len(question.options):
        raise ChoiceOutOfRange(
            f"choice {choice} out of range for {len(question.options)} options"
        )
    correct = choice == question.correct_index
    if events is not None:
        events.append({"type": "answer", "team": state.current_team,
                       "choice": choice, "correct": correct})
    if not correct:
        _advance_turn(state, events)
        return False
    _resolve_correct(state, state.pending_face, events)
    return True


def _resolve_correct(state: GameState, face: int, events: list | None) -> None:
    """Release the rolled move after a correct answer (or a forced apply)."""
    if state.is_parchis:
        _parchis_resolve_roll(state, face, events)
    else:
        _race_move(state, face, events)


# ---------------------------------------------------------------------------
# Goose / Motor movement


def _race_move(state: GameState, face: int, events: list | None) -> None:
    team = state.current_team
    start = state.progress[team]
    goal = state.goal
    target = start + face
    bounced = False
    if target >= goal:
        if target == goal or state.fast or state.config.kind is GameKind.MOTOR:
            # exact hit, or reach-or-pass rules
            state.progress[team] = goal
            if events is not None:
                events.append({"type": "move", "pawn_id": team, "from_square": start,
                               "to_square": goal})
                events.append({"type": "finish", "pawn_id": team})
            _win(state, team, events)
            return
        # goose normal: bounce back by the excess; the landing square's
        # effect does not re-trigger
        target = goal - (target - goal)
        bounced = True
    state.progress[team] = target
    if events is not None:
        events.append({"type": "move", "pawn_id": team, "from_square": start,
                       "to_square": target})
        if bounced:
            events.append({"type": "bounce", "pawn_id": team, "square": target})
    if not bounced:
        _apply_square_effect(state, team, target, events)
        if state.phase_code == P_OVER:
            return
    _finish_turn(state, events)


def _apply_square_effect(state: GameState, team: int, square: int, events: list | None) -> None:
    """Resolve the landed square: at most one jump, then the target's non-jump effect."""
    eff = state.board.effects.get(square)
    if eff is None:
        return
    kind = eff.kind
    if kind is EffectKind.JUMP_TO:
        target = eff.target
        if eff.extra_roll:
            state.pending_extra_roll = True
        state.progress[team] = target
        if events is not None:
            events.append({"type": "jump", "pawn_id": team, "from_square": square,
                           "to_square": target, "extra_roll": eff.extra_roll})
        if target == state.goal:
            if events is not None:
                events.append({"type": "finish", "pawn_id": team})
            _win(state, team, events)
            return
        follow = state.board.effects.get(target)
        if follow is None or follow.kind is EffectKind.JUMP_TO:
            return
        eff, kind, square = follow, follow.kind, target
    if kind is EffectKind.EXTRA_ROLL:
        state.pending_extra_roll = True
        if events is not None:
            events.append({"type": "extra_roll_square", "square": square})
    elif kind is EffectKind.SKIP_TURNS:
        state.skip_counters[team] += eff.turns
        if events is not None:
            events.append({"type": "skip_turns_added", "team": team, "turns": eff.turns})
    elif kind is EffectKind.BACK_TO_START:
        state.progress[team] = 1
        if events is not None:
            events.append({"type": "back_to_start", "pawn_id": team})


# ---------------------------------------------------------------------------
# Parchís movement


def _parchis_resolve_roll(state: GameState, face: int, events: list | None) -> None:
    team = state.current_team
    if face == REROLL_FACE:
        if state.consecutive_sixes == 2:
            # third six in a row: the last pawn moved on the ring goes home,
            # nothing else moves, and the turn ends without the extra roll
            state.consecutive_sixes = 0
            state.pending_extra_roll = False
            victim = state.last_moved[team]
            if victim is not None and 1 <= state.progress[victim] <= state.ring_steps:
                _send_home(state, victim)
                if events is not None:
                    events.append({"type": "third_six_penalty", "team": team,
                                   "pawn_id": victim})
            elif events is not None:
                events.append({"type": "third_six_penalty", "team": team, "pawn_id": None})
            _advance_turn(state, events)
            return
        state.consecutive_sixes += 1
        state.pending_extra_roll = True
    else:
        state.consecutive_sixes = 0
        state.pending_extra_roll = False
    movable = _parchis_legal(state, team, face)
    if not movable:
        if events is not None:
            events.append({"type": "turn_forfeited", "team": team, "face": face})
        _finish_turn(state, events)
        return
    if len(movable) == 1 or state.progress[movable[0]] == 0:
        # a single option, or the mandatory entry where all listed pawns are
        # interchangeable home pawns: move without asking
        _parchis_apply(state, movable[0], face, events)
        if state.phase_code == P_OVER:
            return
        if _drain_bonuses(state, events):
            _finish_turn(state, events)
        return
    state.pending_face = face
    state.movable = movable
    state.movable_bonus = False
    state.phase_code = P_CHOICE
    if events is not None:
        events.append({"type": "move_choice", "team": team, "face": face,
                       "movable": list(movable)})


def _entry_blocked(state: GameState, team: int) -> bool:
    occ = state.occ[state.entry_squares[team]]
    if len(occ) < 2:
        return False
    ppt = state.ppt
    own = (occ[0] // ppt == team) + (occ[1] // ppt == team)
    # blocked by two own pawns or by two enemies; one own plus one enemy
    # leaves room because the entry captures the enemy
    return own != 1


def _pawn_can_step(state: GameState, pid: int, team: int, steps: int) -> bool:
    """Rule-legality of moving one on-board pawn by steps (no entry here)."""
    p = state.progress[pid]
    if p == 0 or p >= state.goal_progress:
        return False
    q = p + steps
    ring_steps = state.ring_steps
    if p > ring_steps:
        # in the corridor: free movement, exact count to finish unless fast
        return q <= state.goal_progress or state.fast
    occ = state.occ
    ring_t = state.ring[team]
    ppt = state.ppt
    if q > ring_steps:
        if q > state.goal_progress and not state.fast:
            return False
        # passes over the remaining ring squares into the corridor
        for i in range(p + 1, ring_steps + 1):
            sq_occ = occ[ring_t[i]]
            if len(sq_occ) == 2 and sq_occ[0] // ppt == sq_occ[1] // ppt:
                return False
        return True
    for i in range(p + 1, q):
        sq_occ = occ[ring_t[i]]
        if len(sq_occ) == 2 and sq_occ[0] // ppt == sq_occ[1] // ppt:
            return False
    return len(occ[ring_t[q]]) < 2


def _parchis_legal(state: GameState, team: int, face: int) -> tuple[int, ...]:
    """Movable pawns for a rolled face, honouring the mandatory entry on 5."""
    ppt = state.ppt
    base = team * ppt
    progress = state.progress
    if face == ENTRY_FACE:
        home = [base + i for i in range(ppt) if progress[base + i] == 0]
        if home and not _entry_blocked(state, team):
            return tuple(home)
    return tuple(
        pid for pid in range(base, base + ppt) if _pawn_can_step(state, pid, team, face)
    )


def _parchis_bonus_legal(state: GameState, team: int, steps: int) -> tuple[int, ...]:
    """Bonus counts move only pawns already on the board; no entry, no mandate."""
    base = team * state.ppt
    return tuple(
        pid
        for pid in range(base, base + state.ppt)
        if _pawn_can_step(state, pid, team, steps)
    )


def _send_home(state: GameState, pid: int) -> None:
    team = pid // state.ppt
    sq = state.ring[team][state.progress[pid]]
    state.occ[sq].remove(pid)
    state.progress[pid] = 0


def _parchis_apply(state: GameState, pid: int, steps: int, events: list | None) -> None:
    """Apply one legal move (entry or step); queues any earned bonuses."""
    team = pid // state.ppt
    ppt = state.ppt
    occ = state.occ
    p = state.progress[pid]
    if p == 0:
        # entry from home onto the team's start square, capturing a lone enemy
        sq = state.entry_squares[team]
        landed = occ[sq]
        victim = next((x for x in landed if x // ppt != team), None)
        if victim is not None:
            _send_home(state, victim)
            state.bonus_queue.append(CAPTURE_BONUS)
            if events is not None:
                events.append({"type": "capture", "pawn_id": pid, "victim": victim,
                               "square": sq, "bonus": CAPTURE_BONUS})
        state.progress[pid] = 1
        occ[sq].append(pid)
        state.last_moved[team] = pid
        if events is not None:
            events.append({"type": "enter", "pawn_id": pid, "square": sq})
        return
    q = p + steps
    ring_steps = state.ring_steps
    goal = state.goal_progress
    if q > goal:
        # only reachable in fast speed; reach-or-pass finishes
        q = goal
    from_json = _loc_json(state, pid) if events is not None else None
    if p <= ring_steps:
        occ[state.ring[team][p]].remove(pid)
    if q <= ring_steps:
        sq = state.ring[team][q]
        landed = occ[sq]
        if landed and not state.safe_mask[sq]:
            victim = landed[0]
            if victim // ppt != team:
                _send_home(state, victim)
                state.bonus_queue.append(CAPTURE_BONUS)
                if events is not None:
                    events.append({"type": "capture", "pawn_id": pid, "victim": victim,
                                   "square": sq, "bonus": CAPTURE_BONUS})
        occ[sq].append(pid)
    state.progress[pid] = q
    state.last_moved[team] = pid
    if events is not None:
        events.append({"type": "move", "pawn_id": pid, "from": from_json,
                       "to": _loc_json(state, pid)})
    if q == goal:
        if events is not None:
            events.append({"type": "finish", "pawn_id": pid})
        base = team * ppt
        if all(state.progress[base + i] == goal for i in range(ppt)):
            _win(state, team, events)
            return
        state.bonus_queue.append(FINISH_BONUS)


def _drain_bonuses(state: GameState, events: list | None) -> bool:
    """Apply queued bonus counts; returns False when paused for a pawn choice."""
    team = state.current_team
    while state.bonus_queue:
        steps = state.bonus_queue[0]
        movable = _parchis_bonus_legal(state, team, steps)
        if not movable:
            state.bonus_queue.pop(0)
            if events is not None:
                events.append({"type": "bonus_forfeited", "team": team, "steps": steps})
            continue
        if len(movable) == 1:
            state.bonus_queue.pop(0)
            if events is not None:
                events.append({"type": "bonus", "team": team, "steps": steps})
            _parchis_apply(state, movable[0], steps, events)
            if state.phase_code == P_OVER:
                return False
            continue
        state.pending_face = steps
        state.movable = movable
        state.movable_bonus = True
        state.phase_code = P_CHOICE
        if events is not None:
            events.append({"type": "move_choice", "team": team, "face": steps,
                           "movable": list(movable), "bonus": True})
        return False
    return True


def _choose(state: GameState, pawn_id: int, events: list | None) -> None:
    if state.phase_code != P_CHOICE:
        raise WrongPhase(f"choose_pawn at {state.phase!r}")
    if pawn_id not in state.movable:
        raise IllegalMove(f"pawn {pawn_id} not in movable set {state.movable}")
    steps = state.pending_face
    if state.movable_bonus:
        state.bonus_queue.pop(0)
        if events is not None:
            events.append({"type": "bonus", "team": state.current_team, "steps": steps})
    state.movable = ()
    state.movable_bonus = False
    state.phase_code = P_ROLL  # placeholder until the turn resolves below
    _parchis_apply(state, pawn_id, steps, events)
    if state.phase_code == P_OVER:
        return
    if _drain_bonuses(state, events):
        _finish_turn(state, events)


# ---------------------------------------------------------------------------
# Public operations (pure)


def new_game(config: GameConfig, board: BoardDefinition, bank: QuestionBank) -> GameState:
    return GameState(config, board, bank)


def roll_dice(state: GameState, events: list | None = None) -> tuple[int, GameState]:
    out = state.clone()
    face = _roll(out, events)
    return face, out


def submit_answer(state: GameState, choice: int, events: list | None = None) -> tuple[bool, GameState]:
    out = state.clone()
    correct = _answer(out, choice, events)
    return correct, out


def choose_pawn(state: GameState, pawn_id: int, events: list | None = None) -> tuple[GameState, list]:
    if events is None:
        events = []
    out = state.clone()
    _choose(out, pawn_id, events)
    return out, events


def legal_moves(state: GameState, face: int) -> list[int]:
    """Movable pawns of the current team for a hypothetical face."""
    if not state.is_parchis:
        team = state.current_team
        return [team] if state.progress[team] != state.goal else []
    if state.phase_code == P_CHOICE and state.movable_bonus and face == state.pending_face:
        return list(state.movable)
    return list(_parchis_legal(state, state.current_team, face))


def apply_move(state: GameState, pawn_id: int, face: int, events: list | None = None) -> tuple[GameState, list]:
    """Apply a move directly, bypassing the question.

    At AwaitMoveChoice this resolves the pending choice (face must match the
    rolled one). At AwaitRoll it applies the move as if `face` had been
    rolled and answered correctly, which is what simulation-free tools and
    tests use to exercise movement rules in isolation.
    """
    if events is None:
        events = []
    out = state.clone()
    if out.phase_code == P_CHOICE:
        if face != out.pending_face:
            raise IllegalMove(f"face {face} does not match pending {out.pending_face}")
        _choose(out, pawn_id, events)
        return out, events
    if out.phase_code != P_ROLL:
        raise WrongPhase(f"apply_move at {out.phase!r}")
    lo, hi = dice_bounds(out.config.speed)
    if not lo <= face <= hi:
        raise IllegalMove(f"face {face} outside {lo}..{hi}")
    if out.is_parchis:
        if pawn_id not in _parchis_legal(out, out.current_team, face):
            raise IllegalMove(f"pawn {pawn_id} has no legal move of {face}")
        out.last_face = face
        _parchis_resolve_roll_forced(out, pawn_id, face, events)
    else:
        if pawn_id != out.current_team or out.progress[pawn_id] == out.goal:
            raise IllegalMove(f"pawn {pawn_id} cannot move")
        out.last_face = face
        _race_move(out, face, events)
    return out, events


def _parchis_resolve_roll_forced(state: GameState, pawn_id: int, face: int, events: list | None) -> None:
    """The correct-answer resolution with the pawn choice pre-made.

    Bypasses the triple-six accounting (there was no real roll chain); a 6
    still grants the extra roll so turn flow stays faithful.
    """
    state.consecutive_sixes = 0
    state.pending_extra_roll = face == REROLL_FACE
    _parchis_apply(state, pawn_id, face, events)
    if state.phase_code == P_OVER:
        return
    if _drain_bonuses(state, events):
        _finish_turn(state, events)


def winner(state: GameState) -> int | None:
    if state.winner_team is not None:
        return state.winner_team
    if state.is_parchis:
        goal = state.goal_progress
        ppt = state.ppt
        for team in range(state.config.team_count):
            base = team * ppt
            if all(state.progress[base + i] == goal for i in range(ppt)):
                return team
        return None
    for team in range(state.config.team_count):
        if state.progress[team] == state.goal:
            return team
    return None


# ---------------------------------------------------------------------------
# Transcript replay


def apply_action(state: GameState, action: tuple, events: list | None = None) -> None:
    """Mutating dispatch of one transcript action; used by replay and the service."""
    kind = action[0]
    try:
        if kind == ACTION_ROLL:
            _roll(state, events)
        elif kind == ACTION_ANSWER:
            _answer(state, action[1], events)
        elif kind == ACTION_CHOOSE:
            _choose(state, action[1], events)
        else:
            raise DivergentAction(f"unknown action {action!r}")
    except (WrongPhase, ChoiceOutOfRange, IllegalMove) as exc:
        raise DivergentAction(f"action {action!r}: {exc}") from exc


def replay(transcript: Transcript, board: BoardDefinition, bank: QuestionBank) -> GameState:
    """Re-run a recorded game; lands on the identical final state every time."""
    state = GameState(transcript.config, board, bank)
    for action in transcript.actions:
        apply_action(state, action)
    return state
