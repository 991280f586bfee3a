"""Headless Monte Carlo runner measuring game length under answer policies.

Each simulated game gets its own seed derived from the report seed, so arms
that share a seed play paired games and reports are reproducible bit for bit.
"""

import dataclasses
import random
import statistics
from dataclasses import dataclass

from .bank import QuestionBank, QuestionRecord
from .boards import BoardDefinition, GameKind, default_board
from .engine import (
    GameConfig,
    GameState,
    P_ANSWER,
    P_OVER,
    P_ROLL,
    Speed,
    _answer,
    _choose,
    _roll,
)
from .seeding import POLICY_STREAM, game_seed, mix_seed

ACTION_CAP = 10**6

SIM_TOPIC = "general"
SIM_LANGUAGE = "sim"


class SimError(Exception):
    pass


class NonTerminating(SimError):
    """A game blew through the action cap; the rules or the policy are stuck."""


@dataclass(frozen=True)
class AlwaysCorrect:
    def answers_correctly(self, rng: random.Random, team: int) -> bool:
        return True


@dataclass(frozen=True)
class Bernoulli:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise SimError(f"answer probability must be within [0, 1], got {self.p}")

    def answers_correctly(self, rng: random.Random, team: int) -> bool:
        return rng.random() < self.p


AnswerPolicy = AlwaysCorrect | Bernoulli


def sim_bank(language: str = SIM_LANGUAGE) -> QuestionBank:
    """Built-in single-topic bank so simulations need no compiled bank on disk."""
    records = tuple(
        QuestionRecord(
            id=f"sim{i}",
            topic_id=SIM_TOPIC,
            topic_label="General",
            language=language,
            prompt=f"Placeholder question {i}",
            image_ref=None,
            options=("a", "b", "c", "d"),
            correct_index=i % 4,
        )
        for i in range(8)
    )
    return QuestionBank(language=language, records=records)


def sim_config(kind: GameKind | str, *, speed: Speed | str = Speed.NORMAL,
               teams: int = 2, seed: int = 0) -> GameConfig:
    """Config wired to the built-in bank's single topic."""
    return GameConfig(
        kind=kind,
        team_count=teams,
        topics_per_team=tuple(frozenset({SIM_TOPIC}) for _ in range(teams)),
        speed=speed,
        seed=seed,
        language=SIM_LANGUAGE,
    )


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    median: float
    p95: float

    def to_json_dict(self) -> dict:
        return {"mean": self.mean, "median": self.median, "p95": self.p95}


def summarize(values: list[int]) -> MetricSummary:
    if len(values) == 1:
        v = float(values[0])
        return MetricSummary(mean=v, median=v, p95=v)
    p95 = statistics.quantiles(values, n=20, method="inclusive")[18]
    return MetricSummary(
        mean=statistics.fmean(values),
        median=float(statistics.median(values)),
        p95=float(p95),
    )


@dataclass(frozen=True)
class GameSample:
    index: int
    seed: int
    winner: int
    rolls: int
    turns: int


@dataclass(frozen=True)
class SimReport:
    kind: GameKind
    speed: Speed
    games: int
    seed: int
    rolls: MetricSummary
    turns: MetricSummary
    wins: tuple[int, ...]
    samples: tuple[GameSample, ...]

    def to_json_dict(self) -> dict:
        # Samples feed the CSV and figures; the JSON stays summary-only.
        return {
            "kind": self.kind.value,
            "speed": self.speed.value,
            "games": self.games,
            "seed": self.seed,
            "rolls": self.rolls.to_json_dict(),
            "turns": self.turns.to_json_dict(),
            "wins": list(self.wins),
        }


def _play_one(config: GameConfig, board: BoardDefinition, bank: QuestionBank,
              policy: AnswerPolicy, policy_rng: random.Random, action_cap: int) -> GameState:
    state = GameState(config, board, bank)
    actions = 0
    while state.phase_code != P_OVER:
        actions += 1
        if actions > action_cap:
            raise NonTerminating(
                f"game with seed {config.seed} still running after {action_cap} actions"
            )
        if state.phase_code == P_ROLL:
            _roll(state, None)
        elif state.phase_code == P_ANSWER:
            q = state.pending_question
            if policy.answers_correctly(policy_rng, state.current_team):
                _answer(state, q.correct_index, None)
            else:
                _answer(state, (q.correct_index + 1) % len(q.options), None)
        else:
            movable = state.movable
            _choose(state, movable[policy_rng.randrange(len(movable))], None)
    return state


def run_sim(config: GameConfig, policy: AnswerPolicy, games: int, *,
            board: BoardDefinition | None = None, bank: QuestionBank | None = None,
            action_cap: int = ACTION_CAP) -> SimReport:
    if games < 1:
        raise SimError(f"games must be at least 1, got {games}")
    config.validate()
    board = board if board is not None else default_board(config.kind)
    bank = bank if bank is not None else sim_bank(config.language)

    rolls: list[int] = []
    turns: list[int] = []
    wins = [0] * config.team_count
    samples: list[GameSample] = []
    for i in range(games):
        gseed = game_seed(config.seed, i)
        game_cfg = dataclasses.replace(config, seed=gseed)
        policy_rng = random.Random(mix_seed(gseed, POLICY_STREAM))
        final = _play_one(game_cfg, board, bank, policy, policy_rng, action_cap)
        team = final.winner_team
        wins[team] += 1
        # The winning possession never passes, so it is not yet counted.
        game_turns = final.turn_number + 1
        rolls.append(final.roll_count)
        turns.append(game_turns)
        samples.append(GameSample(index=i, seed=gseed, winner=team,
                                  rolls=final.roll_count, turns=game_turns))

    return SimReport(
        kind=config.kind,
        speed=config.speed,
        games=games,
        seed=config.seed,
        rolls=summarize(rolls),
        turns=summarize(turns),
        wins=tuple(wins),
        samples=tuple(samples),
    )


@dataclass(frozen=True)
class SpeedComparison:
    kind: GameKind
    games: int
    seed: int
    normal: SimReport
    fast: SimReport

    @property
    def ratio(self) -> float:
        """Mean rolls Normal over Fast; above 1 means Normal games run longer."""
        return self.normal.rolls.mean / self.fast.rolls.mean

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "games": self.games,
            "seed": self.seed,
            "ratio_normal_over_fast": self.ratio,
            "normal": self.normal.to_json_dict(),
            "fast": self.fast.to_json_dict(),
        }


def compare_speeds(kind: GameKind | str, games: int, *, seed: int = 0, teams: int = 2,
                   policy: AnswerPolicy = AlwaysCorrect(),
                   action_cap: int = ACTION_CAP) -> SpeedComparison:
    """Run paired Normal and Fast arms from the same seed and compare mean rolls."""
    kind = GameKind(kind)
    normal = run_sim(sim_config(kind, speed=Speed.NORMAL, teams=teams, seed=seed),
                     policy, games, action_cap=action_cap)
    fast = run_sim(sim_config(kind, speed=Speed.FAST, teams=teams, seed=seed),
                   policy, games, action_cap=action_cap)
    return SpeedComparison(kind=kind, games=games, seed=seed, normal=normal, fast=fast)
