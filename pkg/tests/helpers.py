"""Shared test utilities: quick game construction and direct state surgery."""

import random

from quizboard.bank import QuestionBank
from quizboard.boards import GameKind, default_board
from quizboard.engine import (
    P_ANSWER,
    P_CHOICE,
    P_OVER,
    P_ROLL,
    DiceMode,
    GameConfig,
    GameState,
    Speed,
    _answer,
    _choose,
    _roll,
)


def make_config(kind, bank: QuestionBank, teams=2, speed=Speed.NORMAL, seed=0, **kw):
    topics = frozenset(bank.topics)
    return GameConfig(
        kind=kind,
        team_count=teams,
        topics_per_team=tuple(topics for _ in range(teams)),
        speed=speed,
        seed=seed,
        language=bank.language,
        **kw,
    )


def make_game(kind, bank: QuestionBank, teams=2, speed=Speed.NORMAL, seed=0, board=None, **kw):
    config = make_config(kind, bank, teams=teams, speed=speed, seed=seed, **kw)
    return GameState(config, board if board is not None else default_board(kind), bank)


def place(state: GameState, positions: dict[int, int]) -> GameState:
    """Teleport pawns to raw progress values and rebuild the occupancy cache."""
    for pid, p in positions.items():
        state.progress[pid] = p
    if state.is_parchis:
        for occupants in state.occ:
            occupants.clear()
        for pid, p in enumerate(state.progress):
            if 1 <= p <= state.ring_steps:
                state.occ[state.ring[pid // state.ppt][p]].append(pid)
    return state


def play_out(state: GameState, *, policy_rng=None, correct_rate=1.0, max_actions=200_000):
    """Drive a game to completion with the mutating core; returns action count."""
    rng = policy_rng or random.Random(0xC0FFEE)
    actions = 0
    while state.phase_code != P_OVER:
        if actions >= max_actions:
            raise AssertionError(f"game did not terminate within {max_actions} actions")
        actions += 1
        if state.phase_code == P_ROLL:
            _roll(state, None)
        elif state.phase_code == P_ANSWER:
            q = state.pending_question
            if correct_rate >= 1.0 or rng.random() < correct_rate:
                _answer(state, q.correct_index, None)
            else:
                wrong = (q.correct_index + 1) % len(q.options)
                _answer(state, wrong, None)
        else:
            _choose(state, rng.choice(state.movable), None)
    return actions


def force_answer(state: GameState, face: int, correct=True, events=None):
    """Put the state at AwaitAnswer with a chosen face and answer it.

    Bypasses the dice so tests can exercise a specific rolled value.
    """
    assert state.phase_code == P_ROLL
    question = state.bank.records[0]
    state.phase_code = P_ANSWER
    state.pending_question = question
    state.pending_face = face
    state.last_face = face
    choice = question.correct_index if correct else (question.correct_index + 1) % len(question.options)
    return _answer(state, choice, events)


def assert_positions_in_range(state: GameState):
    if state.is_parchis:
        for p in state.progress:
            assert 0 <= p <= state.goal_progress, state.progress
    else:
        for p in state.progress:
            assert 1 <= p <= state.goal, state.progress


def assert_occ_consistent(state: GameState):
    if not state.is_parchis:
        return
    expected = [[] for _ in range(state.board.square_count + 1)]
    for pid, p in enumerate(state.progress):
        if 1 <= p <= state.ring_steps:
            expected[state.ring[pid // state.ppt][p]].append(pid)
    actual = [sorted(l) for l in state.occ]
    assert actual == [sorted(l) for l in expected]


def run_gating_fuzz(bank, total_actions: int, seed=0, kinds=None, speeds=None):
    """Random-walk the state machine; every wrong answer must move nothing.

    Returns the number of incorrect answers verified.
    """
    kinds = kinds or list(GameKind)
    speeds = speeds or list(Speed)
    rng = random.Random(seed)
    incorrect_checked = 0

    def fresh():
        kind = rng.choice(kinds)
        teams = rng.randint(2, 4)
        config = GameConfig(
            kind=kind,
            team_count=teams,
            topics_per_team=tuple(frozenset(bank.topics) for _ in range(teams)),
            speed=rng.choice(speeds),
            seed=rng.getrandbits(63),
            language=bank.language,
        )
        return GameState(config, default_board(kind), bank)

    state = fresh()
    for i in range(total_actions):
        if state.phase_code == P_OVER:
            state = fresh()
        if state.phase_code == P_ROLL:
            _roll(state, None)
        elif state.phase_code == P_ANSWER:
            question = state.pending_question
            if rng.random() < 0.5:
                _answer(state, question.correct_index, None)
            else:
                before = tuple(state.progress)
                wrong = (question.correct_index + 1) % len(question.options)
                _answer(state, wrong, None)
                assert tuple(state.progress) == before, "incorrect answer moved a pawn"
                incorrect_checked += 1
        else:
            _choose(state, rng.choice(state.movable), None)
        assert_positions_in_range(state)
        if i % 97 == 0:
            assert_occ_consistent(state)
    return incorrect_checked


def answer_correct(state: GameState, events=None):
    assert state.phase_code == P_ANSWER
    return _answer(state, state.pending_question.correct_index, events)


def answer_wrong(state: GameState, events=None):
    assert state.phase_code == P_ANSWER
    q = state.pending_question
    return _answer(state, (q.correct_index + 1) % len(q.options), events)
