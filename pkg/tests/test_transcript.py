"""Transcript round-trip and replay fidelity."""

import json
import random

import pytest

from quizboard.boards import GameKind, default_board
from quizboard.engine import (
    ACTION_ANSWER,
    ACTION_CHOOSE,
    ACTION_ROLL,
    DivergentAction,
    GameConfig,
    GameState,
    P_ANSWER,
    P_CHOICE,
    P_OVER,
    P_ROLL,
    Speed,
    Transcript,
    apply_action,
    new_game,
    replay,
)
from helpers import make_config


def record_random_game(config, board, bank, *, drive_rng, correct_rate=0.85, max_actions=100_000):
    """Play one game with the mutating core while logging each action."""
    state = GameState(config, board, bank)
    transcript = Transcript(config=config)
    for _ in range(max_actions):
        if state.phase_code == P_OVER:
            return state, transcript
        if state.phase_code == P_ROLL:
            action = (ACTION_ROLL,)
        elif state.phase_code == P_ANSWER:
            q = state.pending_question
            if drive_rng.random() < correct_rate:
                action = (ACTION_ANSWER, q.correct_index)
            else:
                action = (ACTION_ANSWER, (q.correct_index + 1) % len(q.options))
        else:
            action = (ACTION_CHOOSE, drive_rng.choice(state.movable))
        apply_action(state, action)
        transcript.actions.append(action)
    raise AssertionError("game did not finish while recording")


@pytest.mark.parametrize("kind", list(GameKind))
@pytest.mark.parametrize("speed", list(Speed))
def test_replay_reproduces_final_state(en_bank, kind, speed):
    drive = random.Random(71)
    board = default_board(kind)
    for seed in range(4):
        config = make_config(kind, en_bank, teams=2 + seed % 3, speed=speed, seed=seed * 977 + 13)
        final, transcript = record_random_game(config, board, en_bank, drive_rng=drive)
        replayed = replay(transcript, board, en_bank)
        assert replayed.fingerprint() == final.fingerprint()
        assert replayed == final


def test_replay_is_stable_across_runs(en_bank):
    config = make_config(GameKind.PARCHIS, en_bank, seed=404)
    board = default_board(GameKind.PARCHIS)
    _, transcript = record_random_game(config, board, en_bank, drive_rng=random.Random(2))
    first = replay(transcript, board, en_bank)
    second = replay(transcript, board, en_bank)
    assert first.fingerprint() == second.fingerprint()


def test_json_round_trip_preserves_replay(en_bank):
    config = make_config(GameKind.GOOSE, en_bank, teams=3, seed=88)
    board = default_board(GameKind.GOOSE)
    final, transcript = record_random_game(config, board, en_bank, drive_rng=random.Random(5))
    doc = json.loads(json.dumps(transcript.to_json_dict()))
    restored = Transcript.from_json_dict(doc)
    assert restored.config == config
    assert restored.actions == transcript.actions
    assert replay(restored, board, en_bank).fingerprint() == final.fingerprint()


def test_empty_transcript_is_fresh_game(en_bank):
    config = make_config(GameKind.MOTOR, en_bank, seed=9)
    board = default_board(GameKind.MOTOR)
    state = replay(Transcript(config=config), board, en_bank)
    assert state.fingerprint() == new_game(config, board, en_bank).fingerprint()
    assert state.phase_code == P_ROLL


def test_mid_game_prefix_replays_to_same_phase(en_bank):
    config = make_config(GameKind.PARCHIS, en_bank, seed=31)
    board = default_board(GameKind.PARCHIS)
    final, transcript = record_random_game(config, board, en_bank, drive_rng=random.Random(8))
    cut = len(transcript.actions) // 2
    prefix = Transcript(config=config, actions=transcript.actions[:cut])
    state = replay(prefix, board, en_bank)
    assert state.phase_code in (P_ROLL, P_ANSWER, P_CHOICE, P_OVER)
    for action in transcript.actions[cut:]:
        apply_action(state, action)
    assert state.fingerprint() == final.fingerprint()


class TestDivergence:
    def test_answer_before_roll(self, en_bank):
        config = make_config(GameKind.GOOSE, en_bank, seed=1)
        t = Transcript(config=config, actions=[(ACTION_ANSWER, 0)])
        with pytest.raises(DivergentAction):
            replay(t, default_board(GameKind.GOOSE), en_bank)

    def test_double_roll(self, en_bank):
        config = make_config(GameKind.GOOSE, en_bank, seed=1)
        t = Transcript(config=config, actions=[(ACTION_ROLL,), (ACTION_ROLL,)])
        with pytest.raises(DivergentAction):
            replay(t, default_board(GameKind.GOOSE), en_bank)

    def test_choice_index_out_of_band(self, en_bank):
        config = make_config(GameKind.GOOSE, en_bank, seed=1)
        t = Transcript(config=config, actions=[(ACTION_ROLL,), (ACTION_ANSWER, 99)])
        with pytest.raises(DivergentAction):
            replay(t, default_board(GameKind.GOOSE), en_bank)

    def test_unknown_action_name(self, en_bank):
        config = make_config(GameKind.GOOSE, en_bank, seed=1)
        t = Transcript(config=config, actions=[("teleport", 5)])
        with pytest.raises(DivergentAction):
            replay(t, default_board(GameKind.GOOSE), en_bank)

    def test_action_after_game_over(self, en_bank):
        config = make_config(GameKind.MOTOR, en_bank, seed=4)
        board = default_board(GameKind.MOTOR)
        _, transcript = record_random_game(config, board, en_bank, drive_rng=random.Random(1))
        transcript.actions.append((ACTION_ROLL,))
        with pytest.raises(DivergentAction):
            replay(transcript, board, en_bank)
