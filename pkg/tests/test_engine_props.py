"""Cross-kind engine properties: dice support, gating, conservation, termination."""

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quizboard.boards import GameKind
from quizboard.engine import P_OVER, Speed, winner
from helpers import (
    assert_occ_consistent,
    assert_positions_in_range,
    make_game,
    play_out,
    run_gating_fuzz,
)


class TestDiceSupport:
    def test_normal_faces(self, en_bank):
        state = make_game(GameKind.MOTOR, en_bank, seed=42)
        faces = Counter(state.rng.randrange(1, 7) for _ in range(2000))
        assert set(faces) == {1, 2, 3, 4, 5, 6}

    def test_fast_faces(self, en_bank):
        state = make_game(GameKind.MOTOR, en_bank, speed=Speed.FAST, seed=42)
        faces = Counter(state.rng.randrange(4, 10) for _ in range(2000))
        assert set(faces) == {4, 5, 6, 7, 8, 9}

    def test_same_seed_same_faces(self, en_bank):
        def draw(seed):
            state = make_game(GameKind.GOOSE, en_bank, seed=seed)
            return [state.rng.randrange(1, 7) for _ in range(50)]

        assert draw(9) == draw(9)
        assert draw(9) != draw(10)


class TestGating:
    def test_fuzzed_incorrect_answers_move_nothing(self, en_bank):
        checked = run_gating_fuzz(en_bank, total_actions=8000, seed=3)
        assert checked > 500


class TestConservationAndTermination:
    @pytest.mark.parametrize("kind", list(GameKind))
    @pytest.mark.parametrize("speed", list(Speed))
    def test_games_terminate_with_constant_pawn_counts(self, en_bank, kind, speed):
        for seed in range(8):
            state = make_game(kind, en_bank, teams=2 + seed % 3, speed=speed, seed=seed)
            pawn_count = len(state.progress)
            play_out(state)
            assert state.phase_code == P_OVER
            assert len(state.progress) == pawn_count
            assert winner(state) is not None
            assert_positions_in_range(state)
            assert_occ_consistent(state)

    def test_winner_matches_positions(self, en_bank):
        state = make_game(GameKind.PARCHIS, en_bank, seed=5)
        play_out(state)
        team = winner(state)
        goal = state.goal_progress
        base = team * state.ppt
        assert all(state.progress[base + i] == goal for i in range(state.ppt))


class TestSeedProperties:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    def test_any_seed_terminates_goose(self, en_bank, seed):
        state = make_game(GameKind.GOOSE, en_bank, seed=seed)
        play_out(state, max_actions=50_000)
        assert state.phase_code == P_OVER

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32))
    def test_mixed_accuracy_still_terminates(self, en_bank, seed):
        state = make_game(GameKind.MOTOR, en_bank, seed=seed)
        play_out(state, correct_rate=0.5, max_actions=100_000)
        assert state.phase_code == P_OVER
