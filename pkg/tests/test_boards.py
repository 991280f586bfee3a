"""Board definition loading and validation."""

import json

import pytest

from quizboard.boards import (
    BoardDefinition,
    BoardError,
    EffectKind,
    GameKind,
    SquareEffect,
    board_from_json,
    board_to_json,
    default_board,
    load_boards_dir,
)


class TestDefaultBoards:
    def test_goose_layout(self):
        board = default_board(GameKind.GOOSE)
        assert board.square_count == 63
        assert board.goal == 63
        geese = [5, 9, 14, 18, 23, 27, 32, 36, 41, 45, 50, 54, 59]
        for i, sq in enumerate(geese):
            eff = board.effects[sq]
            assert eff.kind is EffectKind.JUMP_TO
            assert eff.extra_roll
            # each goose jumps to the next one; the last reaches the goal
            expected = geese[i + 1] if i + 1 < len(geese) else 63
            assert eff.target == expected
        assert board.effects[6].target == 12
        assert board.effects[12].target == 6
        assert board.effects[26].target == 53
        assert board.effects[53].target == 26
        assert board.effects[19] == SquareEffect(EffectKind.SKIP_TURNS, turns=1)
        assert board.effects[31] == SquareEffect(EffectKind.SKIP_TURNS, turns=2)
        assert board.effects[56] == SquareEffect(EffectKind.SKIP_TURNS, turns=3)
        assert board.effects[42] == SquareEffect(EffectKind.JUMP_TO, target=30)
        assert board.effects[58].kind is EffectKind.BACK_TO_START
        assert 63 not in board.effects

    def test_parchis_layout(self):
        board = default_board(GameKind.PARCHIS)
        assert board.square_count == 68
        assert board.start_squares == (5, 22, 39, 56)
        assert board.safe_squares == frozenset({5, 12, 17, 22, 29, 34, 39, 46, 51, 56, 63, 68})
        assert board.ring_steps == 64
        assert board.corridor_length == 7
        assert board.goal_progress == 72
        assert not board.effects

    def test_motor_layout(self):
        board = default_board(GameKind.MOTOR)
        assert board.square_count == 48
        assert board.goal == 48
        assert not board.effects


class TestParchisGeometry:
    def test_ring_square_maps_entry(self):
        board = default_board(GameKind.PARCHIS)
        for team, entry in enumerate(board.start_squares):
            assert board.ring_square(team, 1) == entry

    def test_ring_square_wraps(self):
        board = default_board(GameKind.PARCHIS)
        # team 3 enters at 56; 13 steps later it has wrapped past 68 to 68->1
        assert board.ring_square(3, 13) == 68
        assert board.ring_square(3, 14) == 1

    def test_last_ring_square_before_corridor(self):
        board = default_board(GameKind.PARCHIS)
        # every team leaves the ring from the square just before its corridor
        assert board.ring_square(0, 64) == 68
        assert board.ring_square(1, 64) == 17
        assert board.ring_square(2, 64) == 34
        assert board.ring_square(3, 64) == 51


class TestValidation:
    def test_rejects_effect_outside_board(self):
        with pytest.raises(BoardError, match="outside"):
            BoardDefinition(
                kind=GameKind.MOTOR,
                square_count=10,
                goal=10,
                effects={11: SquareEffect(EffectKind.BACK_TO_START)},
            ).validate()

    def test_rejects_jump_target_outside_board(self):
        with pytest.raises(BoardError, match="jump target"):
            BoardDefinition(
                kind=GameKind.GOOSE,
                square_count=10,
                goal=10,
                effects={3: SquareEffect(EffectKind.JUMP_TO, target=99)},
            ).validate()

    def test_rejects_goal_mismatch(self):
        with pytest.raises(BoardError, match="goal"):
            BoardDefinition(kind=GameKind.MOTOR, square_count=10, goal=9).validate()

    def test_rejects_parchis_without_starts(self):
        with pytest.raises(BoardError, match="start_squares"):
            BoardDefinition(
                kind=GameKind.PARCHIS, square_count=68, ring_steps=64, corridor_length=7
            ).validate()

    def test_rejects_zero_skip(self):
        with pytest.raises(BoardError, match="skip"):
            BoardDefinition(
                kind=GameKind.MOTOR,
                square_count=10,
                goal=10,
                effects={3: SquareEffect(EffectKind.SKIP_TURNS, turns=0)},
            ).validate()

    def test_rejects_bad_json(self):
        with pytest.raises(BoardError, match="JSON"):
            board_from_json("{nope")


class TestRoundTrip:
    @pytest.mark.parametrize("kind", list(GameKind))
    def test_json_round_trip(self, kind):
        board = default_board(kind)
        again = board_from_json(board_to_json(board))
        assert again == board

    def test_safe_effect_entries_fold_into_set(self):
        doc = {
            "kind": "parchis",
            "square_count": 68,
            "start_squares": [5, 22, 39, 56],
            "ring_steps": 64,
            "corridor_length": 7,
            "effects": [{"square": 12, "effect": "safe"}],
        }
        board = board_from_json(json.dumps(doc))
        assert 12 in board.safe_squares
        assert 12 not in board.effects


class TestBoardsDir:
    def test_override_wins(self, tmp_path):
        custom = {"kind": "motor", "square_count": 30, "goal": 30, "effects": []}
        (tmp_path / "motor.json").write_text(json.dumps(custom))
        boards = load_boards_dir(tmp_path)
        assert boards[GameKind.MOTOR].square_count == 30
        # untouched kinds fall back to the packaged boards
        assert boards[GameKind.GOOSE].square_count == 63

    def test_wrong_kind_in_override_rejected(self, tmp_path):
        (tmp_path / "motor.json").write_text(board_to_json(default_board(GameKind.GOOSE)))
        with pytest.raises(BoardError, match="declares kind"):
            load_boards_dir(tmp_path)

    def test_none_dir_gives_defaults(self):
        boards = load_boards_dir(None)
        assert set(boards) == set(GameKind)
