"""Engine legal_moves vs the brute-force oracle on the reduced board."""

from quizboard.engine import Speed, legal_moves
from helpers import place
from parchis_oracle import REDUCED_BOARD, Oracle, bfs_equivalence, reduced_game


class TestOracleDirect:
    """Hand-picked states where the two implementations must agree."""

    def test_fresh_game_entry_only_on_five(self, en_bank):
        state = reduced_game(en_bank, seed=1, speed=Speed.NORMAL)
        oracle = Oracle(REDUCED_BOARD, 2, fast=False)
        for face in range(1, 7):
            assert set(legal_moves(state, face)) == oracle.legal_for_roll(state, face)
        assert oracle.legal_for_roll(state, 5) == {0, 1}

    def test_barrier_state_agrees(self, en_bank):
        state = reduced_game(en_bank, seed=1, speed=Speed.NORMAL)
        # enemy pair two squares ahead of a team 0 pawn on its entry
        place(state, {0: 1, 4: 8, 5: 8})  # team 1 progress 8 = square 16? no: walk below
        oracle = Oracle(REDUCED_BOARD, 2, fast=False)
        for face in range(1, 7):
            assert set(legal_moves(state, face)) == oracle.legal_for_roll(state, face)

    def test_corridor_exact_count_agrees(self, en_bank):
        state = reduced_game(en_bank, seed=1, speed=Speed.NORMAL)
        place(state, {0: 14})  # corridor step 1, two steps from the goal
        oracle = Oracle(REDUCED_BOARD, 2, fast=False)
        for face in range(1, 7):
            assert set(legal_moves(state, face)) == oracle.legal_for_roll(state, face)
        assert oracle.legal_for_roll(state, 2) == {0}
        assert oracle.legal_for_roll(state, 3) == set()


class TestBfsEquivalence:
    def test_normal_rules_small_sweep(self, en_bank):
        checked, mismatches = bfs_equivalence(
            en_bank, speed=Speed.NORMAL, starts=6, plies=4
        )
        assert mismatches == []
        assert checked > 200

    def test_fast_rules_small_sweep(self, en_bank):
        checked, mismatches = bfs_equivalence(
            en_bank, speed=Speed.FAST, starts=6, plies=4
        )
        assert mismatches == []
        assert checked > 200
