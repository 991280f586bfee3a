"""Deterministic engine and tooling for question-gated educational board games."""

from .bank import (
    BankError,
    EmptyBank,
    EmptyTopic,
    MissingColumn,
    MissingImage,
    QuestionBank,
    QuestionRecord,
    SelectionCursor,
    SheetError,
    Topic,
    UnknownTopic,
    compile_bank,
    load_bank,
    load_banks_dir,
    parse_sheet,
    parse_sheet_file,
    select_question,
    write_banks,
)
from .boards import (
    BoardDefinition,
    BoardError,
    EffectKind,
    GameKind,
    SquareEffect,
    board_from_json,
    board_to_json,
    default_board,
    load_board_file,
    load_boards_dir,
)
from .engine import (
    AtHome,
    AwaitAnswer,
    AwaitMoveChoice,
    AwaitRoll,
    ChoiceOutOfRange,
    ConfigError,
    DiceMode,
    DivergentAction,
    EngineError,
    Finished,
    GameConfig,
    GameOver,
    GameState,
    IllegalMove,
    InCorridor,
    KindMismatch,
    OnTrack,
    Pawn,
    Speed,
    Transcript,
    WrongPhase,
    apply_move,
    choose_pawn,
    dice_bounds,
    legal_moves,
    new_game,
    pawns_per_team,
    replay,
    roll_dice,
    submit_answer,
    winner,
)
from .sim import (
    AlwaysCorrect,
    AnswerPolicy,
    Bernoulli,
    NonTerminating,
    SimError,
    SimReport,
    SpeedComparison,
    compare_speeds,
    run_sim,
    sim_bank,
    sim_config,
)

__version__ = "0.1.0"

__all__ = [
    "AlwaysCorrect",
    "AnswerPolicy",
    "AtHome",
    "AwaitAnswer",
    "AwaitMoveChoice",
    "AwaitRoll",
    "BankError",
    "Bernoulli",
    "BoardDefinition",
    "BoardError",
    "ChoiceOutOfRange",
    "ConfigError",
    "DiceMode",
    "DivergentAction",
    "EffectKind",
    "EmptyBank",
    "EmptyTopic",
    "EngineError",
    "Finished",
    "GameConfig",
    "GameKind",
    "GameOver",
    "GameState",
    "IllegalMove",
    "InCorridor",
    "KindMismatch",
    "MissingColumn",
    "MissingImage",
    "NonTerminating",
    "OnTrack",
    "Pawn",
    "QuestionBank",
    "QuestionRecord",
    "SelectionCursor",
    "SheetError",
    "SimError",
    "SimReport",
    "Speed",
    "SpeedComparison",
    "SquareEffect",
    "Topic",
    "Transcript",
    "UnknownTopic",
    "WrongPhase",
    "apply_move",
    "board_from_json",
    "board_to_json",
    "choose_pawn",
    "compare_speeds",
    "compile_bank",
    "default_board",
    "dice_bounds",
    "legal_moves",
    "load_bank",
    "load_banks_dir",
    "load_board_file",
    "load_boards_dir",
    "new_game",
    "parse_sheet",
    "parse_sheet_file",
    "pawns_per_team",
    "replay",
    "roll_dice",
    "run_sim",
    "select_question",
    "sim_bank",
    "sim_config",
    "submit_answer",
    "winner",
    "write_banks",
]
