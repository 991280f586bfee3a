"""HTTP wrapper exposing game sessions to browsers and scripts.

Sessions live in memory, expire after an idle TTL, and serialize writes with a
per-session lock. Views sent to clients never include a question's answer.
"""

import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.responses import FileResponse, JSONResponse, Response

from .bank import BankError, QuestionBank, load_banks_dir
from .boards import BoardDefinition, GameKind, board_to_json, load_boards_dir
from .engine import (
    ACTION_ANSWER,
    ACTION_CHOOSE,
    ACTION_ROLL,
    ChoiceOutOfRange,
    ConfigError,
    DiceMode,
    EngineError,
    GameConfig,
    GameState,
    IllegalMove,
    P_ANSWER,
    P_CHOICE,
    P_OVER,
    P_ROLL,
    Speed,
    Transcript,
    WrongPhase,
    _answer,
    _choose,
    _loc_json,
    _roll,
)

DEFAULT_SESSION_TTL = 7200.0
EVENT_TAIL = 50


@dataclass
class Session:
    session_id: str
    state: GameState
    transcript: Transcript
    events: list
    created_at: float
    last_active: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, ttl: float, clock=time.monotonic):
        self.ttl = ttl
        self.clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _expired(self, session: Session, now: float) -> bool:
        return now - session.last_active > self.ttl

    def create(self, state: GameState, transcript: Transcript, events: list) -> Session:
        now = self.clock()
        session = Session(
            session_id=secrets.token_urlsafe(16),
            state=state,
            transcript=transcript,
            events=events,
            created_at=now,
            last_active=now,
        )
        with self._lock:
            for sid in [s for s, sess in self._sessions.items() if self._expired(sess, now)]:
                del self._sessions[sid]
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        now = self.clock()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                return None
            if self._expired(session, now):
                del self._sessions[session_id]
                return None
            session.last_active = now
            return session

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)


def _phase_json(state: GameState) -> dict:
    code = state.phase_code
    if code == P_ROLL:
        return {"name": "await_roll"}
    if code == P_ANSWER:
        return {"name": "await_answer", "face": state.pending_face}
    if code == P_CHOICE:
        return {
            "name": "await_move_choice",
            "face": state.pending_face,
            "movable": list(state.movable),
            "bonus": state.movable_bonus,
        }
    return {"name": "game_over", "winner": state.winner_team}


def _question_json(state: GameState) -> dict | None:
    if state.phase_code != P_ANSWER:
        return None
    q = state.pending_question
    image_url = None
    if q.image_ref:
        image_url = f"/assets/{state.config.language}/{q.image_ref}"
    # Deliberately no answer field here; clients learn correctness from events.
    return {
        "id": q.id,
        "topic_id": q.topic_id,
        "topic_label": q.topic_label,
        "prompt": q.prompt,
        "options": list(q.options),
        "image_url": image_url,
    }


def build_view(session: Session) -> dict:
    state = session.state
    cfg = state.config
    return {
        "session_id": session.session_id,
        "phase": _phase_json(state),
        "current_team": state.current_team,
        "turn_number": state.turn_number,
        "last_face": state.last_face,
        "winner": state.winner_team if state.phase_code == P_OVER else None,
        "config": {
            "kind": cfg.kind.value,
            "team_count": cfg.team_count,
            "topics_per_team": [sorted(t) for t in cfg.topics_per_team],
            "speed": cfg.speed.value,
            "dice_mode": cfg.dice_mode.value,
            "language": cfg.language,
        },
        "pawns": [
            {"pawn_id": pid, "team": pid // state.ppt, "location": _loc_json(state, pid)}
            for pid in range(len(state.progress))
        ],
        "question": _question_json(state),
        "events": list(session.events[-EVENT_TAIL:]),
    }


def _problem(field_name: str, message: str) -> dict:
    return {"field": field_name, "message": message}


def _validation_error(problems: list[dict]) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": problems})


def _parse_create_body(body, banks: dict[str, QuestionBank]):
    """Returns (config, bank, problems); config is None whenever problems exist."""
    problems: list[dict] = []
    if not isinstance(body, dict):
        return None, None, [_problem("body", "request body must be a JSON object")]

    kind_raw = body.get("kind")
    try:
        GameKind(kind_raw)
    except ValueError:
        problems.append(_problem("kind", f"unknown game kind {kind_raw!r}"))

    team_count = body.get("team_count")
    if not isinstance(team_count, int) or isinstance(team_count, bool):
        problems.append(_problem("team_count", "team_count must be an integer"))
        team_count = None

    language = body.get("language")
    bank = None
    if not isinstance(language, str) or not language:
        problems.append(_problem("language", "language must be a non-empty string"))
    else:
        bank = banks.get(language)
        if bank is None:
            problems.append(_problem("language", f"no question bank for language {language!r}"))

    topics_raw = body.get("topics_per_team")
    topics: tuple[frozenset, ...] | None = None
    if (
        not isinstance(topics_raw, list)
        or not all(isinstance(ts, list) and all(isinstance(t, str) for t in ts) for ts in topics_raw)
    ):
        problems.append(_problem("topics_per_team", "topics_per_team must be a list of topic-id lists"))
    else:
        topics = tuple(frozenset(ts) for ts in topics_raw)
        if bank is not None:
            missing = sorted({t for ts in topics for t in ts} - set(bank.topics))
            if missing:
                problems.append(_problem(
                    "topics_per_team",
                    "unknown topic(s): " + ", ".join(repr(t) for t in missing),
                ))

    for field_name, default in (("speed", Speed.NORMAL), ("dice_mode", DiceMode.MANUAL)):
        raw = body.get(field_name, default)
        cls = Speed if field_name == "speed" else DiceMode
        try:
            cls(raw)
        except ValueError:
            problems.append(_problem(field_name, f"invalid {field_name} {raw!r}"))

    seed = body.get("seed")
    if seed is None:
        seed = secrets.randbits(64)
    elif not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        problems.append(_problem("seed", "seed must be an unsigned 64-bit integer"))

    if problems:
        return None, None, problems

    try:
        config = GameConfig(
            kind=kind_raw,
            team_count=team_count,
            topics_per_team=topics,
            speed=body.get("speed", Speed.NORMAL),
            dice_mode=body.get("dice_mode", DiceMode.MANUAL),
            seed=seed,
            language=language,
        )
        config.validate()
    except ConfigError as exc:
        return None, None, [_problem("config", str(exc))]
    return config, bank, []


def _auto_roll(session: Session) -> None:
    state = session.state
    while state.config.dice_mode is DiceMode.AUTO and state.phase_code == P_ROLL:
        events: list = []
        _roll(state, events)
        session.transcript.actions.append((ACTION_ROLL,))
        session.events.extend(events)


def create_app(*, banks: dict[str, QuestionBank] | None = None,
               banks_dir: str | Path | None = None,
               boards: dict[GameKind, BoardDefinition] | None = None,
               boards_dir: str | Path | None = None,
               session_ttl: float = DEFAULT_SESSION_TTL,
               clock=time.monotonic) -> FastAPI:
    if banks is None:
        banks = load_banks_dir(banks_dir) if banks_dir is not None else {}
    if boards is None:
        boards = load_boards_dir(boards_dir)
    assets_root = Path(banks_dir).resolve() if banks_dir is not None else None

    app = FastAPI(title="quizboard service", docs_url=None, redoc_url=None)
    store = SessionStore(session_ttl, clock)
    app.state.store = store
    app.state.banks = banks
    app.state.boards = boards

    @app.post("/games")
    def create_game(body=Body(...)):
        config, bank, problems = _parse_create_body(body, banks)
        if problems:
            return _validation_error(problems)
        board = boards[config.kind]
        try:
            state = GameState(config, board, bank)
        except (EngineError, BankError) as exc:
            return _validation_error([_problem("config", str(exc))])
        session = store.create(state, Transcript(config=config), [])
        with session.lock:
            _auto_roll(session)
            view = build_view(session)
        return JSONResponse(status_code=201,
                            content={"session_id": session.session_id, "view": view})

    @app.get("/games/{session_id}")
    def get_game(session_id: str):
        session = store.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        with session.lock:
            return build_view(session)

    @app.post("/games/{session_id}/actions")
    def post_action(session_id: str, body=Body(...)):
        session = store.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        if not isinstance(body, dict):
            return _validation_error([_problem("body", "request body must be a JSON object")])
        action_type = body.get("type")
        if action_type == "roll":
            action = (ACTION_ROLL,)
        elif action_type == "answer":
            choice = body.get("choice")
            if not isinstance(choice, int) or isinstance(choice, bool):
                return _validation_error([_problem("choice", "choice must be an integer")])
            action = (ACTION_ANSWER, choice)
        elif action_type == "choose_pawn":
            pawn_id = body.get("pawn_id")
            if not isinstance(pawn_id, int) or isinstance(pawn_id, bool):
                return _validation_error([_problem("pawn_id", "pawn_id must be an integer")])
            action = (ACTION_CHOOSE, pawn_id)
        else:
            return _validation_error([_problem("type", f"unknown action type {action_type!r}")])

        with session.lock:
            events: list = []
            state = session.state
            try:
                if action[0] == ACTION_ROLL:
                    _roll(state, events)
                elif action[0] == ACTION_ANSWER:
                    _answer(state, action[1], events)
                else:
                    _choose(state, action[1], events)
            except (WrongPhase, IllegalMove, ChoiceOutOfRange) as exc:
                return JSONResponse(
                    status_code=409,
                    content={"detail": str(exc), "view": build_view(session)},
                )
            session.transcript.actions.append(action)
            session.events.extend(events)
            _auto_roll(session)
            return build_view(session)

    @app.get("/games/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = store.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        with session.lock:
            # Withheld while running: the config seed predicts future dice
            # and question order.
            if session.state.phase_code != P_OVER:
                return JSONResponse(
                    status_code=409,
                    content={"detail": "transcript is available after the game ends",
                             "view": build_view(session)},
                )
            return session.transcript.to_json_dict()

    @app.get("/banks")
    def list_banks():
        return {
            "languages": [
                {
                    "language": lang,
                    "topics": [
                        {
                            "id": topic.topic_id,
                            "label": topic.label,
                            "question_count": len(topic.questions),
                        }
                        for topic in sorted(bank.topics.values(), key=lambda t: t.topic_id)
                    ],
                }
                for lang, bank in sorted(banks.items())
            ]
        }

    @app.get("/boards/{kind}")
    def get_board(kind: str):
        try:
            board = boards[GameKind(kind)]
        except ValueError:
            return JSONResponse(status_code=404, content={"detail": f"unknown game kind {kind!r}"})
        # Same bytes the engine would load from a board file.
        return Response(content=board_to_json(board), media_type="application/json")

    @app.get("/assets/{language}/{asset_path:path}")
    def get_asset(language: str, asset_path: str):
        if assets_root is None:
            return JSONResponse(status_code=404, content={"detail": "no assets directory configured"})
        candidate = (assets_root / language / asset_path).resolve()
        try:
            candidate.relative_to(assets_root)
        except ValueError:
            return JSONResponse(status_code=404, content={"detail": "unknown asset"})
        if not candidate.is_file() or candidate.name == "questions.json":
            return JSONResponse(status_code=404, content={"detail": "unknown asset"})
        return FileResponse(candidate)

    return app


def serve(*, port: int = 8000, banks_dir: str | None = None, boards_dir: str | None = None,
          session_ttl: float = DEFAULT_SESSION_TTL) -> None:
    import uvicorn

    app = create_app(banks_dir=banks_dir, boards_dir=boards_dir, session_ttl=session_ttl)
    uvicorn.run(app, host="127.0.0.1", port=port)
