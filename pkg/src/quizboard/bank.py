"""Question bank pipeline: sheet parsing, compilation, loading, selection.

The authoring format is a UTF-8 comma-separated sheet with the header
``id,topic_id,topic_label,language,prompt,image_ref,option_1..option_n,correct_index``.
Compilation groups rows by language and writes one JSON bank per language
folder, copying any referenced images next to it. Loading a compiled bank
reproduces the parsed records exactly, so parse -> compile -> load is the
identity on validated sheets.

Selection is seeded and repetition-free: each team draws from a shuffled
pool over its topic set and the pool reshuffles only once exhausted.
"""

from __future__ import annotations

import csv
import io
import json
import random
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath


class BankError(ValueError):
    """Base class for sheet/bank pipeline failures."""


class SheetError(BankError):
    """One or more bad rows in a sheet; ``problems`` lists them all."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class MissingColumn(BankError):
    pass


class MissingImage(BankError):
    pass


class EmptyBank(BankError):
    pass


class UnknownTopic(BankError):
    pass


class EmptyTopic(BankError):
    """A team's topic/language combination has no questions to draw from."""


REQUIRED_COLUMNS = ("id", "topic_id", "topic_label", "language", "prompt", "image_ref", "correct_index")
MAX_OPTIONS = 6
BANK_FILENAME = "questions.json"


@dataclass(frozen=True)
class QuestionRecord:
    id: str
    topic_id: str
    topic_label: str
    language: str
    prompt: str
    image_ref: str | None
    options: tuple[str, ...]
    correct_index: int


@dataclass(frozen=True)
class Topic:
    topic_id: str
    label: str
    questions: tuple[QuestionRecord, ...]


class QuestionBank:
    """Validated per-language question collection with a topic index."""

    def __init__(self, language: str, records: list[QuestionRecord]):
        if not records:
            raise EmptyBank(f"no questions for language {language!r}")
        for rec in records:
            if rec.language != language:
                raise BankError(f"question {rec.id!r} has language {rec.language!r}, bank is {language!r}")
        self.language = language
        self.records: tuple[QuestionRecord, ...] = tuple(records)
        self.by_id: dict[str, QuestionRecord] = {}
        grouped: dict[str, list[QuestionRecord]] = {}
        for rec in records:
            if rec.id in self.by_id:
                raise BankError(f"duplicate question id {rec.id!r} in {language!r} bank")
            self.by_id[rec.id] = rec
            grouped.setdefault(rec.topic_id, []).append(rec)
        self.topics: dict[str, Topic] = {
            tid: Topic(tid, qs[0].topic_label, tuple(qs)) for tid, qs in grouped.items()
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuestionBank)
            and self.language == other.language
            and self.records == other.records
        )

    def __repr__(self) -> str:
        return f"QuestionBank({self.language!r}, {len(self.records)} questions, {len(self.topics)} topics)"


def parse_sheet(text: str) -> list[QuestionRecord]:
    """Parse sheet text into records; raises SheetError listing every bad row."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("sheet is empty, expected a header row") from None
    header = [h.strip() for h in header]
    for col in REQUIRED_COLUMNS:
        if col not in header:
            raise MissingColumn(f"missing column {col!r}")
    option_cols = sorted(
        (c for c in header if c.startswith("option_") and c[len("option_"):].isdigit()),
        key=lambda c: int(c.split("_")[1]),
    )
    if len(option_cols) < 2:
        raise MissingColumn("need at least option_1 and option_2 columns")
    idx = {name: header.index(name) for name in header}

    def cell(row: list[str], name: str) -> str:
        i = idx[name]
        return row[i].strip() if i < len(row) else ""

    records: list[QuestionRecord] = []
    problems: list[str] = []
    seen: set[tuple[str, str]] = set()  # (language, id)
    for row in reader:
        line = reader.line_num
        if not any(c.strip() for c in row):
            continue
        qid = cell(row, "id")
        language = cell(row, "language")
        if not qid:
            problems.append(f"row {line}: empty id")
            continue
        if (language, qid) in seen:
            problems.append(f"row {line}: duplicate id {qid!r} for language {language!r}")
            continue
        seen.add((language, qid))
        options = [cell(row, c) for c in option_cols]
        while options and not options[-1]:
            options.pop()
        if any(not o for o in options):
            problems.append(f"row {line}: empty option between filled ones")
            continue
        if not 2 <= len(options) <= MAX_OPTIONS:
            problems.append(f"row {line}: {len(options)} options, need 2..{MAX_OPTIONS}")
            continue
        raw_correct = cell(row, "correct_index")
        try:
            correct = int(raw_correct)
        except ValueError:
            problems.append(f"row {line}: correct_index {raw_correct!r} is not a number")
            continue
        if not 0 <= correct < len(options):
            problems.append(f"row {line}: correct_index {correct} out of range for {len(options)} options")
            continue
        prompt = cell(row, "prompt")
        if not prompt:
            problems.append(f"row {line}: empty prompt")
            continue
        if not cell(row, "topic_id") or not language:
            problems.append(f"row {line}: empty topic_id or language")
            continue
        records.append(
            QuestionRecord(
                id=qid,
                topic_id=cell(row, "topic_id"),
                topic_label=cell(row, "topic_label"),
                language=language,
                prompt=prompt,
                image_ref=cell(row, "image_ref") or None,
                options=tuple(options),
                correct_index=correct,
            )
        )
    if problems:
        raise SheetError(problems)
    return records


def parse_sheet_file(path: str | Path) -> list[QuestionRecord]:
    return parse_sheet(Path(path).read_text(encoding="utf-8"))


def _record_to_json(rec: QuestionRecord) -> dict:
    return {
        "id": rec.id,
        "topic_id": rec.topic_id,
        "topic_label": rec.topic_label,
        "prompt": rec.prompt,
        "image_ref": rec.image_ref,
        "options": list(rec.options),
        "correct_index": rec.correct_index,
    }


def _record_from_json(obj: dict, language: str) -> QuestionRecord:
    return QuestionRecord(
        id=obj["id"],
        topic_id=obj["topic_id"],
        topic_label=obj["topic_label"],
        language=language,
        prompt=obj["prompt"],
        image_ref=obj.get("image_ref"),
        options=tuple(obj["options"]),
        correct_index=int(obj["correct_index"]),
    )


def _check_image_ref(rec: QuestionRecord, assets_root: Path) -> Path:
    ref = PurePosixPath(rec.image_ref or "")
    if ref.is_absolute() or ".." in ref.parts:
        raise MissingImage(f"question {rec.id!r}: image_ref {rec.image_ref!r} must be a plain relative path")
    path = assets_root / ref
    if not path.is_file():
        raise MissingImage(f"question {rec.id!r}: image {rec.image_ref!r} not found under {assets_root}")
    return path


def compile_bank(records: list[QuestionRecord], language: str, assets_root: str | Path) -> bytes:
    """Serialize the records of one language as a bank file (no images copied)."""
    assets_root = Path(assets_root)
    selected = [r for r in records if r.language == language]
    if not selected:
        raise EmptyBank(f"no questions for language {language!r}")
    for rec in selected:
        if rec.image_ref:
            _check_image_ref(rec, assets_root)
    doc = {"language": language, "questions": [_record_to_json(r) for r in selected]}
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def write_banks(
    records: list[QuestionRecord],
    out_dir: str | Path,
    assets_root: str | Path,
    languages: list[str] | None = None,
) -> dict[str, Path]:
    """Compile one bank folder per language under out_dir.

    All-or-nothing: everything is staged in a temp directory first, then each
    language folder is moved into place, so a failed compile leaves out_dir
    untouched.
    """
    out_dir = Path(out_dir)
    assets_root = Path(assets_root)
    present = sorted({r.language for r in records})
    targets = languages if languages is not None else present
    if not targets:
        raise EmptyBank("no records to compile")
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    with tempfile.TemporaryDirectory(prefix=".bank-stage-", dir=out_dir) as stage_root:
        staged: list[tuple[Path, Path]] = []
        for language in targets:
            data = compile_bank(records, language, assets_root)
            lang_dir = Path(stage_root) / language
            lang_dir.mkdir(parents=True)
            (lang_dir / BANK_FILENAME).write_bytes(data)
            for rec in records:
                if rec.language == language and rec.image_ref:
                    src = _check_image_ref(rec, assets_root)
                    dst = lang_dir / PurePosixPath(rec.image_ref)
                    dst.parent.mkdir(parents=True, exist_ok=True)
                    shutil.copyfile(src, dst)
            staged.append((lang_dir, out_dir / language))
        # every language compiled cleanly; swap the staged folders in
        for lang_dir, final_dir in staged:
            if final_dir.exists():
                shutil.rmtree(final_dir)
            lang_dir.rename(final_dir)
            written[final_dir.name] = final_dir
    return written


def bank_from_bytes(data: bytes | str) -> QuestionBank:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise BankError(f"bank data is not valid JSON: {exc}") from exc
    language = doc["language"]
    records = [_record_from_json(q, language) for q in doc["questions"]]
    return QuestionBank(language, records)


def load_bank(path: str | Path) -> QuestionBank:
    """Load one compiled bank file (or a language folder containing it)."""
    path = Path(path)
    if path.is_dir():
        path = path / BANK_FILENAME
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise BankError(f"no bank file at {path}") from None
    try:
        return bank_from_bytes(data)
    except BankError as exc:
        raise BankError(f"{path}: {exc}") from exc


def load_banks_dir(path: str | Path) -> dict[str, QuestionBank]:
    """Load every language folder under a compiled banks directory."""
    root = Path(path)
    if not root.is_dir():
        raise BankError(f"banks directory {root} does not exist")
    banks: dict[str, QuestionBank] = {}
    for child in sorted(root.iterdir()):
        if child.is_dir() and (child / BANK_FILENAME).is_file():
            bank = load_bank(child)
            if bank.language != child.name:
                raise BankError(f"{child} holds a bank declaring language {bank.language!r}")
            banks[bank.language] = bank
    if not banks:
        raise BankError(f"no bank folders found under {root}")
    return banks


@dataclass
class _TeamPool:
    topic_key: frozenset[str]
    order: list[str]
    pos: int


@dataclass
class SelectionCursor:
    """Per-team no-repeat question pools over the bank, advanced by select_question.

    Owns its RNG so question draws never perturb the dice stream.
    """

    rng: random.Random
    pools: dict[int, _TeamPool] = field(default_factory=dict)

    @classmethod
    def from_seed(cls, seed: int) -> "SelectionCursor":
        return cls(rng=random.Random(seed))

    def _pool(self, bank: QuestionBank, team: int, topic_set: frozenset[str]) -> _TeamPool:
        pool = self.pools.get(team)
        if pool is None or pool.topic_key != topic_set:
            ids = [r.id for r in bank.records if r.topic_id in topic_set]
            self.rng.shuffle(ids)
            pool = _TeamPool(topic_key=topic_set, order=ids, pos=0)
            self.pools[team] = pool
        return pool


def select_question(
    bank: QuestionBank, cursor: SelectionCursor, team: int, topic_set: frozenset[str] | set[str]
) -> tuple[QuestionRecord, SelectionCursor]:
    """Draw the team's next question; returns the record and the advanced cursor."""
    topic_set = frozenset(topic_set)
    if not topic_set:
        raise UnknownTopic("empty topic set")
    missing = topic_set - bank.topics.keys()
    if missing:
        raise UnknownTopic(f"topics not in {bank.language!r} bank: {sorted(missing)}")
    pool = cursor._pool(bank, team, topic_set)
    if pool.pos >= len(pool.order):
        cursor.rng.shuffle(pool.order)
        pool.pos = 0
    qid = pool.order[pool.pos]
    pool.pos += 1
    return bank.by_id[qid], cursor
