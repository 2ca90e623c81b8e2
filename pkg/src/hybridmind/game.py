"""Board configuration, codes, pin feedback and transcripts.

Pin convention: a *white* pin is a pawn right in color and position, a
*black* pin a right color in the wrong place.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

Code = tuple[str, ...]

DEFAULT_PALETTE = ("B", "Y", "R", "G", "O", "P", "C", "M")
EXTRA_LETTERS = ("W", "K", "N", "T", "V", "X", "Z", "L")
COLOR_NAMES = {
    "B": "blue", "Y": "yellow", "R": "red", "G": "green",
    "O": "orange", "P": "purple", "C": "cyan", "M": "magenta",
}


class ConfigError(ValueError):
    """A code or feedback does not fit the board configuration."""


class InconsistentHistory(ValueError):
    """Feedback that no secret could have produced."""


@dataclass(frozen=True)
class GameConfig:
    positions: int = 5
    palette: tuple[str, ...] = DEFAULT_PALETTE
    max_rows: int | None = None

    def __post_init__(self) -> None:
        if self.positions < 1:
            raise ConfigError("positions must be >= 1")
        if not self.palette:
            raise ConfigError("palette must hold at least one color")
        if len(set(self.palette)) != len(self.palette):
            raise ConfigError("palette letters must be distinct")
        if any(len(c) != 1 or not c.isalpha() or not c.isupper() for c in self.palette):
            raise ConfigError("palette colors must be single uppercase letters")
        if self.max_rows is not None and self.max_rows < 1:
            raise ConfigError("max_rows must be >= 1")

    @classmethod
    def with_colors(cls, positions: int = 5, colors: int = 8, max_rows: int | None = None) -> GameConfig:
        """Config using the first ``colors`` letters of the default palette."""
        letters = DEFAULT_PALETTE + EXTRA_LETTERS
        if not 1 <= colors <= len(letters):
            raise ConfigError(f"colors must be between 1 and {len(letters)}")
        return cls(positions, letters[:colors], max_rows)

    @property
    def colors(self) -> int:
        return len(self.palette)

    @property
    def size(self) -> int:
        return self.colors ** self.positions

    def index(self, color: str) -> int:
        return self.palette.index(color)

    def check(self, code: Sequence[str]) -> Code:
        code = tuple(code)
        if len(code) != self.positions:
            raise ConfigError(f"expected {self.positions} pawns, got {len(code)}")
        for c in code:
            if c not in self.palette:
                raise ConfigError(f"unknown color {c!r}")
        return code


class Feedback(NamedTuple):
    whites: int
    blacks: int

    def __str__(self) -> str:
        return f"{self.whites}W {self.blacks}B"

    def pins(self) -> str:
        """Glyph row as drawn on the board: ``o`` exact, ``●`` misplaced."""
        return " ".join(["o"] * self.whites + ["●"] * self.blacks)


def is_legal_feedback(fb: Feedback, positions: int) -> bool:
    """False for negative counts, more than N pins, or the unreachable (N-1, 1)."""
    w, b = fb
    if w < 0 or b < 0 or w + b > positions:
        return False
    return not (w == positions - 1 and b == 1)


def score(guess: Sequence[str], secret: Sequence[str], config: GameConfig | None = None) -> Feedback:
    if config is not None:
        guess, secret = config.check(guess), config.check(secret)
    elif len(guess) != len(secret):
        raise ConfigError("guess and secret differ in length")
    whites = sum(g == s for g, s in zip(guess, secret))
    common = sum((Counter(guess) & Counter(secret)).values())
    return Feedback(whites, common - whites)


@dataclass(frozen=True)
class Row:
    guess: Code
    feedback: Feedback

    def __post_init__(self) -> None:
        object.__setattr__(self, "guess", tuple(self.guess))
        object.__setattr__(self, "feedback", Feedback(*self.feedback))


@dataclass(frozen=True)
class Transcript:
    rows: tuple[Row, ...] = ()
    secret: Code | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def prefix(self, n: int) -> Transcript:
        return Transcript(self.rows[:n])

    def append(self, guess: Sequence[str], feedback: Feedback) -> Transcript:
        return Transcript(self.rows + (Row(tuple(guess), Feedback(*feedback)),), self.secret)

    def with_secret(self, secret: Sequence[str] | None) -> Transcript:
        return Transcript(self.rows, None if secret is None else tuple(secret))


def consistent(candidate: Sequence[str], history: Iterable[Row]) -> bool:
    return all(score(row.guess, candidate) == row.feedback for row in history)


def enumerate_codes(config: GameConfig) -> Iterator[Code]:
    """All M**N codes in lexicographic palette order."""
    return product(config.palette, repeat=config.positions)


def code_key(code: Sequence[str], config: GameConfig) -> tuple[int, ...]:
    """Sort key giving lexicographic palette order."""
    return tuple(config.index(c) for c in code)


# -- text formats ----------------------------------------------------------

_FEEDBACK_RE = re.compile(r"^\s*(\d+)\s*W\s+(\d+)\s*B\s*$", re.IGNORECASE)


class TranscriptError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def format_code(code: Sequence[str]) -> str:
    return " ".join(code)


def parse_code(text: str, config: GameConfig) -> Code:
    parts = text.split()
    if len(parts) == 1 and len(parts[0]) == config.positions:
        parts = list(parts[0])
    return config.check(parts)


def parse_feedback(text: str, config: GameConfig | None = None) -> Feedback:
    m = _FEEDBACK_RE.match(text)
    if not m:
        raise ValueError(f"feedback must look like '1W 2B', got {text.strip()!r}")
    fb = Feedback(int(m.group(1)), int(m.group(2)))
    if config is not None and not is_legal_feedback(fb, config.positions):
        raise InconsistentHistory(f"impossible feedback {fb} for {config.positions} positions")
    return fb


def format_row(row: Row, pins: bool = False) -> str:
    line = f"{format_code(row.guess)} | {row.feedback}"
    if pins:
        line += f"  # {row.feedback.pins()}" if any(row.feedback) else "  #"
    return line


def format_transcript(transcript: Transcript, pins: bool = False) -> str:
    lines = [format_row(r, pins) for r in transcript.rows]
    if transcript.secret is not None:
        lines.append(f"secret: {format_code(transcript.secret)}")
    return "\n".join(lines) + "\n"


def parse_transcript(text: str, config: GameConfig) -> Transcript:
    """Parse the line format ``B B Y Y R | 1W 1B`` with optional ``secret:`` line.

    Blank lines and ``#`` comments are ignored.
    """
    rows: list[Row] = []
    secret = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if secret is not None:
            raise TranscriptError(lineno, "content after the secret line")
        try:
            if line.lower().startswith("secret:"):
                secret = parse_code(line.split(":", 1)[1], config)
                continue
            if "|" not in line:
                raise ValueError("expected '<code> | <w>W <b>B'")
            code_text, fb_text = line.split("|", 1)
            code = config.check(code_text.split())
            fb = parse_feedback(fb_text)
            if fb.whites + fb.blacks > config.positions:
                raise ValueError(f"{fb} has more pins than positions")
        except ValueError as exc:
            raise TranscriptError(lineno, str(exc)) from None
        rows.append(Row(code, fb))
    return Transcript(tuple(rows), secret)


def worked_game_transcript() -> Transcript:
    """The six-row game of an experienced player, secret R R G Y G."""
    from importlib.resources import files

    text = files("hybridmind").joinpath("data/worked_game.txt").read_text(encoding="utf-8")
    return parse_transcript(text, GameConfig())
