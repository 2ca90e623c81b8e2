import random

import numpy as np
import pytest

from hybridmind.game import (
    ConfigError,
    Feedback,
    GameConfig,
    Transcript,
    TranscriptError,
    consistent,
    enumerate_codes,
    worked_game_transcript,
    format_transcript,
    is_legal_feedback,
    parse_code,
    parse_transcript,
    score,
)
from hybridmind.space import code_space

from conftest import DEFAULT, DESK, WORKED_ROWS, WORKED_SECRET, brute_codes, brute_score, worked


@pytest.mark.parametrize(
    "guess, expected",
    [("BBYYR", (1, 1)), ("OOBBB", (0, 0)), ("RRRGG", (3, 1)), ("RGRYG", (3, 2)), ("GRRYG", (3, 2)), ("RRGYG", (5, 0))],
)
def test_score_worked_game_rows(guess, expected):
    assert score(tuple(guess), WORKED_SECRET, DEFAULT) == expected


def test_score_identity():
    for code in random.Random(3).sample(list(enumerate_codes(DEFAULT)), 50):
        assert score(code, code) == (5, 0)


def test_score_rejects_bad_codes():
    with pytest.raises(ConfigError):
        score(tuple("BBYY"), WORKED_SECRET, DEFAULT)
    with pytest.raises(ConfigError):
        score(tuple("BBYYX"), WORKED_SECRET, DEFAULT)


def test_score_matches_brute_force_on_desk_sample():
    codes = brute_codes(DESK)
    rng = random.Random(11)
    for _ in range(2000):
        g, s = rng.choice(codes), rng.choice(codes)
        assert score(g, s) == brute_score(g, s)


def test_code_space_matches_brute_force():
    space = code_space(DESK)
    codes = brute_codes(DESK)
    assert [space.decode(k) for k in range(len(space))] == codes
    width = DESK.positions + 1
    for guess in [codes[0], codes[77], codes[500], codes[-1]]:
        fb = space.feedback_index(guess)
        assert [(int(x) // width, int(x) % width) for x in fb] == [brute_score(guess, s) for s in codes]


def test_exhaustive_pin_properties_desk():
    space = code_space(DESK)
    width = DESK.positions + 1
    table = np.stack([space.feedback_index(space.decode(k)) for k in range(len(space))])
    whites, blacks = table // width, table % width
    # exact-pin count and pin total are symmetric in (guess, secret)
    assert (whites == whites.T).all()
    assert ((whites + blacks) == (whites + blacks).T).all()
    # (N, 0) exactly on the diagonal
    assert ((whites == 4) == np.eye(len(space), dtype=bool)).all()
    # (N-1, 1) never occurs
    assert not ((whites == 3) & (blacks == 1)).any()
    assert (whites + blacks <= 4).all()


def test_legal_feedback():
    assert is_legal_feedback(Feedback(3, 2), 5)
    assert not is_legal_feedback(Feedback(4, 1), 5)
    assert not is_legal_feedback(Feedback(3, 3), 5)
    assert not is_legal_feedback(Feedback(-1, 0), 5)


def test_consistent():
    assert consistent(WORKED_SECRET, worked())
    assert consistent(tuple("BBBBB"), ())
    assert not consistent(tuple("BBBBB"), worked(2))


def test_consistent_count_rows_1_to_3_frozen():
    # frozen from a plain product() scan over the 32768 codes
    assert sum(consistent(c, worked(3)) for c in enumerate_codes(DEFAULT)) == 6


@pytest.mark.parametrize("m, n, total", [(1, 3, 1), (6, 4, 1296), (8, 5, 32768)])
def test_enumerate_codes_count(m, n, total):
    codes = list(enumerate_codes(GameConfig.with_colors(n, m)))
    assert len(codes) == total == len(set(codes))


def test_enumerate_codes_order():
    codes = list(enumerate_codes(DESK))
    assert codes[0] == tuple("BBBB") and codes[1] == tuple("BBBY") and codes[-1] == tuple("PPPP")


def test_config_validation():
    assert DEFAULT.palette == tuple("BYRGOPCM") and DEFAULT.positions == 5
    with pytest.raises(ConfigError):
        GameConfig(palette=("B", "B"))
    with pytest.raises(ConfigError):
        GameConfig(positions=0)
    with pytest.raises(ConfigError):
        GameConfig.with_colors(5, 0)


def test_transcript_round_trip():
    t = worked_game_transcript()
    assert [(r.guess, r.feedback) for r in t] == [(tuple(g), f) for g, f in WORKED_ROWS]
    assert t.secret == WORKED_SECRET
    assert parse_transcript(format_transcript(t), DEFAULT) == t
    assert format_transcript(t).splitlines()[0] == "B B Y Y R | 1W 1B"
    assert format_transcript(t).splitlines()[1] == "O O B B B | 0W 0B"


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("B B Y Y R | 1W 1B\nB B Y Y X | 0W 0B\n", 2),
        ("B B Y Y | 1W 1B\n", 1),
        ("\n\nB B Y Y R 1W 1B\n", 3),
        ("B B Y Y R | 4W 3B\n", 1),
        ("B B Y Y R | 1W 1B\nsecret: R R G Y\n", 2),
    ],
)
def test_transcript_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(TranscriptError) as err:
        parse_transcript(text, DEFAULT)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_parse_code_forms():
    assert parse_code("R R G Y G", DEFAULT) == WORKED_SECRET
    assert parse_code("RRGYG", DEFAULT) == WORKED_SECRET


def test_feedback_glyphs():
    assert Feedback(1, 1).pins() == "o ●"
    assert Feedback(3, 2).pins() == "o o o ● ●"
    assert str(Feedback(0, 0)) == "0W 0B"


def test_transcript_append_is_immutable():
    t = Transcript()
    t2 = t.append(tuple("BBYYR"), (1, 1))
    assert len(t) == 0 and len(t2) == 1
