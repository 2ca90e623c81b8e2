from importlib.resources import files

import pytest

from hybridmind.cli import main, play
from hybridmind.game import GameConfig, format_transcript, parse_transcript, score
from hybridmind.oracles import run_strategy

from conftest import DEFAULT, DESK, WORKED_SECRET

WORKED_GAME = str(files("hybridmind") / "data" / "worked_game.txt")


def run(argv):
    lines = []
    code = main(argv, lines.append)
    return code, "\n".join(lines)


def test_replay_worked_game(capsys):
    code, text = run(["replay", WORKED_GAME])
    assert code == 0
    assert text.splitlines()[0] == "row 1: B B Y Y R | 1W 1B  PASS"
    assert text.splitlines()[-1] == "6/6 PASS"


def test_replay_pins():
    _, text = run(["replay", WORKED_GAME, "--pins"])
    assert text.splitlines()[2] == "row 3: R R R G G | 3W 1B  PASS  o o o ●"


def test_replay_tampered_row(tmp_path):
    src = open(WORKED_GAME, encoding="utf-8").read().replace("R R R G G | 3W 1B", "R R R G G | 2W 2B")
    path = tmp_path / "t.txt"
    path.write_text(src, encoding="utf-8")
    code, text = run(["replay", str(path)])
    assert code == 1
    assert "row 3: R R R G G | 2W 2B  FAIL (expected 3W 1B)" in text
    assert text.splitlines()[-1] == "5/6 PASS"


def test_replay_empty_transcript_is_vacuous(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("secret: R R G Y G\n", encoding="utf-8")
    assert run(["replay", str(path)]) == (0, "0/0 PASS")


def test_replay_without_secret(tmp_path, capsys):
    path = tmp_path / "t.txt"
    path.write_text("B B Y Y R | 1W 1B\n", encoding="utf-8")
    assert run(["replay", str(path)])[0] == 2
    assert "secret" in capsys.readouterr().err


def test_replay_parse_error_names_line(tmp_path, capsys):
    path = tmp_path / "t.txt"
    path.write_text("# header\nB B Y Y R | 1W 1B\nB B Y Y | 0W 0B\n", encoding="utf-8")
    assert run(["replay", str(path)])[0] == 2
    assert "line 3" in capsys.readouterr().err


def test_solve_verbose_trace():
    code, text = run(["solve", "--secret", "RRGYG", "--verbose"])
    assert code == 0
    assert "# propagate: [- - - Y -] -> [R R G Y G] (1 codes)" in text
    assert "# backtrack: row 1: [- - - Y -]" in text
    assert text.splitlines()[-2:] == ["R R G Y G | 5W 0B", "secret: R R G Y G"]


def test_solve_output_replays(tmp_path):
    for strategy in ("hybrid", "filter"):
        code, text = run(["solve", "--secret", "RRGYG", "--strategy", strategy, "--verbose"])
        path = tmp_path / f"{strategy}.txt"
        path.write_text(text + "\n", encoding="utf-8")
        code, out = run(["replay", str(path)])
        assert code == 0 and out.endswith("PASS")


def test_solve_is_deterministic():
    assert run(["solve", "--secret", "CMOPB"]) == run(["solve", "--secret", "CMOPB"])


def test_simulate_desk_exhaustive():
    code, text = run(["simulate", "--positions", "4", "--colors", "6", "--strategy", "filter", "--exhaustive"])
    assert code == 0
    assert "  filter    N=4 M=6      1296  5.7647    9" in text


def test_simulate_budget_refusal(capsys):
    assert run(["simulate", "--exhaustive"])[0] == 2
    assert "budget" in capsys.readouterr().err


def test_simulate_csv():
    code, text = run(["simulate", "--positions", "3", "--colors", "3", "--exhaustive", "--csv"])
    assert text.splitlines()[0].startswith("kind,name,positions")
    assert text.splitlines()[1].startswith("tournament,hybrid,3,3,27,")


def test_analyze_lists_every_pattern():
    code, text = run(["analyze"])
    assert code == 0
    for label in ["5", "4/1", "3/2", "3/1/1", "2/2/1", "2/1/1/1", "1/1/1/1/1"]:
        assert f" {label} " in text
    assert "2/2/1 has maximal entropy: no" in text


@pytest.mark.parametrize(
    "argv",
    [["solve"], ["solve", "--secret", "RRGY"], ["simulate", "--colors", "0"], ["analyze", "-n", "0"],
     ["play", "--strategy", "magic"], ["frobnicate"], ["simulate", "--colors", "20"]],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as err:
        code = main(argv, lambda s: None)
        raise SystemExit(code)
    assert err.value.code == 2


def scripted(answers):
    answers = list(answers)
    return lambda prompt: answers.pop(0) if answers else None


def honest(secret, config):
    """A reader that answers each printed guess truthfully."""
    state = {}

    def out(line):
        lines.append(line)
        if line.startswith("guess "):
            state["guess"] = tuple(line.split(": ", 1)[1].split())

    def read(prompt):
        fb = score(state["guess"], secret, config)
        return f"{fb.whites}W {fb.blacks}B"

    lines = []
    return read, out, lines


@pytest.mark.parametrize("strategy", ["hybrid", "filter", "entropy"])
def test_play_against_honest_human(strategy):
    read, out, lines = honest(WORKED_SECRET, DEFAULT)
    assert play(strategy, DEFAULT, read, out) == 0
    assert lines[-1].startswith("solved in") and lines[-1].endswith("R R G Y G")
    expected = len(run_strategy(strategy, WORKED_SECRET, DEFAULT))
    assert lines[-1].startswith(f"solved in {expected} guesses")


def test_play_immediate_win():
    lines = []
    assert play("hybrid", DEFAULT, scripted(["5W 0B"]), lines.append) == 0
    assert lines == ["guess 1: B B Y Y R", "solved in 1 guesses: B B Y Y R"]


def test_play_rejects_impossible_and_malformed_feedback():
    lines = []
    assert play("hybrid", DEFAULT, scripted(["4W 1B", "three", "5W 0B"]), lines.append) == 0
    assert any("impossible feedback 4W 1B" in line for line in lines)
    assert any("could not read feedback" in line for line in lines)


def test_play_contradiction_exits_3():
    lines = []
    code = play("hybrid", DESK, scripted(["0W 0B", "0W 0B", "0W 0B", "0W 0B", "0W 0B"]), lines.append)
    assert code == 3
    assert lines[-1] == "feedback history is contradictory"


def test_play_end_of_input():
    lines = []
    assert play("filter", DEFAULT, scripted([]), lines.append) == 1
    assert lines[-1] == "aborted: end of input"


def test_play_out_of_rows():
    config = GameConfig.with_colors(4, 6, max_rows=2)
    read, out, lines = honest(tuple("PPPO"), config)
    assert play("filter", config, read, out) == 1
    assert lines[-1] == "out of rows after 2 guesses"


def test_play_verbose_and_pins():
    read, out, lines = honest(WORKED_SECRET, DEFAULT)
    play("hybrid", DEFAULT, read, out, verbose=True, pins=True)
    assert "pins: o ●" in lines
    assert any(line.startswith("# interpret:") for line in lines)


def test_transcript_written_by_solve_parses():
    t = run_strategy("hybrid", WORKED_SECRET, DEFAULT)
    assert parse_transcript(format_transcript(t), DEFAULT) == t
