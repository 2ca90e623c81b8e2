"""The two-phase hybrid codebreaker.

Phase one settles the secret's colors.  Each row's pin count is read as an
ordered list of color models, one per way of attributing the pins to the
colors of the guess, and the models chosen for successive rows are merged.
Phase two settles places.  The first row's white pins give ordered place
models such as ``[- - Y - -] < [- - - Y -] < [- - - - R]``.  Each one is
propagated against the whole board until a contradiction forces a backtrack
or the model is specific enough to play from.

Every choice point lives in a :class:`HypothesisLattice`.  A contradiction
advances the cursor of the deepest level that still has alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .game import (
    Code,
    Feedback,
    GameConfig,
    InconsistentHistory,
    Row,
    Transcript,
    code_key,
    consistent,
    format_code,
    is_legal_feedback,
    score,
)
from .models import (
    ANY_COLORS,
    Cell,
    ColorModel,
    Model,
    PlaceModel,
    at_least,
    canonical_place_model,
    denotation_mask,
    exactly,
    merge_color_models,
    render_color_model,
    render_place_model,
)
from .space import code_space

COMPARATORS = ("heuristic", "count")

Pattern = tuple[int, ...]
Trace = Callable[[str, str], None]


# -- patterns ----------------------------------------------------------------


def pattern_of(code: Sequence[str]) -> Pattern:
    """Color distribution of a row, e.g. ``B B Y Y R`` -> ``(2, 2, 1)``."""
    counts: dict[str, int] = {}
    for c in code:
        counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.values(), reverse=True))


def balanced_pattern(positions: int, parts: int) -> Pattern:
    q, r = divmod(positions, parts)
    return tuple([q + 1] * r + [q] * (parts - r))


def opening_pattern(config: GameConfig) -> Pattern:
    """Pairs of colors plus a single when N is odd (2/2/1 at N=5)."""
    parts = min(config.colors, (config.positions + 1) // 2)
    return balanced_pattern(config.positions, parts)


def pattern_code(pattern: Pattern, colors: Sequence[str]) -> Code:
    if len(pattern) > len(colors):
        raise ValueError(f"pattern {pattern} needs {len(pattern)} colors")
    return tuple(c for part, c in zip(pattern, colors) for _ in range(part))


def format_pattern(pattern: Pattern) -> str:
    return "/".join(map(str, pattern))


# -- interpretation ------------------------------------------------------------


def _distinct(code: Sequence[str]) -> list[str]:
    return list(dict.fromkeys(code))


def attribution_vectors(guess: Sequence[str], total: int) -> list[tuple[int, ...]]:
    """Ways to share ``total`` pins among the guess colors (first-appearance order)."""
    caps = [list(guess).count(c) for c in _distinct(guess)]
    return [v for v in product(*(range(k + 1) for k in caps)) if sum(v) == total]


def interpret_colors(
    guess: Sequence[str],
    feedback: Feedback,
    config: GameConfig,
    comparator: str = "heuristic",
    history: Sequence[Row] = (),
) -> list[ColorModel]:
    """Every color model compatible with one row's pin count, best first.

    A color credited with fewer pins than it has pawns in the guess is
    exhausted at that count; a color credited with all its pawns may have
    more in the secret.
    """
    guess = config.check(guess)
    total = feedback.whites + feedback.blacks
    colors = _distinct(guess)
    models = []
    for vec in attribution_vectors(guess, total):
        cons = {}
        for c, k in zip(colors, vec):
            cons[c] = at_least(k) if k == guess.count(c) else exactly(k)
        models.append(ColorModel(cons))
    if not models:
        raise InconsistentHistory(f"{total} pins cannot come from {format_code(guess)}")
    return order_models(models, history, comparator, config, reference=guess)


def interpret_places(
    colors: ColorModel, guess: Sequence[str], feedback: Feedback, config: GameConfig
) -> list[PlaceModel]:
    """Place models for one row: which of its pawns carry the white pins.

    Only subsets compatible with ``colors`` and with the row's own reply are
    kept, ordered left to right.
    """
    guess = config.check(guess)
    space = code_space(config)
    row_ok = space.feedback_index(guess) == space.feedback_code(feedback)
    out = []
    for subset in combinations(range(config.positions), feedback.whites):
        pm = PlaceModel.fixing({i: guess[i] for i in subset}, config.positions, colors)
        if (denotation_mask(pm, config) & row_ok).any():
            out.append(pm)
    return out


# -- ordering ------------------------------------------------------------------


def heuristic_key(model: Model, reference: Sequence[str], config: GameConfig) -> tuple:
    """Most plausible first, then leftmost first.

    For color models: pins spread evenly over more colors rank first (the
    sorted attribution is compared lexicographically, so ``1/1`` < ``2`` and
    ``2/2`` < ``3/1``); ties go to the model whose credited colors sit
    further left in the reference row.  Place models rank by their fixed
    positions, left to right.
    """
    if isinstance(model, PlaceModel):
        return (model.fixed_positions(), render_place_model(model))
    ref = list(reference)
    colors = _distinct(ref) + [c for c in config.palette if c not in ref]
    credited = [(c, model[c].low) for c in colors if model[c].low > 0]
    balance = tuple(sorted((k for _, k in credited), reverse=True))
    places = tuple(sorted(ref.index(c) if c in ref else len(ref) + config.index(c) for c, _ in credited))
    tail = tuple(-model[c].low for c in colors)
    return (balance, places, tail, render_color_model(model, config))


def order_models(
    models: Iterable[Model],
    history: Sequence[Row],
    comparator: str,
    config: GameConfig,
    reference: Sequence[str] | None = None,
) -> list[Model]:
    """Sort competing models.

    ``heuristic`` uses :func:`heuristic_key`.  ``count`` ranks by how many codes the
    model admits among those consistent with ``history`` (descending), with
    :func:`heuristic_key` breaking ties.  ``reference`` defaults to the last
    row's guess, or the palette when there is no history.
    """
    if comparator not in COMPARATORS:
        raise ValueError(f"unknown comparator {comparator!r}")
    models = list(models)
    if reference is None:
        reference = history[-1].guess if history else config.palette
    if comparator == "heuristic":
        return sorted(models, key=lambda m: heuristic_key(m, reference, config))
    live = code_space(config).consistent_mask(history)
    return sorted(
        models,
        key=lambda m: (-int((denotation_mask(m, config) & live).sum()), heuristic_key(m, reference, config)),
    )


# -- diagrammatic propagation ---------------------------------------------------


@dataclass(frozen=True)
class Propagation:
    refined: PlaceModel
    count: int
    codes: tuple[Code, ...]


def facts_from_codes(pm: PlaceModel, codes: Sequence[Code], config: GameConfig) -> PlaceModel:
    """Cells every code agrees on become fixed; colors no code uses at a
    wildcard become exclusions."""
    cells = []
    for i in range(config.positions):
        seen = {code[i] for code in codes}
        if len(seen) == 1:
            cells.append(Cell(seen.pop()))
        else:
            cells.append(Cell(None, frozenset(config.palette) - seen))
    return canonical_place_model(PlaceModel(tuple(cells), pm.colors))


def _search(pm: PlaceModel, history: Sequence[Row], config: GameConfig) -> list[Code]:
    """Fill the wildcards left to right, pruning on color counts and on
    every row's white and total pin counts."""
    n = config.positions
    cons = {c: pm.colors[c] for c in config.palette}
    domains = []
    for cell in pm.cells:
        if cell.color is not None:
            domains.append([cell.color])
        else:
            domains.append([c for c in config.palette if c not in cell.excluded])
    rows = [(r.guess, r.feedback.whites, r.feedback.whites + r.feedback.blacks) for r in history]
    guess_counts = [{c: g.count(c) for c in set(g)} for g, _, _ in rows]
    counts = dict.fromkeys(config.palette, 0)
    whites = [0] * len(rows)
    common = [0] * len(rows)
    code: list[str] = []
    found: list[Code] = []

    def extend(i: int) -> None:
        if i == n:
            if all(k.admits(counts[c]) for c, k in cons.items()):
                found.append(tuple(code))
            return
        left = n - i - 1
        for c in domains[i]:
            k = cons[c]
            if k.exact and counts[c] >= k.low:
                continue
            counts[c] += 1
            need = sum(max(0, kk.low - counts[cc]) for cc, kk in cons.items())
            ok = need <= left
            touched = []
            if ok:
                for r, (g, w, t) in enumerate(rows):
                    dw = g[i] == c
                    dc = counts[c] <= guess_counts[r].get(c, 0)
                    whites[r] += dw
                    common[r] += dc
                    touched.append(r)
                    if not (whites[r] <= w <= whites[r] + left and common[r] <= t <= common[r] + left):
                        ok = False
                        break
            if ok:
                code.append(c)
                extend(i + 1)
                code.pop()
            for r in touched:
                whites[r] -= rows[r][0][i] == c
                common[r] -= counts[c] <= guess_counts[r].get(c, 0)
            counts[c] -= 1

    extend(0)
    found.sort(key=lambda x: code_key(x, config))
    return found


def propagate(pm: PlaceModel, history: Sequence[Row], config: GameConfig) -> Propagation | None:
    """Codes of ``pm`` that fit every row, and the facts they force.

    Returns ``None`` when no code survives (the model contradicts the board).
    """
    if len(pm.cells) != config.positions:
        raise ValueError("place model length differs from positions")
    codes = _search(pm, history, config)
    if not codes:
        return None
    return Propagation(facts_from_codes(pm, codes, config), len(codes), tuple(codes))


def switch_candidates(
    guess: Sequence[str], pm: PlaceModel, history: Sequence[Row], config: GameConfig
) -> list[Code]:
    """Rows one transposition away from ``guess`` that fit the board.

    After a reply of N-2 whites and 2 blacks the secret is ``guess`` with two
    unequal pawns exchanged.  Pawns the place model pins down are left alone.
    """
    guess = config.check(guess)
    keep = {i for i, cell in enumerate(pm.cells) if cell.fixed and cell.color == guess[i]}
    out = []
    for i, j in combinations(range(config.positions), 2):
        if guess[i] == guess[j] or i in keep or j in keep:
            continue
        cand = list(guess)
        cand[i], cand[j] = cand[j], cand[i]
        cand = tuple(cand)
        if consistent(cand, history):
            out.append(cand)
    return out


# -- hypothesis lattice --------------------------------------------------------


class Exhausted(RuntimeError):
    """No alternative is left anywhere in the lattice."""


@dataclass(frozen=True)
class Hypothesis:
    model: Model
    rank_key: tuple
    origin: int


@dataclass
class Level:
    kind: str
    alternatives: tuple[Hypothesis, ...]
    cursor: int = 0

    @property
    def current(self) -> Hypothesis:
        return self.alternatives[self.cursor]

    @property
    def remaining(self) -> int:
        return len(self.alternatives) - self.cursor - 1


@dataclass
class HypothesisLattice:
    levels: list[Level] = field(default_factory=list)

    def push(self, alternatives: Sequence[Hypothesis], kind: str = "colors") -> Level:
        if not alternatives:
            raise ValueError("a decision point needs at least one alternative")
        level = Level(kind, tuple(alternatives))
        self.levels.append(level)
        return level

    def active(self) -> list[Hypothesis]:
        return [lv.current for lv in self.levels]

    def cursors(self) -> tuple[int, ...]:
        return tuple(lv.cursor for lv in self.levels)

    def backtrack(self) -> HypothesisLattice:
        """Advance the deepest level that has alternatives left and drop the
        levels below it.  Raises :class:`Exhausted` if there is none."""
        while self.levels:
            level = self.levels[-1]
            if level.remaining > 0:
                level.cursor += 1
                return self
            self.levels.pop()
        raise Exhausted("every alternative has been refuted")


def backtrack(lattice: HypothesisLattice) -> HypothesisLattice:
    return lattice.backtrack()


# -- solver --------------------------------------------------------------------


@dataclass
class SolverState:
    config: GameConfig
    comparator: str = "heuristic"
    history: Transcript = field(default_factory=Transcript)
    phase: str = "colors"
    lattice: HypothesisLattice = field(default_factory=HypothesisLattice)
    merged_colors: ColorModel = ANY_COLORS
    propagation: Propagation | None = None
    switch: tuple[Code, ...] = ()


def _fresh_colors(state: SolverState) -> list[str]:
    tested = {c for row in state.history for c in row.guess}
    m = state.merged_colors
    return [c for c in state.config.palette if c not in tested and not (m[c].exact and m[c].low == 0)]


def _fallback_guess(state: SolverState) -> Code:
    """First code of the current color model that fits the whole board."""
    config = state.config
    space = code_space(config)
    mask = denotation_mask(state.merged_colors, config) & space.consistent_mask(state.history)
    hits = np.flatnonzero(mask)
    if not len(hits):
        raise Exhausted("no code fits the active color model")
    return space.decode(int(hits[0]))


def _colors_guess(state: SolverState) -> Code:
    """Re-place one hypothesized color on squares it has not tried yet and
    fill the rest with a color not tested so far."""
    config, m = state.config, state.merged_colors
    n = config.positions
    played = {row.guess for row in state.history}
    fresh = _fresh_colors(state)
    if not fresh:
        return _fallback_guess(state)
    focus = next((c for c in config.palette if not m[c].exact and m[c].low > 0), None)
    if focus is None:
        focus = next((c for c in config.palette if m[c].exact and m[c].low > 0), None)
    if focus is not None and n > 1:
        tried = {i for row in state.history for i, c in enumerate(row.guess) if c == focus}
        order = [i for i in range(n) if i not in tried] + sorted(tried)
        spots = set(order[: min(n - n // 2, n - 1)])
        guess = tuple(focus if i in spots else fresh[0] for i in range(n))
    else:
        parts = min(len(fresh), (n + 1) // 2)
        guess = pattern_code(balanced_pattern(n, parts), fresh)
    if guess in played:
        return _fallback_guess(state)
    return guess


def choose_guess(state: SolverState) -> Code:
    config = state.config
    if not state.history.rows:
        return pattern_code(opening_pattern(config), config.palette)
    if state.phase == "places":
        if state.switch:
            return state.switch[0]
        return state.propagation.codes[0]
    return _colors_guess(state)


def _render(model: Model, config: GameConfig) -> str:
    if isinstance(model, ColorModel):
        return render_color_model(model, config)
    return render_place_model(model, config)


class HybridSolver:
    """Single-game solver; feed it rows with :meth:`observe`."""

    def __init__(self, config: GameConfig, comparator: str = "heuristic", trace: Trace | None = None) -> None:
        if comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {comparator!r}")
        self.state = SolverState(config, comparator)
        self._trace = trace
        self._merge_seen: tuple | None = None
        self._live = np.ones(config.size, dtype=bool)

    @classmethod
    def from_history(cls, history: Iterable[Row], config: GameConfig, comparator: str = "heuristic",
                     trace: Trace | None = None) -> HybridSolver:
        solver = cls(config, comparator, trace)
        for row in history:
            solver.observe(row.guess, row.feedback)
        return solver

    def emit(self, event: str, text: str | Callable[[], str]) -> None:
        if self._trace is not None:
            self._trace(event, text() if callable(text) else text)

    def next_guess(self) -> Code:
        guess = choose_guess(self.state)
        self.emit("guess", format_code(guess))
        return guess

    def observe(self, guess: Sequence[str], feedback: Feedback | tuple[int, int]) -> None:
        st = self.state
        guess = st.config.check(guess)
        feedback = Feedback(*feedback)
        if not is_legal_feedback(feedback, st.config.positions):
            raise InconsistentHistory(f"impossible feedback {feedback}")
        st.history = st.history.append(guess, feedback)
        space = code_space(st.config)
        self._live = self._live & (space.feedback_index(guess) == space.feedback_code(feedback))
        if feedback.whites == st.config.positions:
            return
        self._settle()

    # the lattice holds one "colors" level per interpreted row, then at most
    # one "places" level; rows played after the places level exists reach it
    # only through propagation
    def _color_levels(self) -> list[Level]:
        return [lv for lv in self.state.lattice.levels if lv.kind == "colors"]

    def _merged(self) -> ColorModel | None:
        config = self.state.config
        levels = self._color_levels()
        merged = ANY_COLORS
        for depth, level in enumerate(levels):
            before = merged
            merged = merge_color_models(merged, level.current.model, config)
            seen = (depth, self.state.lattice.cursors())
            if (self._trace is not None and depth == len(levels) - 1
                    and self.state.lattice.levels[-1] is level and seen != self._merge_seen):
                self._merge_seen = seen
                self.emit(
                    "merge",
                    f"{_render(before, config)} + {_render(level.current.model, config)} -> "
                    + ("contradiction" if merged is None else _render(merged, config)),
                )
            if merged is None:
                return None
        return merged

    def _backtrack(self) -> None:
        lat = self.state.lattice
        lat.backtrack()
        level = lat.levels[-1]
        self.emit("backtrack", lambda: f"row {level.current.origin + 1}: {_render(level.current.model, self.state.config)}")

    def _settle(self) -> None:
        st = self.state
        config, lat = st.config, st.lattice
        history = st.history
        while True:
            merged = self._merged()
            if merged is None:
                self.emit("contradiction", lambda: "color models cannot be merged")
                self._backtrack()
                continue
            has_places = bool(lat.levels) and lat.levels[-1].kind == "places"
            depth = len(self._color_levels())
            if not has_places and depth < len(history):
                row = history[depth]
                models = interpret_colors(row.guess, row.feedback, config, st.comparator, history.prefix(depth + 1))
                lat.push([Hypothesis(m, heuristic_key(m, row.guess, config), depth) for m in models], "colors")
                self.emit(
                    "interpret",
                    f"row {depth + 1} {format_code(row.guess)} {row.feedback}: "
                    + " < ".join(_render(m, config) for m in models),
                )
                continue
            st.merged_colors = merged
            st.propagation, st.switch = None, ()
            if not merged.is_exhausted(config):
                st.phase = "colors"
                live = denotation_mask(merged, config) & self._live
                if not live.any():
                    self.emit("contradiction", lambda: f"{_render(merged, config)} fits no code on the board")
                    self._backtrack()
                    continue
                return
            if not has_places:
                root = history[0]
                places = interpret_places(merged, root.guess, root.feedback, config)
                places = order_models(places, history, st.comparator, config, reference=root.guess)
                if not places:
                    self.emit("contradiction", lambda: f"no place model of row 1 fits {_render(merged, config)}")
                    self._backtrack()
                    continue
                lat.push([Hypothesis(pm, heuristic_key(pm, root.guess, config), 0) for pm in places], "places")
                self.emit("place-models", lambda: " < ".join(_render(pm, config) for pm in places))
            pm = lat.levels[-1].current.model
            prop = propagate(pm, history, config)
            if prop is None:
                self.emit("propagate", lambda: f"{_render(pm, config)} -> contradiction")
                self.emit("contradiction", lambda: f"{_render(pm, config)} conflicts with the board")
                self._backtrack()
                continue
            self.emit("propagate", lambda: f"{_render(pm, config)} -> {_render(prop.refined, config)} ({prop.count} codes)")
            last = history[-1]
            if last.feedback == (config.positions - 2, 2):
                cands = switch_candidates(last.guess, prop.refined, history, config)
                self.emit("switch", lambda: f"{format_code(last.guess)} -> " + (", ".join(map(format_code, cands)) or "none"))
                if not cands:
                    self._backtrack()
                    continue
                st.switch = tuple(cands)
            st.phase = "places"
            st.propagation = prop
            return


def solve(
    oracle: Callable[[Code], Feedback],
    config: GameConfig,
    comparator: str = "heuristic",
    trace: Trace | None = None,
) -> Transcript:
    """Play until the oracle answers N whites."""
    solver = HybridSolver(config, comparator, trace)
    limit = config.size
    while True:
        guess = solver.next_guess()
        fb = Feedback(*oracle(guess))
        try:
            solver.observe(guess, fb)
        except Exhausted as exc:
            raise RuntimeError(f"internal invariant violated: {exc}") from exc
        if fb.whites == config.positions:
            return solver.state.history
        if len(solver.state.history) >= limit:
            raise RuntimeError("solver exceeded M**N guesses")


def solve_secret(secret: Sequence[str], config: GameConfig, comparator: str = "heuristic",
                 trace: Trace | None = None) -> Transcript:
    secret = config.check(secret)
    return solve(lambda g: score(g, secret), config, comparator, trace).with_secret(secret)
