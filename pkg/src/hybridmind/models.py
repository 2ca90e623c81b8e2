"""Limited-abstraction partial models of the secret.

A :class:`ColorModel` constrains how many pawns of each color the secret
holds.  Square brackets mark an *exhausted* count (``[1Y]`` = exactly one
yellow), a bare count is a lower bound (``1R`` = at least one red) and
``noR`` is the exhausted zero.  A :class:`PlaceModel` is a partial row such
as ``[- - Y - -]`` whose wildcards are filled under a color model.

Denotations (the set of complete codes a model admits) are computed over
the whole code space, so every count here is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .game import Code, ConfigError, GameConfig
from .space import code_space


@dataclass(frozen=True, order=True)
class CountConstraint:
    """``low`` pawns at least; exactly ``low`` when ``exact``."""

    low: int = 0
    exact: bool = False

    def __post_init__(self) -> None:
        if self.low < 0:
            raise ValueError("count must be >= 0")

    @property
    def unconstrained(self) -> bool:
        return self.low == 0 and not self.exact

    def admits(self, n: int) -> bool:
        return n == self.low if self.exact else n >= self.low

    def __str__(self) -> str:
        if self.exact:
            return f"Exactly({self.low})"
        return f"AtLeast({self.low})" if self.low else "Unconstrained"


def exactly(k: int) -> CountConstraint:
    return CountConstraint(k, True)


def at_least(k: int) -> CountConstraint:
    return CountConstraint(k, False)


UNCONSTRAINED = CountConstraint()


def intersect(a: CountConstraint, b: CountConstraint) -> CountConstraint | None:
    """Conjunction of two count constraints, ``None`` when incompatible."""
    if a.exact and b.exact:
        return a if a.low == b.low else None
    if a.exact or b.exact:
        ex, other = (a, b) if a.exact else (b, a)
        return ex if ex.low >= other.low else None
    return at_least(max(a.low, b.low))


class ColorModel:
    """Immutable map color -> :class:`CountConstraint`; absent colors are free."""

    __slots__ = ("_items", "_map")

    def __init__(self, constraints: Mapping[str, CountConstraint] | Iterable = ()) -> None:
        items = dict(constraints)
        self._items = tuple(sorted((c, k) for c, k in items.items() if not k.unconstrained))
        self._map = dict(self._items)

    def __getitem__(self, color: str) -> CountConstraint:
        return self._map.get(color, UNCONSTRAINED)

    def items(self) -> tuple[tuple[str, CountConstraint], ...]:
        return self._items

    def colors(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ColorModel) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{c}={k}" for c, k in self._items)
        return f"ColorModel({body})"

    @property
    def lower_sum(self) -> int:
        return sum(k.low for _, k in self._items)

    def is_exhausted(self, config: GameConfig) -> bool:
        """Every palette color has an exact count, and they sum to N."""
        return (
            all(self[c].exact for c in config.palette)
            and sum(self[c].low for c in config.palette) == config.positions
        )

    def multiset(self, config: GameConfig) -> dict[str, int]:
        return {c: self[c].low for c in config.palette if self[c].low}


ANY_COLORS = ColorModel()


@dataclass(frozen=True)
class Cell:
    """A fixed pawn, or a wildcard that must avoid ``excluded`` colors."""

    color: str | None = None
    excluded: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.color is not None and self.excluded:
            raise ValueError("a fixed cell carries no exclusions")

    @property
    def fixed(self) -> bool:
        return self.color is not None

    def render(self, palette: Sequence[str] = ()) -> str:
        if self.color is not None:
            return self.color
        if not self.excluded:
            return "-"
        order = {c: i for i, c in enumerate(palette)}
        return "-{≠" + "".join(sorted(self.excluded, key=lambda c: (order.get(c, len(order)), c))) + "}"


WILD = Cell()


@dataclass(frozen=True)
class PlaceModel:
    cells: tuple[Cell, ...]
    colors: ColorModel = ANY_COLORS

    @classmethod
    def wildcard(cls, positions: int, colors: ColorModel = ANY_COLORS) -> PlaceModel:
        return cls((WILD,) * positions, colors)

    @classmethod
    def fixing(cls, assignment: Mapping[int, str], positions: int, colors: ColorModel = ANY_COLORS) -> PlaceModel:
        cells = tuple(Cell(assignment[i]) if i in assignment else WILD for i in range(positions))
        return cls(cells, colors)

    def fixed_positions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c.fixed)

    def __str__(self) -> str:
        return render_place_model(self)


Model = Union[ColorModel, PlaceModel]


# -- semantics ---------------------------------------------------------------


def satisfies_color_model(code: Sequence[str], m: ColorModel) -> bool:
    return all(k.admits(sum(1 for x in code if x == c)) for c, k in m.items())


def satisfies(code: Sequence[str], m: Model) -> bool:
    if isinstance(m, ColorModel):
        return satisfies_color_model(code, m)
    for x, cell in zip(code, m.cells):
        if cell.color is not None and x != cell.color:
            return False
        if x in cell.excluded:
            return False
    return satisfies_color_model(code, m.colors)


def _check_colors(m: ColorModel, config: GameConfig) -> None:
    for c in m.colors():
        if c not in config.palette:
            raise ConfigError(f"model mentions color {c!r} outside the palette")


def denotation_mask(m: Model, config: GameConfig) -> np.ndarray:
    """Boolean mask over :class:`~hybridmind.space.CodeSpace` of codes satisfying ``m``."""
    space = code_space(config)
    colors = m if isinstance(m, ColorModel) else m.colors
    _check_colors(colors, config)
    mask = np.ones(len(space), dtype=bool)
    for c, k in colors.items():
        col = space.counts[:, config.index(c)]
        mask &= (col == k.low) if k.exact else (col >= k.low)
    if isinstance(m, PlaceModel):
        if len(m.cells) != config.positions:
            raise ConfigError("place model length differs from positions")
        for i, cell in enumerate(m.cells):
            column = space.codes[:, i]
            if cell.color is not None:
                mask &= column == config.index(cell.color)
            for c in cell.excluded:
                mask &= column != config.index(c)
    return mask


def denotation(m: Model, config: GameConfig) -> list[Code]:
    space = code_space(config)
    return [space.decode(k) for k in np.flatnonzero(denotation_mask(m, config))]


def denotation_count(m: Model, config: GameConfig) -> int:
    return int(denotation_mask(m, config).sum())


def specificity_leq(a: Model, b: Model, config: GameConfig) -> bool:
    """True iff ``a`` is at least as specific as ``b`` (denotation inclusion)."""
    return not bool((denotation_mask(a, config) & ~denotation_mask(b, config)).any())


def is_empty(m: ColorModel, config: GameConfig) -> bool:
    """Whether no code of ``config`` satisfies the color model."""
    _check_colors(m, config)
    if m.lower_sum > config.positions:
        return True
    if all(m[c].exact for c in config.palette):
        return m.lower_sum != config.positions
    return False


def normalize_color_model(m: ColorModel, config: GameConfig) -> ColorModel:
    """Close the model under the row length: counts that must fill the row
    become exhausted.  Empty models are returned unchanged."""
    _check_colors(m, config)
    if is_empty(m, config):
        return m
    n = config.positions
    cons = {c: m[c] for c in config.palette}
    while True:
        before = dict(cons)
        exact_sum = sum(k.low for k in cons.values() if k.exact)
        lower_sum = sum(k.low for k in cons.values())
        if exact_sum == n:
            cons = {c: k if k.exact else exactly(0) for c, k in cons.items()}
        elif lower_sum == n:
            cons = {c: exactly(k.low) for c, k in cons.items()}
        else:
            open_colors = [c for c, k in cons.items() if not k.exact]
            if len(open_colors) == 1:
                cons[open_colors[0]] = exactly(n - exact_sum)
        if cons == before:
            return ColorModel(cons)


def merge_color_models(a: ColorModel, b: ColorModel, config: GameConfig) -> ColorModel | None:
    """Conjunction of two color models, normalized; ``None`` on contradiction."""
    merged = {}
    for c in set(a.colors()) | set(b.colors()):
        k = intersect(a[c], b[c])
        if k is None:
            return None
        merged[c] = k
    result = ColorModel(merged)
    if is_empty(result, config):
        return None
    return normalize_color_model(result, config)


def implied_exclusions(pm: PlaceModel) -> frozenset[str]:
    """Colors that no wildcard can take: their exact count is already used
    up by fixed cells (this covers ``noC``)."""
    fixed = [c.color for c in pm.cells if c.fixed]
    return frozenset(c for c, k in pm.colors.items() if k.exact and fixed.count(c) >= k.low)


def canonical_place_model(pm: PlaceModel) -> PlaceModel:
    """Drop exclusions already implied by the color model."""
    implied = implied_exclusions(pm)
    cells = tuple(c if c.fixed else Cell(None, c.excluded - implied) for c in pm.cells)
    return PlaceModel(cells, pm.colors)


# -- text syntax ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\[\s*(\d+)\s*([A-Z])\s*\]|(\d+)\s*([A-Z])|no\s*([A-Z])|(\S+)")
_CELL_RE = re.compile(r"-\{(?:≠|!)([A-Z]+)\}|-|([A-Z])|(\S)")


def render_color_model(m: ColorModel, config: GameConfig | None = None) -> str:
    """``[1B][1Y] noR`` style text.

    Exclusions implied by exhausted counts summing to N are not printed.
    """
    order = config.palette if config is not None else tuple(sorted(m.colors()))
    order = tuple(order) + tuple(c for c in m.colors() if c not in order)
    exact = [(c, m[c].low) for c in order if m[c].exact and m[c].low > 0]
    lower = [(c, m[c].low) for c in order if not m[c].exact and m[c].low > 0]
    closed = sum(k for _, k in exact) == (config.positions if config else -1)
    zeros = [] if closed else [c for c in order if m[c].exact and m[c].low == 0]
    groups = []
    if exact:
        groups.append("".join(f"[{k}{c}]" for c, k in exact))
    groups += [f"{k}{c}" for c, k in lower]
    groups += [f"no{c}" for c in zeros]
    return " ".join(groups) if groups else "any"


def parse_color_model(text: str, config: GameConfig | None = None) -> ColorModel:
    text = text.strip()
    if text in ("", "any"):
        return ANY_COLORS
    cons: dict[str, CountConstraint] = {}
    for m in _TOKEN_RE.finditer(text):
        if m.group(6):
            raise ValueError(f"cannot parse color model token {m.group(6)!r}")
        if m.group(1):
            color, k = m.group(2), exactly(int(m.group(1)))
        elif m.group(3):
            color, k = m.group(4), at_least(int(m.group(3)))
        else:
            color, k = m.group(5), exactly(0)
        if color in cons:
            raise ValueError(f"color {color} constrained twice")
        cons[color] = k
    model = ColorModel(cons)
    if config is not None:
        _check_colors(model, config)
        if sum(k.low for k in cons.values() if k.exact) == config.positions:
            # closed form printed without its implied exclusions
            model = normalize_color_model(model, config)
    return model


def render_place_model(pm: PlaceModel, config: GameConfig | None = None, with_colors: bool = False) -> str:
    palette = config.palette if config is not None else ()
    body = "[" + " ".join(c.render(palette) for c in pm.cells) + "]"
    if with_colors and pm.colors != ANY_COLORS:
        body += " over " + render_color_model(pm.colors, config)
    return body


def parse_place_model(text: str, config: GameConfig | None = None) -> PlaceModel:
    text = text.strip()
    cells_text, _, colors_text = text.partition(" over ")
    cells_text = cells_text.strip()
    if not (cells_text.startswith("[") and cells_text.endswith("]")):
        raise ValueError("place model must be bracketed, e.g. [- - Y - -]")
    cells = []
    for m in _CELL_RE.finditer(cells_text[1:-1].replace(" ", "")):
        if m.group(3):
            raise ValueError(f"bad place model cell {m.group(3)!r}")
        if m.group(2):
            cells.append(Cell(m.group(2)))
        else:
            cells.append(Cell(None, frozenset(m.group(1) or "")))
    if config is not None and len(cells) != config.positions:
        raise ValueError(f"place model has {len(cells)} cells, expected {config.positions}")
    colors = parse_color_model(colors_text, config) if colors_text else ANY_COLORS
    return PlaceModel(tuple(cells), colors)
