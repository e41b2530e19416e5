"""Goal-directed transformation search over the combined move graph.

Moves are horizontal edits (insert/delete/substitute) and vertical
generator applications.  Target goals are solved by A* with an admissible,
consistent heuristic; objective goals by uniform-cost search that stops once
the path cost alone exceeds the best terminal value seen.  Among equal-cost
optima the script with the lexicographically smallest step encoding wins.
"""

import heapq
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .fiber import ROT13, GeneratorSet, Rot13Generators, generators_from_dict, rot13, shift_at
from .space import (ALPHABET, DEFAULT_MAX_LENGTH, NULL, INSDEL_COSTS, EditCostModel, InvalidInput,
                    Sequence, apply_edit, as_sequence, as_word, edit_script, horizontal_edits)

SCRIPT_FORMAT_VERSION = 1


class BudgetExceeded(RuntimeError):
    """The expansion budget ran out before optimality was proven.

    ``best`` holds the best complete script known at that point, or None.
    """

    def __init__(self, message, best=None, expansions=0):
        super().__init__(message)
        self.best = best
        self.expansions = expansions


class ReplayError(ValueError):
    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


@dataclass(frozen=True)
class Step:
    """One atomic move.

    ``family`` is ``"H"`` (horizontal edit) or ``"V"`` (vertical generator).
    For edits ``value`` is the inserted/substituted byte (None for deletes);
    for generators it is the signed number of alphabet steps.
    """

    family: str
    op: str
    position: int
    value: Optional[int]
    cost: int

    def key(self):
        return (self.family, self.op, self.position, -1 if self.value is None else self.value)

    def describe(self):
        if self.family == "H":
            if self.op == "delete":
                return f"delete @{self.position}"
            return f"{self.op} {bytes([self.value])!r} @{self.position}"
        return f"{self.op}{self.value:+d} @{self.position}"

    def to_dict(self):
        return {"family": self.family, "op": self.op, "position": self.position,
                "value": self.value, "cost": self.cost}

    @classmethod
    def from_dict(cls, d):
        return cls(d["family"], d["op"], d["position"], d.get("value"), d["cost"])


@dataclass
class TransformScript:
    start: bytes
    end: bytes
    steps: list = field(default_factory=list)

    @property
    def total_cost(self):
        return sum(s.cost for s in self.steps)

    @property
    def vertical_count(self):
        return sum(1 for s in self.steps if s.family == "V")

    @property
    def horizontal_count(self):
        return sum(1 for s in self.steps if s.family == "H")

    def key(self):
        return tuple(s.key() for s in self.steps)

    def to_dict(self):
        return {
            "version": SCRIPT_FORMAT_VERSION,
            "start": list(self.start),
            "end": list(self.end),
            "total_cost": self.total_cost,
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("version") != SCRIPT_FORMAT_VERSION:
            raise InvalidInput(f"unsupported script format version {d.get('version')!r}")
        script = cls(bytes(d["start"]), bytes(d["end"]), [Step.from_dict(s) for s in d["steps"]])
        if "total_cost" in d and d["total_cost"] != script.total_cost:
            raise InvalidInput("total_cost does not match the step costs")
        return script

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MoveConfig:
    costs: EditCostModel = INSDEL_COSTS
    vertical: Optional[object] = None
    vertical_step_cost: int = 1
    max_expansions: int = 200_000
    horizontal: bool = True
    # bytes available to insertions and substitutions
    symbols: tuple = ALPHABET
    max_length: int = DEFAULT_MAX_LENGTH

    def __post_init__(self):
        if not self.horizontal and self.vertical is None:
            raise InvalidInput("at least one move family must be enabled")
        if self.vertical_step_cost < 1:
            raise InvalidInput("vertical step cost must be positive")
        if self.max_expansions < 1:
            raise InvalidInput("expansion budget must be positive")
        object.__setattr__(self, "symbols", tuple(sorted(set(self.symbols))))
        for s in self.symbols:
            if s not in ALPHABET:
                raise InvalidInput(f"symbol {s!r} is not in the alphabet")

    def to_dict(self):
        return {
            "costs": self.costs.to_dict(),
            "vertical": self.vertical.to_dict() if self.vertical is not None else None,
            "vertical_step_cost": self.vertical_step_cost,
            "max_expansions": self.max_expansions,
            "horizontal": self.horizontal,
            "symbols": list(self.symbols),
            "max_length": self.max_length,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            costs=EditCostModel.from_dict(d["costs"]),
            vertical=generators_from_dict(d.get("vertical")),
            vertical_step_cost=d.get("vertical_step_cost", 1),
            max_expansions=d.get("max_expansions", 200_000),
            horizontal=d.get("horizontal", True),
            symbols=tuple(d.get("symbols", ALPHABET)),
            max_length=d.get("max_length", DEFAULT_MAX_LENGTH),
        )


@dataclass(frozen=True)
class GoalSpec:
    """Either a target word, or an objective minimized together with path cost.

    ``predicate`` selects the words eligible as terminals of an objective
    search (all words by default).
    """

    target: Optional[bytes] = None
    objective: Optional[Callable[[bytes], int]] = None
    predicate: Optional[Callable[[bytes], bool]] = None

    def __post_init__(self):
        if (self.target is None) == (self.objective is None):
            raise InvalidInput("a goal needs exactly one of target or objective")

    @classmethod
    def word(cls, w):
        return cls(target=as_word(w))

    @classmethod
    def minimize(cls, objective, predicate=None):
        return cls(objective=objective, predicate=predicate)

    @property
    def kind(self):
        return "target" if self.target is not None else "objective"


_PUNCT_KEEP = frozenset(b" ")


def canonical_goal(w) -> bytes:
    """Drop NULLs and punctuation, lowercase letters, keep order."""
    w = as_word(w)
    out = bytearray()
    for c in w:
        if 65 <= c <= 90:
            out.append(c + 32)
        elif 97 <= c <= 122 or 48 <= c <= 57 or c in _PUNCT_KEEP:
            out.append(c)
    return bytes(out)


def rot13_objective(w) -> int:
    """Hamming distance between ``w`` and the rot13 of its reversal."""
    w = as_word(w)
    mirror = rot13(w[::-1])
    return sum(1 for a, b in zip(w, mirror) if a != b) + abs(len(w) - len(mirror))


def is_lowercase_word(w) -> bool:
    return all(97 <= c <= 122 for c in w)


def rot13_goal():
    return GoalSpec.minimize(rot13_objective, is_lowercase_word)


LOWERCASE = tuple(range(97, 123))


def rot13_config(**kw):
    """Move configuration for lowercase words with per-character rot13 flips."""
    kw.setdefault("costs", EditCostModel(1, 1, 1))
    kw.setdefault("vertical", ROT13)
    kw.setdefault("symbols", LOWERCASE)
    return MoveConfig(**kw)


def insdel_config(vertical=None, **kw):
    """Ins/del horizontal moves with unit-cost vertical steps.

    ``vertical`` may be None, ``"unit"``, ``"shift31"`` or a generator set.
    """
    if vertical == "unit":
        vertical = GeneratorSet(1)
    elif vertical == "shift31":
        vertical = GeneratorSet(31)
    return MoveConfig(costs=INSDEL_COSTS, vertical=vertical, **kw)


def neighbors(x: Sequence, config: MoveConfig):
    """Yield ``(Step, successor)`` for every atomic move out of ``x``."""
    if config.horizontal:
        for op, p, sym, cost, y in horizontal_edits(x, config.costs, config.symbols, config.max_length):
            yield Step("H", op, p, sym, cost), y
    if config.vertical is not None:
        cv = config.vertical_step_cost
        name = config.vertical.name
        for j, s, y in config.vertical.moves(x):
            if len(y) > config.max_length:
                continue
            yield Step("V", name, j, s, cv), y


class _Heuristic:
    """Lower bound on the remaining cost to reach a fixed target.

    Edit distance on zero-padded sequences where a substitution costs the
    cheapest of: a real substitution, a chain of vertical steps, or a
    delete+insert pair.  Every atomic move changes this quantity by at most
    its own cost, and it obeys the triangle inequality, so it is admissible
    and consistent.
    """

    def __init__(self, target: Sequence, config: MoveConfig):
        self.target = target.entries
        self.config = config
        inf = float("inf")
        self.ins = config.costs.insert if config.horizontal else inf
        self.dele = config.costs.delete if config.horizontal else inf
        self._sub = {}
        self._memo = {}

    def sub(self, a, b):
        if a == b:
            return 0
        key = (a, b)
        c = self._sub.get(key)
        if c is None:
            cfg = self.config
            c = float("inf")
            if cfg.horizontal:
                c = cfg.costs.insert + cfg.costs.delete
                if cfg.costs.substitute is not None:
                    c = min(c, cfg.costs.substitute)
            if cfg.vertical is not None:
                d = cfg.vertical.symbol_distance(a, b)
                if d is not None:
                    c = min(c, d * cfg.vertical_step_cost)
            self._sub[key] = c
        return c

    def __call__(self, x: Sequence):
        h = self._memo.get(x)
        if h is None:
            h = self._compute(x.entries)
            self._memo[x] = h
        return h

    def _compute(self, xs):
        ys = self.target
        lx, ly = len(xs), len(ys)
        X = xs + (NULL,) * ly
        Y = ys + (NULL,) * lx
        n = len(X)
        ins, dele, sub = self.ins, self.dele, self.sub
        prev = [0] + [j * ins for j in range(1, n + 1)]
        best = float("inf")
        if lx == 0:
            best = min(prev[ly:])
        for i in range(1, n + 1):
            a = X[i - 1]
            cur = [prev[0] + dele] + [0] * n
            for j in range(1, n + 1):
                v = prev[j - 1] + sub(a, Y[j - 1])
                w = prev[j] + dele
                if w < v:
                    v = w
                w = cur[j - 1] + ins
                if w < v:
                    v = w
                cur[j] = v
            if i >= lx:
                m = min(cur[ly:])
                if m < best:
                    best = m
            prev = cur
        return best


def _script(start: Sequence, path, end: Sequence):
    return TransformScript(start.word, end.word, list(path))


def _fallback(start: Sequence, target: Sequence, config: MoveConfig):
    """A complete horizontal-only script, if one is certainly feasible."""
    if not config.horizontal:
        return None
    need = set(target.entries) - set(start.entries)
    if not need <= set(config.symbols):
        return None
    steps = []
    try:
        for op, p, sym in edit_script(start.word, target.word, config.costs):
            cost = {"insert": config.costs.insert, "delete": config.costs.delete,
                    "substitute": config.costs.substitute}[op]
            steps.append(Step("H", op, p, sym, cost))
        script = TransformScript(start.word, target.word, steps)
        replay(script, start.word, config.max_length)
    except (InvalidInput, ReplayError):
        return None
    return script


def find_transform(start, goal: GoalSpec, config: MoveConfig = MoveConfig()) -> TransformScript:
    """Minimum-cost transformation script from ``start`` toward ``goal``.

    Raises :class:`BudgetExceeded` (carrying a best-so-far script) when more
    than ``config.max_expansions`` states are expanded.
    """
    if isinstance(goal, (bytes, str, Sequence)):
        goal = GoalSpec.word(goal)
    x0 = as_sequence(start, max_length=config.max_length)
    if goal.kind == "target":
        return _search_target(x0, as_sequence(goal.target, max_length=config.max_length), config)
    return _search_objective(x0, goal, config)


def _search_target(x0: Sequence, target: Sequence, config: MoveConfig):
    if config.vertical is None and not set(target.entries) <= set(x0.entries) | set(config.symbols):
        raise InvalidInput("target uses symbols that no enabled move can produce")
    h = _Heuristic(target, config)
    h0 = h(x0)
    if h0 == float("inf"):
        raise InvalidInput("target is unreachable under this move configuration")
    best = {x0: (0, ())}
    paths = {x0: ()}
    heap = [(h0, (), 0, x0)]
    closed = set()
    expansions = 0
    while heap:
        f, key, g, x = heapq.heappop(heap)
        if x in closed or best[x] != (g, key):
            continue
        if x == target:
            return _script(x0, paths[x], x)
        closed.add(x)
        expansions += 1
        if expansions > config.max_expansions:
            raise BudgetExceeded(
                f"expansion budget {config.max_expansions} exhausted (frontier f={f})",
                best=_fallback(x0, target, config), expansions=expansions)
        base = paths[x]
        for step, y in neighbors(x, config):
            if y in closed:
                continue
            gy = g + step.cost
            ky = key + (step.key(),)
            old = best.get(y)
            if old is not None and old <= (gy, ky):
                continue
            hy = h(y)
            if hy == float("inf"):
                continue
            best[y] = (gy, ky)
            paths[y] = base + (step,)
            heapq.heappush(heap, (gy + hy, ky, gy, y))
    raise InvalidInput("target is unreachable under this move configuration")


def _search_objective(x0: Sequence, goal: GoalSpec, config: MoveConfig):
    objective = goal.objective
    eligible = goal.predicate or (lambda w: True)
    best = {x0: (0, ())}
    paths = {x0: ()}
    heap = [(0, (), x0)]
    closed = set()
    incumbent = None  # (total, key, state)
    expansions = 0
    while heap:
        g, key, x = heapq.heappop(heap)
        if x in closed or best[x] != (g, key):
            continue
        if incumbent is not None and g > incumbent[0]:
            break
        closed.add(x)
        w = x.word
        if eligible(w):
            cand = (g + objective(w), key, x)
            if incumbent is None or cand[:2] < incumbent[:2]:
                incumbent = cand
        expansions += 1
        if expansions > config.max_expansions:
            best_script = None
            if incumbent is not None:
                best_script = _script(x0, paths[incumbent[2]], incumbent[2])
            raise BudgetExceeded(f"expansion budget {config.max_expansions} exhausted",
                                 best=best_script, expansions=expansions)
        base = paths[x]
        for step, y in neighbors(x, config):
            if y in closed:
                continue
            gy = g + step.cost
            ky = key + (step.key(),)
            old = best.get(y)
            if old is not None and old <= (gy, ky):
                continue
            best[y] = (gy, ky)
            paths[y] = base + (step,)
            heapq.heappush(heap, (gy, ky, y))
    if incumbent is None:
        raise InvalidInput("no eligible terminal is reachable")
    return _script(x0, paths[incumbent[2]], incumbent[2])


def apply_step(x: Sequence, step: Step, max_length=DEFAULT_MAX_LENGTH) -> Sequence:
    if step.family == "H":
        return apply_edit(x, step.op, step.position, step.value, max_length=max_length)
    if step.family != "V":
        raise InvalidInput(f"unknown step family {step.family!r}")
    if not 0 <= step.position <= len(x):
        raise InvalidInput(f"vertical step at coordinate {step.position} beyond length {len(x)}")
    if step.op == ROT13.name:
        c = x[step.position]
        if step.position >= len(x) or not 97 <= c <= 122:
            raise InvalidInput(f"rot13 flip at coordinate {step.position} needs a lowercase letter")
        return Sequence(x.entries[:step.position] + (rot13(bytes([c]))[0],) + x.entries[step.position + 1:],
                        max_length=max_length)
    if not step.op.startswith("shift"):
        raise InvalidInput(f"unknown vertical generator {step.op!r}")
    y = shift_at(x, step.position, step.value)
    if len(y) > max_length:
        raise InvalidInput("vertical step exceeds the maximum sequence length")
    return y


def replay(script: TransformScript, start, max_length=DEFAULT_MAX_LENGTH) -> bytes:
    """Apply every step of ``script`` to ``start`` and return the end word."""
    start = as_word(start)
    if start != script.start:
        raise ReplayError(f"script starts at {script.start!r}, not {start!r}")
    x = as_sequence(start, max_length=max_length)
    for i, step in enumerate(script.steps):
        try:
            x = apply_step(x, step, max_length)
        except InvalidInput as exc:
            raise ReplayError(f"step {i} ({step.describe()}): {exc}", step_index=i) from None
    return x.word
