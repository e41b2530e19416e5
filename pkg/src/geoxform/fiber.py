"""The vertical group: coordinate-wise cyclic shifts of the alphabet.

Group elements are finitely supported vectors of residues mod 96 in the
"internal" numbering, i.e. indices on the alphabet cycle.  ``ASCII``
numbering is offered only for display.
"""

from dataclasses import dataclass
from math import gcd

from .space import (ALPHABET_SIZE, InvalidInput, Sequence, as_sequence, as_word, index_symbol,
                    symbol_index)

N = ALPHABET_SIZE


class GroupElement:
    """Finitely supported map coordinate -> residue mod 96."""

    __slots__ = ("_shifts",)

    def __init__(self, shifts=None):
        if shifts is None:
            shifts = {}
        elif not isinstance(shifts, dict):
            shifts = dict(enumerate(shifts))
        clean = {}
        for j, r in shifts.items():
            j = int(j)
            if j < 0:
                raise InvalidInput(f"negative coordinate {j}")
            r = int(r) % N
            if r:
                clean[j] = r
        self._shifts = tuple(sorted(clean.items()))

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def unit(cls, coordinate, step=1):
        return cls({coordinate: step})

    @property
    def support(self):
        return tuple(j for j, _ in self._shifts)

    def __getitem__(self, j):
        for k, r in self._shifts:
            if k == j:
                return r
        return 0

    def items(self):
        return self._shifts

    def is_identity(self):
        return not self._shifts

    def signed(self, length=None):
        """Residues as a tuple in the symmetric range (-48, 48]."""
        if length is None:
            length = self._shifts[-1][0] + 1 if self._shifts else 0
        out = []
        for j in range(length):
            r = self[j]
            out.append(r - N if r > N // 2 else r)
        return tuple(out)

    def ascii_shifts(self, x):
        """Byte-value differences this element produces on ``x`` (display only)."""
        x = as_sequence(x)
        y = act(self, x)
        length = max(len(x), len(y), (self._shifts[-1][0] + 1) if self._shifts else 0)
        return tuple(y[j] - x[j] for j in range(length))

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return self._shifts == other._shifts
        return NotImplemented

    def __hash__(self):
        return hash(self._shifts)

    def __repr__(self):
        return f"GroupElement({dict(self._shifts)})"

    def to_dict(self):
        return {str(j): r for j, r in self._shifts}

    @classmethod
    def from_dict(cls, d):
        return cls({int(j): r for j, r in d.items()})


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """``g * h``; acting with it equals acting with ``h`` and then ``g``."""
    out = dict(h.items())
    for j, r in g.items():
        out[j] = out.get(j, 0) + r
    return GroupElement(out)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement({j: -r for j, r in g.items()})


def act(g: GroupElement, x) -> Sequence:
    x = as_sequence(x)
    if g.is_identity():
        return x
    e = list(x.entries)
    top = g.items()[-1][0]
    if top >= len(e):
        e.extend([0] * (top + 1 - len(e)))
    for j, r in g.items():
        e[j] = index_symbol(symbol_index(e[j]) + r)
    return Sequence(e, max_length=None)


def shift_at(x: Sequence, coordinate: int, steps: int) -> Sequence:
    """Fast path for acting with a single-coordinate element."""
    e = x.entries
    n = len(e)
    sym = e[coordinate] if coordinate < n else 0
    new = index_symbol(symbol_index(sym) + steps)
    if coordinate < n:
        e = e[:coordinate] + (new,) + e[coordinate + 1:]
    else:
        e = e + (0,) * (coordinate - n) + (new,)
    # shifting the last symbol onto NULL may expose more trailing zeros
    end = len(e)
    while end and e[end - 1] == 0:
        end -= 1
    return Sequence._trusted(e[:end])


@dataclass(frozen=True)
class GeneratorSet:
    """Single-coordinate generators shifting by ``step``.

    ``symmetric`` also admits the inverse steps as generators.
    """

    step: int = 1
    symmetric: bool = True

    def __post_init__(self):
        if not 1 <= self.step < N:
            raise InvalidInput(f"generator step must lie in 1..{N - 1}")
        if gcd(self.step, N) != 1:
            raise InvalidInput(f"generator step {self.step} is not coprime to {N}")

    @property
    def name(self):
        return f"shift{self.step}"

    def residue_cost(self, r):
        """Generator applications needed to realize residue ``r`` at one coordinate."""
        k = (r * pow(self.step, -1, N)) % N
        return min(k, N - k) if self.symmetric else k

    def symbol_distance(self, a, b):
        return self.residue_cost(symbol_index(b) - symbol_index(a))

    def signed_steps(self):
        steps = [self.step]
        if self.symmetric and (N - self.step) != self.step:
            steps.append(-self.step)
        return steps

    def moves(self, x: Sequence):
        """Yield ``(coordinate, steps, result)`` for every generator application.

        Coordinates run over the support plus the first trailing NULL, so an
        application past the end is an effective append.
        """
        for j in range(len(x) + 1):
            for s in self.signed_steps():
                y = shift_at(x, j, s)
                if y != x:
                    yield j, s, y

    def to_dict(self):
        return {"kind": "shift", "step": self.step, "symmetric": self.symmetric}


UNIT = GeneratorSet(1)
PRIME31 = GeneratorSet(31)


def group_distance(g: GroupElement, h: GroupElement, gens: GeneratorSet = UNIT) -> int:
    """Word-metric distance: fewest generator applications taking ``g`` to ``h``."""
    diff = compose(inverse(g), h)
    return sum(gens.residue_cost(r) for _, r in diff.items())


def solve_transporter(x, y) -> GroupElement:
    """The unique element carrying ``x`` to ``y``, solved coordinate-wise."""
    x = as_sequence(x, max_length=None)
    y = as_sequence(y, max_length=None)
    n = max(len(x), len(y))
    return GroupElement({j: symbol_index(y[j]) - symbol_index(x[j]) for j in range(n)})


LOWER_A, LOWER_Z = 97, 122


def _rot13_byte(c):
    return LOWER_A + (c - LOWER_A + 13) % 26


class Rot13Element:
    """Per-character rot13 flips (an elementary abelian 2-group)."""

    __slots__ = ("_flips",)

    def __init__(self, flips=()):
        if isinstance(flips, dict):
            flips = [j for j, bit in flips.items() if int(bit) % 2]
        self._flips = frozenset(int(j) for j in flips)

    @classmethod
    def full(cls, length):
        return cls(range(length))

    @property
    def flips(self):
        return tuple(sorted(self._flips))

    def compose(self, other):
        return Rot13Element(self._flips ^ other._flips)

    def weight(self):
        return len(self._flips)

    def __eq__(self, other):
        return isinstance(other, Rot13Element) and self._flips == other._flips

    def __hash__(self):
        return hash(self._flips)

    def __repr__(self):
        return f"Rot13Element({self.flips})"


def _check_lower(w):
    for c in w:
        if not LOWER_A <= c <= LOWER_Z:
            raise InvalidInput(f"{bytes(w)!r} is not lowercase alphabetic")


def rot13_apply(e: Rot13Element, w) -> bytes:
    w = as_word(w)
    _check_lower(w)
    return bytes(_rot13_byte(c) if j in e._flips else c for j, c in enumerate(w))


def rot13(w) -> bytes:
    w = as_word(w)
    return rot13_apply(Rot13Element.full(len(w)), w)


def rot13_distance(e: Rot13Element, f: Rot13Element) -> int:
    return e.compose(f).weight()


class Rot13Generators:
    """Vertical move family flipping one lowercase character by rot13."""

    name = "rot13"

    def moves(self, x: Sequence):
        e = x.entries
        for j, c in enumerate(e):
            if LOWER_A <= c <= LOWER_Z:
                yield j, 13, Sequence._trusted(e[:j] + (_rot13_byte(c),) + e[j + 1:])

    def symbol_distance(self, a, b):
        if a == b:
            return 0
        if LOWER_A <= a <= LOWER_Z and b == _rot13_byte(a):
            return 1
        return None

    def to_dict(self):
        return {"kind": "rot13"}


ROT13 = Rot13Generators()


def generators_from_dict(d):
    if d is None:
        return None
    if d["kind"] == "rot13":
        return ROT13
    return GeneratorSet(d["step"], d.get("symmetric", True))
