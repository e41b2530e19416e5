"""Base space: finitely supported symbol sequences and their edit geometry.

The alphabet is ASCII NULL followed by the 95 printable characters, arranged
on a cycle ``0 -> 32 -> 33 -> ... -> 126 -> 0``.  A :class:`Sequence` is an
infinite sequence over that alphabet with finite support; it is stored with
its trailing zeros stripped, so its rendering as a word is free.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Union

ALPHABET = (0,) + tuple(range(32, 127))
ALPHABET_SIZE = len(ALPHABET)
NULL = 0

DEFAULT_MAX_LENGTH = 4096

_INDEX = {sym: i for i, sym in enumerate(ALPHABET)}


class InvalidInput(ValueError):
    """A symbol, word or argument lies outside the model."""


def symbol_index(sym):
    """Position of ``sym`` on the alphabet cycle (0 for NULL, c-31 otherwise)."""
    try:
        return _INDEX[sym]
    except KeyError:
        raise InvalidInput(f"byte {sym!r} is not in the alphabet") from None


def index_symbol(i):
    return ALPHABET[i % ALPHABET_SIZE]


def cyclic_successor(sym, steps=1):
    return ALPHABET[(symbol_index(sym) + steps) % ALPHABET_SIZE]


class Sequence:
    """A point of the base space.

    Two sequences compare equal iff they agree after stripping trailing
    zeros, which is exactly how they are stored.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Iterable[int] = (), max_length: Optional[int] = DEFAULT_MAX_LENGTH):
        entries = list(entries)
        for sym in entries:
            if sym not in _INDEX:
                raise InvalidInput(f"byte {sym!r} is not in the alphabet")
        while entries and entries[-1] == NULL:
            entries.pop()
        if max_length is not None and len(entries) > max_length:
            raise InvalidInput(f"sequence support {len(entries)} exceeds max length {max_length}")
        self._entries = tuple(entries)
        self._hash = hash(self._entries)

    @classmethod
    def _trusted(cls, entries):
        # entries already validated and stripped
        self = object.__new__(cls)
        self._entries = entries
        self._hash = hash(entries)
        return self

    @property
    def entries(self):
        return self._entries

    @property
    def word(self) -> bytes:
        return bytes(self._entries)

    def __getitem__(self, j):
        # every coordinate past the support reads as NULL
        if j < len(self._entries):
            return self._entries[j]
        return NULL

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, Sequence):
            return self._entries == other._entries
        return NotImplemented

    def __lt__(self, other):
        return self._entries < other._entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Sequence({self.word!r})"

    def to_list(self):
        return list(self._entries)


WordLike = Union[bytes, bytearray, str, Sequence]


def render(x: Sequence) -> bytes:
    """Word of a sequence: trailing zeros dropped, interior NULLs kept."""
    return x.word


def parse_word(w, max_length: Optional[int] = DEFAULT_MAX_LENGTH) -> Sequence:
    if isinstance(w, str):
        try:
            w = w.encode("ascii")
        except UnicodeEncodeError:
            raise InvalidInput(f"{w!r} is not ASCII") from None
    return Sequence(bytes(w), max_length=max_length)


def as_sequence(w: WordLike, max_length: Optional[int] = DEFAULT_MAX_LENGTH) -> Sequence:
    if isinstance(w, Sequence):
        return w
    return parse_word(w, max_length=max_length)


def as_word(w: WordLike) -> bytes:
    """Validated byte form of a word-like value."""
    if isinstance(w, Sequence):
        return w.word
    return parse_word(w, max_length=None).word


@dataclass(frozen=True)
class EditCostModel:
    """Costs of the atomic horizontal edits.

    ``substitute=None`` disables substitution; a substitution is then only
    available as a deletion followed by an insertion.
    """

    insert: int = 1
    delete: int = 1
    substitute: Optional[int] = 1

    def __post_init__(self):
        for name in ("insert", "delete", "substitute"):
            value = getattr(self, name)
            if value is None and name == "substitute":
                continue
            if not isinstance(value, int) or value < 1:
                raise InvalidInput(f"{name} cost must be an integer >= 1, got {value!r}")

    @property
    def substitution_enabled(self):
        return self.substitute is not None

    def to_dict(self):
        return {"insert": self.insert, "delete": self.delete, "substitute": self.substitute}

    @classmethod
    def from_dict(cls, d):
        return cls(d["insert"], d["delete"], d.get("substitute"))


# ins/del only: reproduces the worked lowercasing costs
INSDEL_COSTS = EditCostModel(1, 1, None)
GENERAL_COSTS = EditCostModel(1, 1, 1)


def edit_distance(a: WordLike, b: WordLike, costs: EditCostModel = GENERAL_COSTS) -> int:
    """Minimal total cost of an edit script turning word ``a`` into ``b``.

    Standard row-by-row dynamic program; symmetric when insert == delete.
    """
    a = as_word(a)
    b = as_word(b)
    ins, dele = costs.insert, costs.delete
    sub = costs.substitute
    prev = [j * ins for j in range(len(b) + 1)]
    for i in range(1, len(a) + 1):
        cur = [i * dele] + [0] * len(b)
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            best = prev[j] + dele
            alt = cur[j - 1] + ins
            if alt < best:
                best = alt
            if ai == b[j - 1]:
                alt = prev[j - 1]
            elif sub is not None:
                alt = prev[j - 1] + sub
            else:
                alt = best
            if alt < best:
                best = alt
            cur[j] = best
        prev = cur
    return prev[-1]


def edit_script(a: WordLike, b: WordLike, costs: EditCostModel = GENERAL_COSTS):
    """One optimal edit script from ``a`` to ``b``.

    Returns a list of ``(op, position, symbol)`` tuples with positions
    relative to the word at the time the op is applied.  Deletions come
    first (right to left), then substitutions, then insertions (left to
    right), so intermediate words never grow past ``max(len(a), len(b))``.
    Intermediates are raw byte strings and may transiently end in NULL.
    """
    a = as_word(a)
    b = as_word(b)
    n, m = len(a), len(b)
    INF = float("inf")
    sub = costs.substitute
    D = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        D[i][0] = i * costs.delete
    for j in range(m + 1):
        D[0][j] = j * costs.insert
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                diag = D[i - 1][j - 1]
            else:
                diag = D[i - 1][j - 1] + sub if sub is not None else INF
            D[i][j] = min(D[i - 1][j] + costs.delete, D[i][j - 1] + costs.insert, diag)
    ops = []
    i, j = n, m
    while i or j:
        if i and j:
            if a[i - 1] == b[j - 1] and D[i][j] == D[i - 1][j - 1]:
                i, j = i - 1, j - 1
                continue
            if sub is not None and D[i][j] == D[i - 1][j - 1] + sub:
                ops.append(("substitute", i - 1, j - 1))
                i, j = i - 1, j - 1
                continue
        if i and D[i][j] == D[i - 1][j] + costs.delete:
            ops.append(("delete", i - 1, None))
            i -= 1
        else:
            ops.append(("insert", i, j - 1))
            j -= 1
    # ops were collected back to front; positions are in ``a`` coordinates
    dels = sorted((p for op, p, _ in ops if op == "delete"), reverse=True)
    subs = [(p, b[q]) for op, p, q in ops if op == "substitute"]
    inss = sorted((q for op, _, q in ops if op == "insert"))
    script = [("delete", p, None) for p in dels]
    for p, sym in subs:
        shift = sum(1 for d in dels if d < p)
        script.append(("substitute", p - shift, sym))
    for q in inss:
        # inserting in increasing target order puts b[q] at index q
        script.append(("insert", q, b[q]))
    return script


def apply_edit(x: Sequence, op, position, symbol=None, max_length=DEFAULT_MAX_LENGTH) -> Sequence:
    """Apply one horizontal edit to ``x``; raises InvalidInput when inapplicable."""
    e = list(x.entries)
    if op == "insert":
        if not 0 <= position <= len(e):
            raise InvalidInput(f"insert position {position} out of range for length {len(e)}")
        e.insert(position, symbol)
    elif op == "delete":
        if not 0 <= position < len(e):
            raise InvalidInput(f"delete position {position} out of range for length {len(e)}")
        del e[position]
    elif op == "substitute":
        if not 0 <= position < len(e):
            raise InvalidInput(f"substitute position {position} out of range for length {len(e)}")
        e[position] = symbol
    else:
        raise InvalidInput(f"unknown edit op {op!r}")
    if e and e[-1] == NULL:
        raise InvalidInput("edit would leave a trailing NULL")
    return Sequence(e, max_length=max_length)


def horizontal_edits(x: Sequence, costs: EditCostModel, symbols=ALPHABET, max_length=DEFAULT_MAX_LENGTH):
    """Yield ``(op, position, symbol, cost, result)`` for every atomic edit of ``x``.

    Edits whose result would end in NULL are skipped: such a result is not
    a word, and stripping it would make one step cost less than it moves.
    """
    e = x.entries
    n = len(e)
    if n < max_length:
        for p in range(n + 1):
            for sym in symbols:
                if sym == NULL and p == n:
                    continue
                yield "insert", p, sym, costs.insert, Sequence._trusted(e[:p] + (sym,) + e[p:])
    for p in range(n):
        if p == n - 1 and n >= 2 and e[n - 2] == NULL:
            continue
        yield "delete", p, None, costs.delete, Sequence._trusted(e[:p] + e[p + 1:])
    if costs.substitute is not None:
        for p in range(n):
            for sym in symbols:
                if sym == e[p] or (sym == NULL and p == n - 1):
                    continue
                yield "substitute", p, sym, costs.substitute, Sequence._trusted(e[:p] + (sym,) + e[p + 1:])


def atomic_horizontal_moves(x: WordLike, costs: EditCostModel = GENERAL_COSTS, symbols=ALPHABET,
                            max_length=DEFAULT_MAX_LENGTH):
    """All sequences one insertion, deletion or substitution away, with their costs."""
    x = as_sequence(x, max_length=max_length)
    return {(y, c) for _, _, _, c, y in horizontal_edits(x, costs, symbols, max_length)}
