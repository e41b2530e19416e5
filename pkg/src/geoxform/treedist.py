"""Ordered labeled tree edit distance (Zhang-Shasha keyroot dynamic program)."""

import re
from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class LabeledTree:
    label: bytes
    children: tuple = ()

    def __post_init__(self):
        if isinstance(self.label, str):
            object.__setattr__(self, "label", self.label.encode())
        object.__setattr__(self, "children", tuple(self.children))

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def to_dict(self):
        d = {"label": self.label.decode("latin-1")}
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["label"].encode("latin-1"), tuple(cls.from_dict(c) for c in d.get("children", ())))

    def __str__(self):
        name = self.label.decode("latin-1")
        if not self.children:
            return name
        return name + "(" + " ".join(str(c) for c in self.children) + ")"


def tree(label, *children):
    """Shorthand: ``tree("f", tree("a"), tree("b"))``."""
    return LabeledTree(label, children)


def trivial_relabel(a, b):
    return 0 if a == b else 1


@dataclass(frozen=True)
class LabelMetric:
    relabel: Callable = trivial_relabel
    insert_cost: int = 1
    delete_cost: int = 1


TRIVIAL = LabelMetric()


class _Postorder:
    __slots__ = ("labels", "lml", "keyroots")

    def __init__(self, root: LabeledTree):
        labels = []
        lml = []

        def walk(node):
            first = None
            for c in node.children:
                leftmost = walk(c)
                if first is None:
                    first = leftmost
            idx = len(labels)
            labels.append(node.label)
            lml.append(idx if first is None else first)
            return lml[idx]

        walk(root)
        self.labels = labels
        self.lml = lml
        # keyroots: highest node for each distinct leftmost leaf
        last = {}
        for k, leaf in enumerate(lml):
            last[leaf] = k
        self.keyroots = sorted(last.values())


def tree_edit_distance(a: LabeledTree, b: LabeledTree, metric: LabelMetric = TRIVIAL) -> int:
    """Cheapest sequence of node deletions, insertions and relabelings from ``a`` to ``b``.

    Deleting a node splices its children into its parent in place; insertion
    is the inverse.  Runs in O(|a|^2 |b|^2) time in the worst case.
    """
    A, B = _Postorder(a), _Postorder(b)
    la, lb = A.labels, B.labels
    l1, l2 = A.lml, B.lml
    dc, ic, rc = metric.delete_cost, metric.insert_cost, metric.relabel
    td = [[0] * len(lb) for _ in range(len(la))]
    for i in A.keyroots:
        li = l1[i]
        m = i - li + 2
        for j in B.keyroots:
            lj = l2[j]
            n = j - lj + 2
            fd = [[0] * n for _ in range(m)]
            for x in range(1, m):
                fd[x][0] = fd[x - 1][0] + dc
            row0 = fd[0]
            for y in range(1, n):
                row0[y] = row0[y - 1] + ic
            for x in range(1, m):
                u = li + x - 1
                lu = l1[u]
                prev, cur = fd[x - 1], fd[x]
                tdu = td[u]
                for y in range(1, n):
                    v = lj + y - 1
                    d_del = prev[y] + dc
                    d_ins = cur[y - 1] + ic
                    if lu == li and l2[v] == lj:
                        d_sub = prev[y - 1] + rc(la[u], lb[v])
                        best = min(d_del, d_ins, d_sub)
                        cur[y] = best
                        tdu[v] = best
                    else:
                        d_sub = fd[lu - li][l2[v] - lj] + tdu[v]
                        cur[y] = min(d_del, d_ins, d_sub)
    return td[len(la) - 1][len(lb) - 1]


def ast_to_tree(ast, keep_labels=False) -> LabeledTree:
    """Kind names as node labels; S/b indices dropped unless ``keep_labels``."""
    name = ast.kind.encode()
    if keep_labels and ast.label:
        name += b"%d" % ast.label
    return LabeledTree(name, tuple(ast_to_tree(c, keep_labels) for c in ast.children))


def ast_distance(a, b, keep_labels=False, metric: LabelMetric = TRIVIAL) -> int:
    return tree_edit_distance(ast_to_tree(a, keep_labels), ast_to_tree(b, keep_labels), metric)


def ast_objective(reference, keep_labels=False):
    """An objective scoring ASTs by their distance to ``reference``."""
    ref = ast_to_tree(reference, keep_labels)
    return lambda ast: tree_edit_distance(ast_to_tree(ast, keep_labels), ref)


_TOKEN = re.compile(rb"\s*(?:([()])|([^\s()]+))")


def parse_tree(text) -> LabeledTree:
    """Read the ``label(child child ...)`` notation printed by ``str``."""
    if isinstance(text, str):
        text = text.encode()
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad tree syntax at offset {pos}")
        tokens.append(m.group(1) or m.group(2))
        pos = m.end()
    if not tokens:
        raise ValueError("empty tree")

    def node(i):
        lab = tokens[i]
        if lab in (b"(", b")"):
            raise ValueError("expected a label")
        i += 1
        kids = []
        if i < len(tokens) and tokens[i] == b"(":
            i += 1
            while i < len(tokens) and tokens[i] != b")":
                child, i = node(i)
                kids.append(child)
            if i >= len(tokens):
                raise ValueError("unbalanced parentheses")
            i += 1
        return LabeledTree(lab, tuple(kids)), i

    t, end = node(0)
    if end != len(tokens):
        raise ValueError("trailing input after tree")
    return t
