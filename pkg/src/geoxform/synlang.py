"""A toy structured language: lossless CST, AST, and control-flow graph.

Grammar (one construct per line; ``;`` also separates)::

    Program := "START" Block "HALT"
    Block   := Stmt*
    Stmt    := "S" | "do while b" Block "enddo" | "if b" Block "endif"

Every ``S`` is its own statement and every ``b`` its own predicate; both
are numbered in source order, starting at 1.
"""

import json
import re
from dataclasses import dataclass, field

FORMAT_VERSION = 1

SKELETON = """\
START
do while b
  do while b
    do while b
      do while b
        S
      enddo
      S
    enddo
    if b
      do while b
        S
      enddo
      if b
        S
      endif
    endif
  enddo
enddo
HALT
"""

GRAMMAR_KINDS = frozenset({"Program", "Start", "Halt", "Stmt", "DoWhile", "If"})


class ParseError(ValueError):
    """Source is not in the grammar; ``line`` is 1-based."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NotStructured(ValueError):
    pass


# --- concrete syntax -------------------------------------------------------

@dataclass
class CstNode:
    kind: str
    text: bytes = b""
    children: list = field(default_factory=list)
    line: int = 0

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            yield self
            return
        for c in self.children:
            yield from c.leaves()

    def to_dict(self):
        if self.is_leaf:
            return {"kind": self.kind, "text": self.text.decode("latin-1")}
        return {"kind": self.kind, "children": [c.to_dict() for c in self.children]}

    @classmethod
    def from_dict(cls, d):
        if "children" in d:
            return cls(d["kind"], b"", [cls.from_dict(c) for c in d["children"]])
        return cls(d["kind"], d["text"].encode("latin-1"))


def unparse_cst(cst: CstNode) -> bytes:
    return b"".join(leaf.text for leaf in cst.leaves())


_TOKEN = re.compile(rb"(?P<nl>\r\n|\n|\r)|(?P<ws>[ \t]+)|(?P<semi>;)|(?P<word>[^\s;]+)|(?P<bad>[\x00-\x08\x0b\x0c\x0e-\x1f\x7f-\xff])")
_KEYWORDS = {b"START", b"HALT", b"S", b"do", b"while", b"b", b"enddo", b"if", b"endif"}


def _tokenize(source: bytes):
    toks = []
    line = 1
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None or m.lastgroup == "bad":
            raise ParseError(f"unexpected byte {source[pos:pos + 1]!r}", line)
        text = m.group()
        kind = m.lastgroup
        if kind == "word":
            if text not in _KEYWORDS:
                raise ParseError(f"unknown word {text.decode('latin-1')!r}", line)
            kind = text.decode("ascii")
        toks.append(CstNode(kind, text, line=line))
        if m.lastgroup == "nl":
            line += 1
        pos = m.end()
    return toks


_TRIVIA = ("ws", "nl", "semi")


class _Parser:
    def __init__(self, source):
        self.toks = _tokenize(source)
        self.i = 0

    def line(self):
        if self.i < len(self.toks):
            return self.toks[self.i].line
        return self.toks[-1].line if self.toks else 1

    def peek_line(self):
        # line of the next significant token, or of end of input
        j = self.i
        while j < len(self.toks) and self.toks[j].kind in _TRIVIA:
            j += 1
        if j < len(self.toks):
            return self.toks[j].line
        if not self.toks:
            return 1
        last = self.toks[-1]
        return last.line + (1 if last.kind == "nl" else 0)

    def peek(self):
        # next significant token, without consuming trivia
        j = self.i
        while j < len(self.toks) and self.toks[j].kind in _TRIVIA:
            j += 1
        return self.toks[j].kind if j < len(self.toks) else None

    def trivia(self, into):
        while self.i < len(self.toks) and self.toks[self.i].kind in _TRIVIA:
            into.append(self.toks[self.i])
            self.i += 1

    def inline_ws(self, into):
        while self.i < len(self.toks) and self.toks[self.i].kind == "ws":
            into.append(self.toks[self.i])
            self.i += 1

    def expect(self, kind, into, what):
        if self.i >= len(self.toks) or self.toks[self.i].kind != kind:
            got = self.toks[self.i].text.decode("latin-1") if self.i < len(self.toks) else "end of input"
            raise ParseError(f"expected {kind!r} in {what}, found {got!r}", self.line())
        into.append(self.toks[self.i])
        self.i += 1

    def end_of_line(self, into, what):
        # a construct must be followed by a separator or end of input
        self.inline_ws(into)
        if self.i < len(self.toks) and self.toks[self.i].kind not in ("nl", "semi"):
            raise ParseError(f"{what} must end its line", self.line())

    def program(self):
        kids = []
        self.trivia(kids)
        self.expect("START", kids, "program")
        self.end_of_line(kids, "START")
        block = self.block(kids, closer="HALT")
        kids.append(block)
        self.trivia(kids)
        self.expect("HALT", kids, "program")
        self.trivia(kids)
        if self.i < len(self.toks):
            raise ParseError("text after HALT", self.line())
        return CstNode("Program", children=kids)

    def block(self, parent, closer):
        kids = []
        while True:
            nxt = self.peek()
            if nxt == closer:
                break
            if nxt is None or nxt in ("HALT", "enddo", "endif"):
                opener = {"enddo": "do-while", "endif": "if", "HALT": "program"}[closer]
                if nxt is None or nxt == "HALT":
                    raise ParseError(f"unclosed {opener}: expected {closer!r}", self.peek_line())
                raise ParseError(f"unbalanced {nxt!r}: expected {closer!r} to close {opener}",
                                 self.peek_line())
            self.trivia(kids)
            kids.append(self.stmt())
        return CstNode("Block", children=kids)

    def stmt(self):
        kids = []
        kind = self.toks[self.i].kind
        start_line = self.line()
        if kind == "S":
            self.expect("S", kids, "statement")
            self.end_of_line(kids, "S")
            return CstNode("Stmt", children=kids, line=start_line)
        if kind == "do":
            self.expect("do", kids, "do-while")
            self.inline_ws(kids)
            self.expect("while", kids, "do-while")
            self.inline_ws(kids)
            self.expect("b", kids, "do-while")
            self.end_of_line(kids, "do while b")
            kids.append(self.block(kids, closer="enddo"))
            self.trivia(kids)
            self.expect("enddo", kids, "do-while")
            self.end_of_line(kids, "enddo")
            return CstNode("DoWhile", children=kids, line=start_line)
        if kind == "if":
            self.expect("if", kids, "if")
            self.inline_ws(kids)
            self.expect("b", kids, "if")
            self.end_of_line(kids, "if b")
            kids.append(self.block(kids, closer="endif"))
            self.trivia(kids)
            self.expect("endif", kids, "if")
            self.end_of_line(kids, "endif")
            return CstNode("If", children=kids, line=start_line)
        raise ParseError(f"unexpected {self.toks[self.i].text.decode('latin-1')!r}", start_line)


def parse(source) -> CstNode:
    """Lossless parse: the CST's leaves concatenate back to ``source``."""
    if isinstance(source, str):
        source = source.encode("ascii")
    return _Parser(bytes(source)).program()


# --- abstract syntax -------------------------------------------------------

@dataclass(frozen=True)
class AstNode:
    kind: str
    children: tuple = ()
    label: int = 0

    def to_dict(self):
        d = {"kind": self.kind}
        if self.label:
            d["label"] = self.label
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], tuple(cls.from_dict(c) for c in d.get("children", ())), d.get("label", 0))

    def __str__(self):
        name = {"Stmt": "S", "DoWhile": "DoWhile", "If": "If"}.get(self.kind, self.kind)
        if self.label:
            name += str(self.label)
        if self.kind in ("DoWhile", "If", "Program"):
            return name + "[" + ", ".join(str(c) for c in self.children) + "]"
        return name


START_NODE = AstNode("Start")
HALT_NODE = AstNode("Halt")


class _Counter:
    def __init__(self):
        self.s = 0
        self.b = 0

    def next_s(self):
        self.s += 1
        return self.s

    def next_b(self):
        self.b += 1
        return self.b


def _abstract_block(block: CstNode, ctr):
    out = []
    for node in block.children:
        if node.kind == "Stmt":
            out.append(AstNode("Stmt", (), ctr.next_s()))
        elif node.kind in ("DoWhile", "If"):
            label = ctr.next_b()
            body = next(c for c in node.children if c.kind == "Block")
            out.append(AstNode(node.kind, tuple(_abstract_block(body, ctr)), label))
    return out


def abstract(cst: CstNode) -> AstNode:
    """Forget layout; number statements and predicates in source order."""
    block = next(c for c in cst.children if c.kind == "Block")
    return AstNode("Program", (START_NODE,) + tuple(_abstract_block(block, _Counter())) + (HALT_NODE,))


def body(ast: AstNode):
    """Statements of a Program between Start and Halt."""
    return ast.children[1:-1]


def unparse(ast: AstNode, indent=b"  ") -> bytes:
    """Canonical layout: one construct per line, two spaces per level."""
    lines = [b"START"]

    def emit(nodes, depth):
        pad = indent * depth
        for n in nodes:
            if n.kind == "Stmt":
                lines.append(pad + b"S")
            elif n.kind == "DoWhile":
                lines.append(pad + b"do while b")
                emit(n.children, depth + 1)
                lines.append(pad + b"enddo")
            elif n.kind == "If":
                lines.append(pad + b"if b")
                emit(n.children, depth + 1)
                lines.append(pad + b"endif")
            else:
                raise NotStructured(f"cannot unparse node kind {n.kind!r}")

    emit(body(ast), 0)
    lines.append(b"HALT")
    return b"\n".join(lines) + b"\n"


def renumber(ast: AstNode) -> AstNode:
    """Same shape with labels reassigned in source order."""
    ctr = _Counter()

    def walk(nodes):
        out = []
        for n in nodes:
            if n.kind == "Stmt":
                out.append(AstNode("Stmt", (), ctr.next_s()))
            elif n.kind in ("DoWhile", "If"):
                label = ctr.next_b()
                out.append(AstNode(n.kind, tuple(walk(n.children)), label))
            else:
                out.append(n)
        return out

    return AstNode("Program", (START_NODE,) + tuple(walk(body(ast))) + (HALT_NODE,))


def is_normal_form(ast: AstNode) -> bool:
    """True iff the tree uses only the grammar's while/if constructs."""
    if ast.kind != "Program" or len(ast.children) < 2:
        return False
    if ast.children[0].kind != "Start" or ast.children[-1].kind != "Halt":
        return False

    def ok(nodes):
        for n in nodes:
            if n.kind == "Stmt":
                if n.children:
                    return False
            elif n.kind in ("DoWhile", "If"):
                if not ok(n.children):
                    return False
            else:
                return False
        return True

    return ok(body(ast))


# --- control flow ----------------------------------------------------------

ENTRY, EXIT = "entry", "exit"


@dataclass
class CfgGraph:
    """Statement nodes ``S<k>``, predicate nodes ``b<k>``, plus entry/exit.

    ``edges`` maps a node to its out-edges: ``{None: dst}`` for statements
    and entry, ``{True: dst, False: dst}`` for predicates.
    """

    edges: dict = field(default_factory=dict)

    @property
    def nodes(self):
        return list(self.edges)

    def predicates(self):
        return [n for n in self.edges if n.startswith("b")]

    def statements(self):
        return [n for n in self.edges if n.startswith("S")]

    def edge_list(self):
        out = []
        for src, outs in self.edges.items():
            for label, dst in outs.items():
                out.append((src, dst, label))
        return out

    def validate(self):
        if ENTRY not in self.edges or EXIT not in self.edges:
            raise NotStructured("graph needs entry and exit nodes")
        for n, outs in self.edges.items():
            if n == EXIT:
                want = set()
            elif n.startswith("b"):
                want = {True, False}
            else:
                want = {None}
            if set(outs) != want:
                raise NotStructured(f"node {n!r} has out-edges {sorted(map(str, outs))}")
            for dst in outs.values():
                if dst not in self.edges:
                    raise NotStructured(f"edge to unknown node {dst!r}")
        seen = {ENTRY}
        stack = [ENTRY]
        while stack:
            for dst in self.edges[stack.pop()].values():
                if dst not in seen:
                    seen.add(dst)
                    stack.append(dst)
        if seen != set(self.edges):
            raise NotStructured(f"unreachable nodes: {sorted(set(self.edges) - seen)}")

    def to_dict(self):
        return {
            "version": FORMAT_VERSION,
            "nodes": self.nodes,
            "edges": [{"src": s, "dst": d, "label": lab} for s, d, lab in self.edge_list()],
        }

    @classmethod
    def from_dict(cls, d):
        edges = {n: {} for n in d["nodes"]}
        for e in d["edges"]:
            edges[e["src"]][e["label"]] = e["dst"]
        return cls(edges)

    def to_dot(self) -> str:
        lines = ["digraph cfg {"]
        for n in self.edges:
            shape = "diamond" if n.startswith("b") else ("box" if n.startswith("S") else "ellipse")
            lines.append(f'  "{n}" [shape={shape}];')
        for src, dst, label in self.edge_list():
            if label is None:
                lines.append(f'  "{src}" -> "{dst}";')
            else:
                color = "blue" if label else "red"
                lines.append(f'  "{src}" -> "{dst}" [label="{"T" if label else "F"}", color={color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def to_cfg(ast: AstNode) -> CfgGraph:
    """Wire the AST into a control-flow graph.

    A do-while runs its body, then tests: true loops back to the body head,
    false falls through.  An if tests first: true enters the body, false
    skips it; the body's tail falls through.
    """
    if not is_normal_form(ast):
        raise NotStructured("AST is not in normal form")
    edges = {ENTRY: {}, EXIT: {}}

    def build(nodes, succ):
        head = succ
        for n in reversed(nodes):
            if n.kind == "Stmt":
                name = f"S{n.label}"
                edges[name] = {None: head}
                head = name
            elif n.kind == "DoWhile":
                p = f"b{n.label}"
                edges[p] = {}
                body_head = build(n.children, p)
                edges[p][True] = body_head
                edges[p][False] = head
                head = body_head
            else:
                p = f"b{n.label}"
                edges[p] = {}
                edges[p][True] = build(n.children, head)
                edges[p][False] = head
                head = p
        return head

    edges[ENTRY][None] = build(body(ast), EXIT)
    # order nodes: entry, statements and predicates by label, exit
    order = [ENTRY] + sorted((n for n in edges if n[0] == "S"), key=lambda n: int(n[1:])) \
        + sorted((n for n in edges if n[0] == "b"), key=lambda n: int(n[1:])) + [EXIT]
    return CfgGraph({n: edges[n] for n in order})


def _reaches(cfg, start, target, blocked=None):
    """Can ``target`` be reached from ``start`` without leaving through ``blocked``?"""
    if start == target:
        return True
    if start == blocked:
        return False
    seen = {start}
    stack = [start]
    while stack:
        for dst in cfg.edges[stack.pop()].values():
            if dst == target:
                return True
            if dst not in seen and dst != blocked:
                seen.add(dst)
                stack.append(dst)
    return False


def from_cfg(cfg: CfgGraph) -> AstNode:
    """Recover the AST of a graph produced by :func:`to_cfg`.

    Loops are recognized by back edges into their body head; when several
    loops share a head, the outermost is the one the others cannot bypass.
    Anything that does not re-wire to the same graph is rejected.
    """
    cfg.validate()
    consumed = set()
    budget = [4 * len(cfg.edges) + 8]

    def loops_at(n):
        # unconsumed predicates whose true edge returns to n from below
        return [q for q, outs in cfg.edges.items()
                if q.startswith("b") and q not in consumed and outs.get(True) == n
                and _reaches(cfg, n, q)]

    def decode(n, stop):
        out = []
        while n != stop:
            budget[0] -= 1
            if budget[0] < 0 or n == EXIT:
                raise NotStructured("control flow does not nest")
            cands = loops_at(n)
            if cands:
                outer = [q for q in cands
                         if all(_reaches(cfg, n, o, blocked=q) for o in cands if o != q)]
                if len(outer) != 1:
                    raise NotStructured(f"ambiguous loops at {n!r}")
                q = outer[0]
                consumed.add(q)
                if q == n:
                    inner = []
                else:
                    inner = decode(n, q)
                out.append(AstNode("DoWhile", tuple(inner), int(q[1:])))
                n = cfg.edges[q][False]
            elif n.startswith("S"):
                out.append(AstNode("Stmt", (), int(n[1:])))
                consumed.add(n)
                n = cfg.edges[n][None]
            elif n.startswith("b"):
                if n in consumed:
                    raise NotStructured(f"predicate {n!r} re-entered")
                consumed.add(n)
                after = cfg.edges[n][False]
                inner = decode(cfg.edges[n][True], after)
                out.append(AstNode("If", tuple(inner), int(n[1:])))
                n = after
            else:
                raise NotStructured(f"unexpected node {n!r}")
        return out

    try:
        ast = AstNode("Program", (START_NODE,) + tuple(decode(cfg.edges[ENTRY][None], EXIT)) + (HALT_NODE,))
    except RecursionError:
        raise NotStructured("control flow does not nest") from None
    if to_cfg(ast).edges != cfg.edges:
        raise NotStructured("graph is not in the image of the structured wiring")
    return ast


# --- serialization ---------------------------------------------------------

def dumps(obj) -> str:
    if isinstance(obj, AstNode):
        return json.dumps({"version": FORMAT_VERSION, "ast": obj.to_dict()}, indent=2)
    if isinstance(obj, CstNode):
        return json.dumps({"version": FORMAT_VERSION, "cst": obj.to_dict()}, indent=2)
    if isinstance(obj, CfgGraph):
        return json.dumps({"version": FORMAT_VERSION, "cfg": obj.to_dict()}, indent=2)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def loads(text: str):
    d = json.loads(text)
    if d.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {d.get('version')!r}")
    if "ast" in d:
        return AstNode.from_dict(d["ast"])
    if "cst" in d:
        return CstNode.from_dict(d["cst"])
    if "cfg" in d:
        return CfgGraph.from_dict(d["cfg"])
    raise ValueError("no ast, cst or cfg payload")
