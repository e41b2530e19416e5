"""Seeded random instance generators, brute-force oracles, and property suites.

The suites back ``geoxform verify``; each returns a list of
:class:`PropertyResult` and stops a property at its first counterexample.
"""

import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .bundle import Section, check_proposition, is_parallel
from .fiber import GroupElement, solve_transporter
from .rewrite import RewriteRule, apply_rewrite, invert_rewrite
from .space import GENERAL_COSTS
from .synlang import AstNode, HALT_NODE, START_NODE, abstract, from_cfg, parse, renumber, to_cfg, unparse
from .treedist import LabeledTree, tree_edit_distance


@dataclass
class PropertyResult:
    name: str
    cases: int
    passed: bool
    counterexample: dict = field(default=None)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.cases} cases)"


# --- random instances ------------------------------------------------------

PRINTABLE = bytes(range(32, 127))


def random_word(rng: random.Random, max_len=6, symbols=PRINTABLE) -> bytes:
    return bytes(rng.choice(symbols) for _ in range(rng.randint(0, max_len)))


def random_parallel_path(rng: random.Random, max_points=5, max_len=6):
    """A path of distinct words and a section making it parallel.

    Each point's fiber element is the transporter to the next point; the
    last point gets the identity.
    """
    n = rng.randint(1, max_points)
    seen = set()
    path = []
    while len(path) < n:
        w = random_word(rng, max_len)
        if w not in seen:
            seen.add(w)
            path.append(w)
    assignment = {}
    for a, b in zip(path, path[1:]):
        assignment[a] = solve_transporter(a, b)
    assignment[path[-1]] = GroupElement()
    return path, Section(assignment)


def random_rule(rng: random.Random, index=0) -> RewriteRule:
    while True:
        pat = bytes(rng.choice(PRINTABLE[1:]) for _ in range(rng.randint(1, 4)))
        rep = bytes(rng.choice(PRINTABLE[1:]) for _ in range(rng.randint(0, 4)))
        if pat != rep:
            return RewriteRule(f"rule{index}", pat, rep)


def random_rewrite_case(rng: random.Random, max_len=64):
    """A random byte string with some planted occurrences of a random rule."""
    rule = random_rule(rng)
    parts = []
    for _ in range(rng.randint(0, 6)):
        parts.append(bytes(rng.randrange(256) for _ in range(rng.randint(0, max_len // 4))))
        if rng.random() < 0.6:
            parts.append(rule.pattern)
    return b"".join(parts), rule


def random_ast(rng: random.Random, max_depth=4, max_width=3) -> AstNode:
    """A random program whose constructs nest at most ``max_depth`` deep."""

    def block(depth):
        out = []
        for _ in range(rng.randint(1, max_width)):
            r = rng.random()
            if depth >= max_depth or r < 0.4:
                out.append(AstNode("Stmt"))
            else:
                kind = "DoWhile" if r < 0.7 else "If"
                out.append(AstNode(kind, tuple(block(depth + 1))))
        return out

    return renumber(AstNode("Program", (START_NODE,) + tuple(block(1)) + (HALT_NODE,)))


def random_tree(rng: random.Random, max_nodes=8, labels=b"ab") -> LabeledTree:
    n = rng.randint(1, max_nodes)
    # random parent pointers in preorder give a uniformly shaped-ish ordered tree
    kids = [[] for _ in range(n)]
    for v in range(1, n):
        kids[rng.randrange(v)].append(v)
    lab = [bytes([rng.choice(labels)]) for _ in range(n)]

    def build(v):
        return LabeledTree(lab[v], tuple(build(c) for c in kids[v]))

    return build(0)


# --- brute-force tree edit distance ---------------------------------------

# forests as tuples of (label, forest) pairs, hashable and canonical

def _forests(n, labels):
    return _forests_cached(n, tuple(labels))


@lru_cache(maxsize=None)
def _forests_cached(n, labels):
    if n == 0:
        return [()]
    out = []
    for k in range(1, n + 1):  # size of first tree
        for t in _trees_cached(k, labels):
            for rest in _forests_cached(n - k, labels):
                out.append((t,) + rest)
    return out


@lru_cache(maxsize=None)
def _trees_cached(n, labels):
    return [(lab, f) for lab in labels for f in _forests_cached(n - 1, labels)]


def _deletions(forest):
    """Forests reachable by deleting one node (children splice in place)."""
    for i, (lab, kids) in enumerate(forest):
        yield forest[:i] + kids + forest[i + 1:]
        for sub in _deletions(kids):
            yield forest[:i] + ((lab, sub),) + forest[i + 1:]


def _relabelings(forest, labels):
    for i, (lab, kids) in enumerate(forest):
        for other in labels:
            if other != lab:
                yield forest[:i] + ((other, kids),) + forest[i + 1:]
        for sub in _relabelings(kids, labels):
            yield forest[:i] + ((lab, sub),) + forest[i + 1:]


def to_forest_tree(t: LabeledTree):
    return (t.label, tuple(to_forest_tree(c) for c in t.children))


def from_forest_tree(ft) -> LabeledTree:
    return LabeledTree(ft[0], tuple(from_forest_tree(c) for c in ft[1]))


class BruteForceTreeOracle:
    """Unit-cost tree edit distance by shortest paths over all small forests.

    Nodes of the move graph are every ordered forest with at most
    ``max_nodes`` nodes over ``labels``; edges are single node deletions
    (insertion is the reverse edge) and single relabelings.  An optimal
    script never needs more nodes than the larger endpoint, so distances
    between trees within the bound are exact.
    """

    def __init__(self, max_nodes=5, labels=(b"a", b"b")):
        self.labels = tuple(labels)
        forests = []
        for n in range(max_nodes + 1):
            forests.extend(_forests(n, self.labels))
        self.forests = forests
        self.index = {f: i for i, f in enumerate(forests)}
        rows, cols = [], []
        for i, f in enumerate(forests):
            for g in _deletions(f):
                rows.append(i)
                cols.append(self.index[g])
            for g in _relabelings(f, self.labels):
                rows.append(i)
                cols.append(self.index[g])
        m = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(forests), len(forests))).tocsr()
        self.trees = [from_forest_tree(f[0]) for f in forests if len(f) == 1]
        tree_ids = [self.index[(to_forest_tree(t),)] for t in self.trees]
        dist = shortest_path(m, directed=False, unweighted=True, indices=tree_ids)
        self.distances = dist[:, tree_ids].astype(int)

    def distance(self, a: LabeledTree, b: LabeledTree) -> int:
        ia = self.trees.index(a)
        ib = self.trees.index(b)
        return int(self.distances[ia, ib])


# --- suites ----------------------------------------------------------------

def proposition_suite(seed=0, cases=1000, max_points=5, max_len=6):
    rng = random.Random(seed)
    results = []
    failure = None
    for k in range(cases):
        path, section = random_parallel_path(rng, max_points, max_len)
        if not is_parallel(path, section):
            failure = {"case": k, "reason": "generated path is not parallel", "path": [list(p) for p in path]}
            break
        rep = check_proposition(path, section, GENERAL_COSTS)
        if not rep.lifted_equal:
            failure = {"case": k, "path": [list(p) for p in path], "report": rep.to_dict()}
            break
    results.append(PropertyResult("horizontal length equals lifted vertical length", k + 1, failure is None,
                                  failure))
    return results


def rewrite_suite(seed=0, cases=1000):
    rng = random.Random(seed)
    failure = None
    for k in range(cases):
        data, rule = random_rewrite_case(rng)
        af = apply_rewrite(data, rule, scanner=None)
        back = invert_rewrite(af.content)
        if back != data:
            failure = {"case": k, "input": list(data), "rule": [list(rule.pattern), list(rule.replacement)]}
            break
        again = apply_rewrite(af.content, rule, scanner=None).content
        if again != af.content:
            failure = {"case": k, "reason": "not idempotent", "input": list(data)}
            break
    return [PropertyResult("invert after apply is the identity", k + 1, failure is None, failure)]


def treedist_suite(seed=0, max_nodes=5, labels=(b"a", b"b")):
    oracle = BruteForceTreeOracle(max_nodes, labels)
    trees = oracle.trees
    failure = None
    count = 0
    for i, a in enumerate(trees):
        for j, b in enumerate(trees):
            count += 1
            got = tree_edit_distance(a, b)
            want = int(oracle.distances[i, j])
            if got != want:
                failure = {"a": a.to_dict(), "b": b.to_dict(), "got": got, "oracle": want}
                break
        if failure:
            break
    return [PropertyResult(f"tree edit distance matches brute force on all trees <= {max_nodes} nodes",
                           count, failure is None, failure)]


def synlang_suite(seed=0, cases=500, max_depth=4):
    rng = random.Random(seed)
    failure = None
    for k in range(cases):
        ast = random_ast(rng, max_depth)
        src = unparse(ast)
        if abstract(parse(src)) != ast:
            failure = {"case": k, "reason": "unparse/abstract", "source": src.decode()}
            break
        if from_cfg(to_cfg(ast)) != ast:
            failure = {"case": k, "reason": "cfg round trip", "source": src.decode()}
            break
    return [PropertyResult("AST round trips through source and CFG", k + 1, failure is None, failure)]


SUITES = {
    "proposition": proposition_suite,
    "rewrite": rewrite_suite,
    "treedist": treedist_suite,
    "synlang": synlang_suite,
}


def run_suite(name, seed=0):
    if name == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn(seed=seed))
        return out
    return SUITES[name](seed=seed)
