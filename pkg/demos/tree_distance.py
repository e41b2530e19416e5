"""
Tree edit distance between programs
===================================

Abstract syntax trees can be compared with ordered tree edit distance,
which gives a goal metric that ignores layout.
"""

from geoxform.synlang import SKELETON, abstract, parse
from geoxform.treedist import ast_distance, parse_tree, tree_edit_distance

a = parse_tree("f(d(a c(b)) e)")
b = parse_tree("f(c(d(a b)) e)")
print(a, "vs", b, "->", tree_edit_distance(a, b))

ref = abstract(parse(SKELETON))
reindented = abstract(parse(SKELETON.replace("  ", "\t")))
one_more = abstract(parse(SKELETON.replace("        S\n", "        S\n        S\n", 1)))
print("re-indented:", ast_distance(ref, reindented))
print("extra statement:", ast_distance(ref, one_more))
