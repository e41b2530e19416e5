"""
Lifting a toy structured program
================================

Programs are START, then statements ``S``, ``do while b ... enddo`` loops and
``if b ... endif`` branches, then HALT.  Each program lifts to a lossless
concrete tree, an abstract tree and a control-flow graph, and every lift
comes back down.
"""

from geoxform.synlang import SKELETON, abstract, from_cfg, parse, to_cfg, unparse, unparse_cst

print(SKELETON)

cst = parse(SKELETON)
assert unparse_cst(cst) == SKELETON.encode()

ast = abstract(cst)
print(ast)

cfg = to_cfg(ast)
print(len(cfg.predicates()), "predicate nodes,", len(cfg.statements()), "statement nodes")
for src, dst, label in cfg.edge_list():
    print(f"  {src} -{label}-> {dst}" if label is not None else f"  {src} -> {dst}")

# the graph is structured, so the abstract tree can be rebuilt from it
assert from_cfg(cfg) == ast
print(unparse(from_cfg(cfg)).decode())
