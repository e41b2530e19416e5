"""
Reversible rewriting of a PDF typo
==================================

A common corruption writes ``objend`` where ``endobj`` belongs.  The fix is
applied with an annotation that records the original bytes, so it can be
undone exactly.
"""

from geoxform.rewrite import RULES, apply_rewrite, invert_rewrite, rewrite_stages

rule = RULES["objend-endobj"]
pdf = b"1 0 obj\n<< /Type /Catalog >>\nobjend\ntrailer\n"

# the two stages: annotate first, then replace the token
annotated, rewritten = rewrite_stages(b"objend", rule)
print(annotated.decode())
print(rewritten.decode())

fixed = apply_rewrite(pdf, rule)
print(fixed.content.decode())
print("sites:", len(fixed.annotations))

# inverting recovers the exact input, byte for byte
assert invert_rewrite(fixed) == pdf

# strings are protected: a match inside (...) is refused
try:
    apply_rewrite(b"(objend)", rule)
except Exception as exc:
    print(type(exc).__name__, exc)
