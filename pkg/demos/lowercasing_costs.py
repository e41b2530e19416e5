"""
What does it cost to lowercase a word?
======================================

Lowercasing "ABCD" by horizontal edits alone needs four deletions and four
insertions.  Adding invertible character shifts changes the bill.
"""

from geoxform import find_transform, insdel_config

# edits only: no substitutions, so each letter is a delete plus an insert
plain = find_transform("ABCD", "abcd", insdel_config())
print("edits only:", plain.total_cost)

# 31 generates the cyclic alphabet.  'A' is 32 below 'a' in the alphabet
# index, but 'B' shifted by 31 is exactly 'a', so drop the 'A' and let the
# remaining letters slide down one place before appending 'd'
shifted = find_transform("ABCD", "abcd", insdel_config("shift31"))
print("with shift31:", shifted.total_cost)
for step in shifted.steps:
    print("  ", step)

# the script is a replayable artifact
print(len(shifted.dumps()), "bytes of JSON, ends at", shifted.end)

# one letter with unit shifts: 32 vertical steps versus delete + insert
print("A -> a, unit shifts only:", find_transform("A", "a", insdel_config("unit", horizontal=False)).total_cost)
print("A -> a, mixed:", find_transform("A", "a", insdel_config("unit")).total_cost)
