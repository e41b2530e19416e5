"""
Horizontal paths lift with equal cost
=====================================

Pick a path of words and, above it, a section of group elements that carries
each point to the next one's image.  Walking the lifted path costs the same
as walking the base path.
"""

import random

from geoxform.bundle import check_proposition, is_parallel
from geoxform.fiber import act, solve_transporter
from geoxform.space import GENERAL_COSTS
from geoxform.suites import random_parallel_path

# the transporter from ABCD to ACD shifts B down to NULL in slot 3
g = solve_transporter("ABCD", "ACD")
print("transporter:", g.signed(), "->", act(g, "ABCD").word)

rng = random.Random(1)
path, section = random_parallel_path(rng, max_points=4, max_len=5)
print("path:", path)
print("parallel:", is_parallel(path, section))

report = check_proposition(path, section, GENERAL_COSTS)
print(report)
