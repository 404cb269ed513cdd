"""
Step, rooted branching, pomset and hp bisimulation
==================================================

The checkers compare transition systems and return a report with a
verdict, a witness relation or a distinguishing observation.
"""

from aptc_timed import equivalence as E
from aptc_timed import parser as P
from aptc_timed import sos
from aptc_timed import terms as T

cfg = T.AlgebraConfig.make("abc")


def lts(text):
    return sos.build_lts(P.parse_term(text, cfg), cfg)


# a || b can do {a,b} in one step; a.b + b.a cannot
print(E.step_bisim(lts("a || b"), lts("a . b + b . a")).text())

# silent steps: a.tau.b equals a.b modulo rooted branching bisimilarity ...
print(E.rb_step_bisim(lts("a . tau . b"), lts("a . b")).verdict)
# ... but a tau at the root is not inert
print(E.rb_step_bisim(lts("tau . b + a"), lts("b + a")).text())

# the three true-concurrency levels agree on small terms without silent steps
l1, l2 = lts("a . (b || c)"), lts("a . (c || b)")
for check in (E.hp_bisim_small, E.pomset_bisim_small, E.step_bisim):
    print(check.__name__, check(l1, l2).verdict)
