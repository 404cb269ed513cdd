"""
Recursion and abstraction
=========================

Guarded recursive specifications, unfolding, cluster elimination (CFAR)
and minimization modulo rooted branching bisimilarity.
"""

from aptc_timed import equivalence as E
from aptc_timed import parser as P
from aptc_timed import recursion as R
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed.abstraction import rb_minimize

cfg = T.AlgebraConfig.make("abcij")

# a specification with an internal cycle X -> Y -> X on i and j
spec = P.parse_spec("X = i . Y + a . Z\nY = j . X + b\nZ = c . X", cfg)
print(R.check_guarded(spec, cfg))

# unfolding once more does not change the behaviour
x = T.RecConst("X", spec)
print(E.step_bisim(sos.build_lts(R.unfold(spec, "X", 2), cfg), sos.build_lts(x, cfg)).verdict)

# CFAR replaces the hidden cluster by a silent step into its exits
members, exits = R.cluster_of(spec, ["i", "j"], "X", cfg)
print(members, [T.pretty(e) for e in exits])
elim = R.cfar_eliminate(spec, ["i", "j"], "X", cfg)
print(T.pretty(elim))
lhs = T.Seq(T.SILENT, T.Abstract(["i", "j"], x))
print(E.rb_step_bisim(sos.build_lts(elim, cfg), sos.build_lts(lhs, cfg)).verdict)

# minimization removes the inert silent steps of the hidden system
# (behind a prefix: the root state itself is always kept as a copy)
big = sos.build_lts(T.Seq(T.act("c"), T.Abstract(["i", "j"], x)), cfg)
small = rb_minimize(big)
print(big.n, "->", small.n, E.rb_step_bisim(big, small).verdict)
