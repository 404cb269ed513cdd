"""
Terms, transitions and normal forms
===================================

Parse a few timed terms, look at their one-step behaviour and rewrite
them to basic terms with the axioms.
"""

from aptc_timed import parser as P
from aptc_timed import rewriter as RW
from aptc_timed import sos
from aptc_timed import terms as T

# an alphabet with one communication: a and b together give c
cfg = T.AlgebraConfig.make("abc", {("a", "b"): "c"})

# the whole parallel operator >< offers the communication and both interleavings
t = P.parse_term("(a >< b) . sigma[1](c)", cfg)
print(T.pretty(t))

# the transition system: steps are multisets of labels, ticks advance time
lts = sos.build_lts(t, cfg)
print(lts.export().decode())

# normalization to a basic term, with the rules that fired
trace = []
nf = RW.normalize(t, cfg, trace=trace)
print(T.pretty(nf))
print(RW.format_trace(trace))

# absolute timing: parallel components act in lockstep, so actions at
# time points 2 and 3 cannot both happen and the term deadlocks at 2
dat = T.AlgebraConfig.make("abc", {("a", "b"): "c"}, mode=T.DAT)
print(T.pretty(RW.normalize(P.parse_term("sigma[2](a) || sigma[3](b)", dat), dat)))
