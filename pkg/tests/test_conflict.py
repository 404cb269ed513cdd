from aptc_timed import conflict as C
from aptc_timed import sos
from aptc_timed import terms as T

a, b, c = T.act("a"), T.act("b"), T.act("c")
CFG = T.AlgebraConfig.make("abc", {}, [("a", "b")], [("b", "c")])


def steps(t):
    return sorted(l for _, l, _ in sos.build_lts(t, CFG).aedges)


def test_theta_of_action_is_action():
    assert C.theta_push(a, T.DRT) == (a, "CE25DR")
    assert steps(T.ConflictElim(a)) == [("a",)]


def test_theta_of_conflicting_choice():
    # Θ(a + b): each branch is blocked by the other
    assert steps(T.ConflictElim(T.Alt(a, b))) == [("tau",)]


def test_theta_is_symmetric_over_sums():
    l = sos.build_lts(T.ConflictElim(T.alt(a, b, c)), CFG).export()
    r = sos.build_lts(T.ConflictElim(T.alt(c, b, a)), CFG).export()
    assert l == r


def test_unless_blocks_by_causality():
    assert steps(T.Unless(c, a)) == [("tau",)]
    assert steps(T.Unless(c, c)) == [("c",)]


def test_unless_right_operand_never_moves():
    assert steps(T.Unless(a, T.Seq(b, c))) == [("tau",)]
    # a is blocked by b; c is not (nothing in conflict with b lies below c)
    assert steps(T.Unless(T.Seq(a, c), b)) == [("c",), ("tau",)]
