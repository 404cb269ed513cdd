import pytest

from aptc_timed import parser as P
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed.errors import BoundExceeded, UnguardedRecursion

a, b = T.act("a"), T.act("b")


def test_drt_derive(cfg):
    S = sos.Semantics(cfg)
    assert S.derive(a) == (frozenset({(("a",), sos.SINK)}), None, False)
    assert S.derive(T.RelDelay(2, a)) == (frozenset(), T.RelDelay(1, a), False)
    assert S.derive(T.DEADLOCKED) == (frozenset(), None, True)
    acts, tick, dead = S.derive(T.Parallel(a, b))
    assert acts == frozenset({(("a", "b"), sos.SINK)}) and tick is None


def test_dat_derive(dat_cfg):
    S = sos.Semantics(dat_cfg)
    assert S.derive_at(a, 1)[2] is True
    l = sos.build_lts(T.AbsDelay(2, a), dat_cfg)
    assert l.states[1] == (T.AbsDelay(2, a), 1)
    assert l.tick[0] == 1


def test_build_lts_sequence(cfg):
    l = sos.build_lts(T.Seq(a, b), cfg)
    assert l.n == 2       # plus the termination sink
    assert [(s, lab) for s, lab, _ in l.aedges] == [(0, ("a",)), (1, ("b",))]


def test_recursion_loop(cfg):
    spec = P.parse_spec("X = a.X", cfg)
    l = sos.build_lts(T.RecConst("X", spec), cfg)
    assert l.n == 1 and l.aedges == [(0, ("a",), 0)]


def test_undelayable_deadlock_is_stuck(cfg):
    l = sos.build_lts(T.DEADLOCK, cfg)
    assert l.n == 1 and not l.aedges and not l.tedges and not l.deadlocked


def test_export_format(cfg):
    assert sos.build_lts(T.DEADLOCKED, cfg).export().decode().splitlines()[1] == "deadlock 0"
    assert sos.build_lts(a, cfg).export().decode().splitlines()[1] == '0 "{a}" SINK'
    lines = sos.build_lts(T.RelDelay(1, a), cfg).export().decode().splitlines()
    assert lines[1:] == ['0 "tick" 1', '1 "{a}" SINK']


def test_bounds(cfg, dat_cfg):
    with pytest.raises(BoundExceeded):
        sos.build_lts(P.parse_term("a.b.c", cfg), cfg, {"max_states": 2})
    spec = P.parse_spec("X = sigma[1](X)", dat_cfg)
    l = sos.build_lts(T.RecConst("X", spec), dat_cfg, {"horizon": 3})
    assert len(l.cut) == 1


def test_unguarded_recursion_detected(cfg):
    spec = P.parse_spec("X = X + a", cfg)
    with pytest.raises(UnguardedRecursion):
        sos.build_lts(T.RecConst("X", spec), cfg)


def test_delay_of_recursion_is_guarded(cfg):
    # σ¹(X) inside X's own right-hand side: ↑ of X is needed while deriving X
    spec = P.parse_spec("X = a.X + sigma[1](X)", cfg)
    l = sos.build_lts(T.RecConst("X", spec), cfg)
    assert l.n == 1 and l.tick[0] == 0


def test_dead_predicate_agrees_with_derive(cfg, dat_cfg):
    from aptc_timed.gen import TermGen
    S, D = sos.Semantics(cfg), sos.Semantics(dat_cfg)
    for t in TermGen(cfg, seed=9).terms(500):
        t = T.canonicalize(t)
        assert S.dead(t) == S.derive(t)[2]
    for t in TermGen(dat_cfg, seed=9).terms(300):
        t = T.canonicalize(t)
        for k in range(3):
            assert D.dead_at(t, k) == D.derive_at(t, k)[2]
