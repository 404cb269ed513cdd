from aptc_timed import abstraction as A
from aptc_timed import equivalence as E
from aptc_timed import parser as P
from aptc_timed import rewriter as R
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed.gen import TermGen, sweep_config
from aptc_timed.sos import SINK_ID


def L(src, cfg):
    return sos.build_lts(P.parse_term(src, cfg), cfg)


def test_hide_labels():
    assert A.hide_labels(("i",), ["i"]) == ("tau",)
    assert A.hide_labels(("i", "i"), ["i"]) == ("tau",)
    assert A.hide_labels(("a",), ["i"]) == ("a",)
    assert A.hide_labels(("a", "i"), ["i"]) == ("a", "tau")


def test_hide_keeps_time_and_deadlock(cfg):
    l = L("sigma[1](i) + deadlocked", cfg)
    h = A.hide(l, ["i"])
    assert h.tedges == l.tedges and h.deadlocked == l.deadlocked
    assert A.hide(A.hide(l, ["i"]), ["a"]).export() == A.hide(l, ["i", "a"]).export()


def test_minimize_removes_inert_tau(cfg):
    m = A.rb_minimize(L("a . tau . b", cfg))
    assert m.export() == L("a . b", cfg).export()


def test_minimize_without_tau_is_step_quotient(cfg):
    m = A.rb_minimize(L("a . b + a . b", cfg))
    assert m.n == 2 and E.step_bisim(m, L("a . b", cfg))


def test_minimize_collapses_tau_cycle(cfg):
    spec = P.parse_spec("X = i.Y; Y = i.X + a", cfg)
    t = T.Seq(T.act("c"), T.Abstract(["i"], T.RecConst("X", spec)))
    m = A.rb_minimize(sos.build_lts(t, cfg))
    # c, then one state doing a to termination
    assert m.n == 2 and m.succ[1] == [(("a",), SINK_ID)]


def test_minimize_keeps_root(cfg):
    l = L("tau . a", cfg)
    m = A.rb_minimize(l)
    assert E.rb_step_bisim(l, m) and not E.rb_step_bisim(m, L("a", cfg))


def test_minimize_time_into_silent_termination(cfg):
    l = L("sigma[1](tau)", cfg)
    assert E.rb_step_bisim(l, A.rb_minimize(l))


def test_minimize_random(cfg):
    for mode in (T.DRT, T.DAT):
        c = sweep_config("comm", mode)
        for t in TermGen(c, seed=13).terms(300):
            h = A.hide(sos.build_lts(t, c, {"horizon": 6}), ["a"])
            m = A.rb_minimize(h)
            assert E.rb_step_bisim(h, m) and A.rb_minimize(m).n == m.n


def test_hide_agrees_with_axioms(cfg):
    for t in TermGen(cfg, seed=17, depth=4).terms(200):
        n = R.normalize(T.Abstract(["a"], t), cfg)
        assert E.rb_step_bisim(A.hide(sos.build_lts(t, cfg), ["a"]), sos.build_lts(n, cfg))
