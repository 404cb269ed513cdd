import pytest

from aptc_timed import axioms as AX
from aptc_timed import parser as P
from aptc_timed import rewriter as R
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed import equivalence as E
from aptc_timed.errors import NonTermination
from aptc_timed.gen import TermGen, sweep_config

a, b, c = T.act("a"), T.act("b"), T.act("c")


def test_rewrite_step_examples(cfg):
    rules = R.ruleset(cfg)
    assert R.rewrite_step(T.RelDelay(0, a), rules) == (a, "DRT1")
    assert R.rewrite_step(T.RelDelay(2, T.RelDelay(3, a)), rules) == (T.RelDelay(5, a), "DRT2")
    assert R.rewrite_step(a, rules) is None


def test_normalize_examples(cfg):
    assert R.normalize(T.WholeParallel(a, b), cfg) is T.alt(T.Parallel(a, b), c)
    assert R.normalize(T.Alt(a, T.DEADLOCK), cfg) is a
    trace = []
    assert R.normalize(P.parse_term("abstract{i}(a . i)", cfg), cfg, trace=trace) is a
    assert [tag for tag, _, _ in trace][-1] == "B1"
    t = T.RelTimeout(3, T.RelDelay(2, a))
    assert R.normalize(t, cfg) is T.RelDelay(2, a)


def test_prove_equal(cfg):
    assert R.prove_equal(P.parse_term("(a + b) . c", cfg), P.parse_term("a . c + b . c", cfg), cfg)
    assert not R.prove_equal(T.RelDelay(1, a), a, cfg)
    assert R.prove_equal(T.Alt(T.Parallel(a, b), T.DEADLOCKED), T.Parallel(a, b), cfg)


def test_trace_format(cfg):
    trace = []
    R.normalize(T.RelDelay(0, a), cfg, trace=trace)
    assert R.format_trace(trace) == "DRT1\tsigma[0](a)\ta"


def test_budget(cfg):
    t = TermGen(cfg, seed=1, depth=7, stop=0.0).term()
    with pytest.raises(NonTermination):
        R.normalize(t, cfg, budget=1)


def test_every_axiom_is_accounted_for():
    for mode in (T.DRT, T.DAT):
        cfg = T.AlgebraConfig.make("ab", mode=mode)
        tags = R.ruleset(cfg).tags()
        table = AX.axiom_table(mode)
        for name in R.AXIOMS[mode]:
            assert name in table, name
            assert name in tags or name in R.AC_AXIOMS, name
        for tag in tags:
            assert tag in R.AXIOMS[mode] or tag in R.EXTENSIONS or tag in R.AXIOMS[T.DRT] \
                or tag in R.AXIOMS[T.DAT], tag


def test_b3_is_not_a_congruence_for_communication():
    # b ‖ τ = b is sound on its own but not under |: only b communicates with a
    cfg = T.AlgebraConfig.make("abc", {("a", "b"): "c"})
    l = sos.build_lts(T.CommMerge(a, T.Parallel(b, T.SILENT)), cfg)
    r = sos.build_lts(T.CommMerge(a, b), cfg)
    assert E.rb_step_bisim(sos.build_lts(T.Parallel(b, T.SILENT), cfg), sos.build_lts(b, cfg))
    assert not E.rb_step_bisim(l, r)
    assert R.normalize(T.Parallel(b, T.SILENT), cfg) is T.Parallel(b, T.SILENT)
    assert R.ruleset(cfg, b3=True).apply_root(T.Parallel(b, T.SILENT)) == (b, "B3")


def test_tau_law_inside_parallel_is_not_applied():
    # a·τ·δ̇ ‖ y differs from a·δ̇ ‖ y, so B1 only runs on the basic term
    cfg = T.AlgebraConfig.make("ab")
    t = T.Parallel(T.Seq(a, T.Seq(T.SILENT, T.DEADLOCKED)), T.Seq(b, b))
    n = R.normalize(t, cfg)
    assert E.rb_step_bisim(sos.build_lts(t, cfg), sos.build_lts(n, cfg))


@pytest.mark.parametrize("mode", [T.DRT, T.DAT])
@pytest.mark.parametrize("kind", ["comm", "priority"])
def test_normal_forms_are_basic_and_sound(mode, kind):
    cfg = sweep_config(kind, mode)
    for t in TermGen(cfg, seed=21).terms(400):
        trace = []
        n = R.normalize(t, cfg, trace=trace)
        assert T.is_basic(n, mode), T.pretty(t)
        check = E.rb_step_bisim if R.used_tau_laws(trace) else E.step_bisim
        assert check(sos.build_lts(t, cfg), sos.build_lts(n, cfg)), T.pretty(t)
