import pytest

from aptc_timed import equivalence as E
from aptc_timed import parser as P
from aptc_timed import recursion as R
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed.errors import NotACluster, NotLinear, UnknownVariable
from aptc_timed.gen import random_cluster_spec, random_linear_spec

a, b = T.act("a"), T.act("b")


def test_guardedness(cfg):
    assert R.check_guarded(P.parse_spec("X = a.X", cfg), cfg) == (True, [])
    assert R.check_guarded(P.parse_spec("X = sigma[1](X)", cfg), cfg)[0]
    ok, diags = R.check_guarded(P.parse_spec("X = X + a", cfg), cfg)
    assert not ok and diags == ["X: unguarded occurrence of X"]
    # guarded after substituting Y's right-hand side
    assert R.check_guarded(P.parse_spec("X = Y + a; Y = b.X", cfg), cfg)[0]


def test_linearity(cfg):
    assert R.is_linear(P.parse_spec("X = a.Y + sigma[2](b.X); Y = a || b", cfg), cfg)
    assert not R.is_linear(P.parse_spec("X = a.b.X", cfg), cfg)
    with pytest.raises(NotLinear):
        R.require_linear(P.parse_spec("X = a.b.X", cfg), cfg)


def test_unfold(cfg):
    s = P.parse_spec("X = a.X", cfg)
    assert R.unfold(s, "X", 1) is T.Seq(a, T.RecConst("X", s))
    assert R.unfold(s, "X", 0) is T.RecConst("X", s)
    s2 = P.parse_spec("X = a.Y; Y = b.X", cfg)
    assert R.unfold(s2, "X", 2) is T.Seq(a, T.Seq(b, T.RecConst("X", s2)))
    with pytest.raises(UnknownVariable):
        R.unfold(s2, "Z", 1)


def test_rsp(cfg):
    s = P.parse_spec("X = a.X", cfg)
    X = T.RecConst("X", s)
    assert R.rsp_check(s, {"X": X}, cfg)
    assert R.rsp_check(s, {"X": T.Seq(a, T.Seq(a, X))}, cfg)
    assert not R.rsp_check(s, {"X": T.Seq(b, X)}, cfg)


def _cfar_ok(spec, I, var, cfg, expected):
    r = R.cfar_eliminate(spec, I, var, cfg)
    lhs = T.Seq(T.SILENT, T.Abstract(I, T.RecConst(var, spec)))
    assert E.rb_step_bisim(sos.build_lts(r, cfg), sos.build_lts(lhs, cfg))
    assert E.rb_step_bisim(sos.build_lts(r, cfg), sos.build_lts(expected, cfg))


def test_cfar_examples(cfg):
    _cfar_ok(P.parse_spec("X = i.Y; Y = i.X + a", cfg), ["i"], "X", cfg, T.Seq(T.SILENT, a))
    _cfar_ok(P.parse_spec("X = i.X + b", cfg), ["i"], "X", cfg, T.Seq(T.SILENT, b))
    with pytest.raises(NotACluster):
        R.cfar_eliminate(P.parse_spec("X = a.X", cfg), ["i"], "X", cfg)
    with pytest.raises(NotACluster):      # no exit
        R.cfar_eliminate(P.parse_spec("X = i.X", cfg), ["i"], "X", cfg)
    with pytest.raises(NotACluster):      # external step back into the cluster
        R.cfar_eliminate(P.parse_spec("X = i.Y + a.X; Y = i.X + b", cfg), ["i"], "X", cfg)


def test_random_linear_specs_unfold_soundly(cfg):
    for seed in range(25):
        s = random_linear_spec(cfg, seed)
        assert R.check_guarded(s, cfg)[0] and R.is_linear(s, cfg)
        base = sos.build_lts(T.RecConst("X0", s), cfg)
        for d in range(4):
            assert E.step_bisim(sos.build_lts(R.unfold(s, "X0", d), cfg), base)


def test_random_clusters():
    cfg = T.AlgebraConfig.make("abcij")
    for seed in range(10):
        s = random_cluster_spec(cfg, ["i", "j"], seed)
        r = R.cfar_eliminate(s, ["i", "j"], "X0", cfg)
        lhs = T.Seq(T.SILENT, T.Abstract(["i", "j"], T.RecConst("X0", s)))
        assert E.rb_step_bisim(sos.build_lts(r, cfg), sos.build_lts(lhs, cfg))
