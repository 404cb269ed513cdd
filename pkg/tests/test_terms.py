import pytest

from aptc_timed import terms as T
from aptc_timed.errors import ConfigError, ModeMixError, UnknownLabel
from aptc_timed.gen import TermGen


def test_constructors_keep_shape(cfg):
    t = T.mk_term("Alt", [T.act("a"), T.DEADLOCKED], cfg)
    assert t.tag == "Alt"
    z = T.mk_term("RelDelay", [0, T.act("a")], cfg)
    assert z.tag == "RelDelay" and z.attr == 0


def test_mixing_timing_modes_rejected(cfg):
    t = T.Alt(T.RelDelay(1, T.act("a")), T.AbsDelay(1, T.act("b")))
    with pytest.raises(ModeMixError):
        T.validate(t, cfg)


def test_unknown_label_rejected(cfg):
    with pytest.raises(UnknownLabel):
        T.validate(T.act("z"), cfg)


def test_canonicalize_sorts_and_flattens():
    a, b, c = T.act("a"), T.act("b"), T.act("c")
    assert T.canonicalize(T.Alt(b, a)) is T.canonicalize(T.Alt(a, b))
    flat = T.canonicalize(T.Alt(T.Alt(a, b), c))
    assert T.pretty(flat) == "a + b + c"


def test_canonicalize_idempotent(cfg):
    g = TermGen(cfg, seed=3)
    for t in g.terms(300):
        c = T.canonicalize(t)
        assert T.canonicalize(c) is c


def test_hash_consing_identity():
    assert T.Seq(T.act("a"), T.act("b")) is T.Seq(T.act("a"), T.act("b"))


def test_is_basic():
    a, b, c = T.act("a"), T.act("b"), T.act("c")
    assert T.is_basic(T.DEADLOCKED, T.DRT)
    assert not T.is_basic(T.RelTimeout(1, a), T.DRT)
    assert T.is_basic(T.Alt(T.Parallel(a, b), T.RelDelay(2, c)), T.DRT)


def test_free_vars():
    X, Y = T.RecVar("X"), T.RecVar("Y")
    assert T.free_vars(X) == {"X"}
    assert T.free_vars(T.Alt(T.Seq(T.act("a"), X), Y)) == {"X", "Y"}
    spec = T.LinearRecSpec([("X", T.Seq(T.act("a"), X))])
    assert T.free_vars(T.RecConst("X", spec)) == set()


def test_config_closure_and_errors():
    c = T.AlgebraConfig.make("abc", {("a", "b"): "c"})
    assert c.comm("b", "a") == "c"
    with pytest.raises(ConfigError):
        T.AlgebraConfig.make("ab", {("a", "b"): "tau"})
    with pytest.raises(ConfigError):
        T.AlgebraConfig.make("ab", {}, [("a", "a")])
    with pytest.raises(ConfigError):
        T.AlgebraConfig.make("ab", {}, (), [("a", "b"), ("b", "a")])


def test_unless_label_uses_conflict_and_causality():
    c = T.AlgebraConfig.make("abc", {}, [("a", "b")], [("b", "c")])
    assert c.unless_label("a", {"b"}) == T.TAU
    assert c.unless_label("c", {"a"}) == T.TAU    # a ♯ b and b ≤ c
    assert c.unless_label("c", {"c"}) == "c"
    assert c.unless_label("a", {"c"}) == "a"
