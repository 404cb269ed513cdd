import pytest

from aptc_timed import parser as P
from aptc_timed import terms as T
from aptc_timed.errors import ConfigError, SyntaxError, UnboundVariable


def test_parse_term_shapes(cfg):
    t = P.parse_term("sigma[2](a) . b + deadlock", cfg)
    a, b = T.act("a"), T.act("b")
    assert t is T.Alt(T.Seq(T.RelDelay(2, a), b), T.DEADLOCK)
    assert P.parse_term("a || b", cfg) is T.Parallel(a, b)


def test_parse_dat_builds_absolute_operators(dat_cfg):
    assert P.parse_term("sigma[1](a)", dat_cfg).tag == "AbsDelay"


def test_syntax_error_position(cfg):
    with pytest.raises(SyntaxError) as e:
        P.parse_term("a + ", cfg)
    assert e.value.span.column == 5


def test_pretty_round_trip(cfg):
    from aptc_timed.gen import TermGen
    for t in TermGen(cfg, seed=4).terms(300):
        # + and ‖ print flat, so compare up to their associativity
        assert T.canonicalize(P.parse_term(T.pretty(t), cfg)) is T.canonicalize(t)


def test_parse_spec(cfg):
    s = P.parse_spec("X = a . X", cfg)
    assert s.rhs("X") is T.Seq(T.act("a"), T.RecVar("X"))
    assert P.parse_spec("X = a.Y \n Y = b.X", cfg).variables == ("X", "Y")
    with pytest.raises(UnboundVariable):
        P.parse_spec("X = a.Y", cfg)


def test_term_file_with_spec_block(cfg):
    t, specs = P.parse_term_file("spec E\nX = a.X\nend\n<X|E>", cfg)
    assert t.tag == "RecConst" and "E" in specs


def test_load_config():
    c = P.load_config("[alphabet]\na b c\n[gamma]\na b -> c\n")
    assert c.comm("b", "a") == "c"
    with pytest.raises(ConfigError):
        P.load_config("[alphabet]\na b\n[gamma]\na b -> tau\n")
    with pytest.raises(ConfigError):
        P.load_config("[alphabet]\na b\n[conflict]\na a\n")
    assert P.load_config(P.dump_config(c)) == c
