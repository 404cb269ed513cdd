import pytest

from aptc_timed import equivalence as E
from aptc_timed import parser as P
from aptc_timed import sos
from aptc_timed import terms as T
from aptc_timed.errors import ModeMismatch, TooLarge


def L(src, cfg):
    return sos.build_lts(P.parse_term(src, cfg), cfg)


def test_step_bisim(cfg):
    r = E.step_bisim(L("a + a", cfg), L("a", cfg))
    assert r.verdict and E.validate_step_relation(L("a + a", cfg), L("a", cfg), r.relation)
    r = E.step_bisim(L("sigma[1](a)", cfg), L("a", cfg))
    assert not r.verdict and r.observation == ["tick"]
    assert not E.step_bisim(L("a || b", cfg), L("a . b + b . a", cfg))


def test_replay_confirms_distinguishing_observation(cfg):
    l1, l2 = L("a . (b + c)", cfg), L("a . b + a . c", cfg)
    r = E.step_bisim(l1, l2)
    assert not r.verdict and r.witness_kind == "level"
    assert E.replay(l1, l2, r)
    l1, l2 = L("sigma[1](a)", cfg), L("a", cfg)
    assert E.replay(l1, l2, E.step_bisim(l1, l2))


def test_rb_step_bisim(cfg):
    assert E.rb_step_bisim(L("a . tau", cfg), L("a", cfg))
    r = E.rb_step_bisim(L("tau . a", cfg), L("a", cfg))
    assert not r.verdict and r.witness_kind == "root"
    assert E.rb_step_bisim(L("a . (tau . b + b)", cfg), L("a . b", cfg))
    assert not E.rb_step_bisim(L("a . (tau . b + c)", cfg), L("a . (b + c)", cfg))


def test_rb_root_recurses_along_time(cfg):
    assert not E.rb_step_bisim(L("sigma[1](tau . a)", cfg), L("sigma[1](a)", cfg))


def test_pomset(cfg):
    assert E.pomset_bisim_small(L("a . b", cfg), L("a . b", cfg))
    assert not E.pomset_bisim_small(L("a || b", cfg), L("a . b", cfg))
    assert E.pomset_bisim_small(L("a + b", cfg), L("b + a", cfg))


def test_hp(cfg):
    r = E.hp_bisim_small(L("a || b", cfg), L("a || b", cfg))
    assert r.verdict and E.validate_hp_relation(L("a || b", cfg), L("a || b", cfg), r.relation)
    assert E.hp_bisim_small(L("a", cfg), L("a", cfg))
    assert not E.hp_bisim_small(L("(a || b) + a . b", cfg), L("a . b", cfg))


def test_levels_separate(cfg):
    l1, l2 = L("a . b + a . c", cfg), L("a . (b + c)", cfg)
    assert not E.step_bisim(l1, l2) and not E.pomset_bisim_small(l1, l2)
    l1, l2 = L("(a || b) . c", cfg), L("(b || a) . c", cfg)
    assert E.hp_bisim_small(l1, l2) and E.pomset_bisim_small(l1, l2) and E.step_bisim(l1, l2)


def test_size_limit(cfg):
    with pytest.raises(TooLarge):
        E.pomset_bisim_small(L("a.a.a.a", cfg), L("a.a.a.a", cfg), max_events=3)
    spec = P.parse_spec("X = a.X", cfg)
    loop = sos.build_lts(T.RecConst("X", spec), cfg)
    with pytest.raises(TooLarge):
        E.hp_bisim_small(loop, loop)


def test_mode_mismatch(cfg, dat_cfg):
    with pytest.raises(ModeMismatch):
        E.step_bisim(L("a", cfg), L("a", dat_cfg))


def test_report_text(cfg):
    txt = E.step_bisim(L("sigma[1](a)", cfg), L("a", cfg)).text()
    assert txt.splitlines()[:3] == ["equivalence: step", "verdict: false", "distinguish: tick"]
