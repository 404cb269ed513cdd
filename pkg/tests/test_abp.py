"""The protocol model is built from the standard equations; its verification verdict is reported, not assumed."""

import pytest

from aptc_timed import abp
from aptc_timed import terms as T
from aptc_timed.errors import ConfigError, ConfigOverflow


def test_alphabet_and_channels():
    system, spec, cfg = abp.build_abp(abp.AbpParams())
    for lab in ("cB_d1_0", "cB_bot", "cD_0", "cD_bot", "rA1_d1", "sC2_d1"):
        assert lab in cfg.alphabet
    assert cfg.comm("sB_d1_1", "rB_d1_1") == "cB_d1_1"
    assert system.tag == "Abstract" and system.args[0].tag == "Encapsulate"


def test_sender_sums_over_data():
    system, _, _ = abp.build_abp(abp.AbpParams(data=("d1", "d2")))
    spec = system.args[0].args[0].args[1].attr[1]
    assert len(T.summands(spec.rhs("S0"))) == 2


def test_parameter_validation():
    with pytest.raises(ConfigError):
        abp.build_abp(abp.AbpParams(t1p=0))
    with pytest.raises(ConfigError):
        abp.build_abp(abp.AbpParams(data=()))
    with pytest.raises(ConfigOverflow):
        abp.build_abp(abp.AbpParams(data=tuple("d%d" % i for i in range(40)), max_alphabet=50))


def test_sabotage_removes_ack_communication():
    _, _, cfg = abp.build_abp(abp.AbpParams(), sabotage=True)
    assert cfg.comm("sD_0", "rD_0") is None and cfg.comm("sD_bot", "rD_bot") == "cD_bot"


def test_verdict_is_reported_with_witness():
    # The model does not match its external specification under the
    # lockstep semantics of ‖ (see the decisions ledger): the report says so.
    r = abp.verify_abp(abp.AbpParams())
    assert not r.verdict and r.observation[0] == "{rA1_d1,rA2_d1}"


def test_diagnostics_find_stuck_state():
    lines = abp.abp_diagnostics(abp.AbpParams())
    assert lines[0].startswith("states ")
    assert any(l.startswith("shortest path to a stuck state") for l in lines)
