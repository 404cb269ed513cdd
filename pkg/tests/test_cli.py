import subprocess
import sys

from aptc_timed.cli import main, parse_bounds


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_equiv_exit_codes(capsys):
    code, out, _ = run(["equiv", "step", "a+a", "a"], capsys)
    assert code == 0 and "verdict: true" in out
    code, out, _ = run(["equiv", "step", "sigma[1](a)", "a"], capsys)
    assert code == 1 and "distinguish: tick" in out


def test_errors_exit_2(capsys):
    code, out, err = run(["parse", "a + (b"], capsys)
    assert code == 2 and out == "" and "SyntaxError" in err
    code, _, err = run(["lts", "--bounds", "max_states=2", "a.b.c"], capsys)
    assert code == 2 and "BoundExceeded" in err
    code, _, err = run(["lts", "--bounds", "depth=2", "a"], capsys)
    assert code == 2 and "usage error" in err
    assert run(["nonsense"], capsys)[0] == 2


def test_normalize_trace(capsys):
    code, out, err = run(["normalize", "--trace", "abstract{i}(a . i)"], capsys)
    assert code == 0 and out == "a\n" and err.splitlines()[-1].startswith("B1\t")


def test_config_and_files(tmp_path, capsys):
    conf = tmp_path / "c.cfg"
    conf.write_text("[alphabet]\na b c\n[gamma]\na b -> c\n")
    term = tmp_path / "t.term"
    term.write_text("a >< b\n")
    code, out, _ = run(["normalize", "--config", str(conf), str(term)], capsys)
    assert code == 0 and out == "c + a || b\n"
    dest = tmp_path / "out.lts"
    code, out, _ = run(["lts", "--config", str(conf), "--out", str(dest), str(term)], capsys)
    assert code == 0 and out == "" and dest.read_text().startswith("timedlts")


def test_structured_output(capsys):
    code, out, _ = run(["equiv", "--format", "structured", "rb", "a.tau", "a"], capsys)
    lines = out.splitlines()
    assert lines[0] == "aptc-timed run" and "--- result" in lines and "verdict: true" in lines


def test_abp_command(tmp_path, capsys):
    p = tmp_path / "abp.params"
    p.write_text("data = d1\nt1 = 1\nt2 = 1\nt1p = 2\nt2p = 2\nmode = drt\n")
    code, out, _ = run(["abp", "--diagnostics", str(p)], capsys)
    assert code == 1 and "verdict: false" in out and "diagnostic: states" in out


def test_parse_bounds():
    assert parse_bounds("max_states=5,horizon=3,unfold=7") == {
        "max_states": 5, "horizon": 3, "unfold_depth": 7}


def test_deterministic_subprocess():
    cmd = [sys.executable, "-m", "aptc_timed.cli", "lts", "(a || b) . sigma[2](c) + a . tau"]
    outs = {subprocess.run(cmd, capture_output=True).stdout for _ in range(3)}
    assert len(outs) == 1
