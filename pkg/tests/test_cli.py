import pytest
from click.testing import CliRunner

from fdva import gallery
from fdva.automata import dumps, isomorphic, loads, minimize
from fdva.cli import main


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return go


def write(name, text):
    with open(name, "w", encoding="utf-8") as fh:
        fh.write(text)
    return name


def test_build_plus(run):
    write("plus.pf", "x1 + x2 = x3\n")
    res = run("build", "--r", "2", "--m", "3", "plus.pf", "--out", "plus.fdva")
    assert res.exit_code == 0
    assert loads(open("plus.fdva").read()) == minimize(gallery.plus())
    again = run("build", "--r", "2", "--m", "3", "plus.pf")
    assert again.output == open("plus.fdva").read()


def test_build_errors(run):
    write("empty.pf", "   \n")
    assert run("build", "empty.pf").exit_code == 2
    assert run("build", "missing.pf").exit_code == 2
    write("bad.pf", "x1 <= \n")
    assert run("build", "bad.pf").exit_code == 2


def test_member_and_apply(run):
    write("six.pf", "x1 = 6\n")
    run("build", "six.pf", "--out", "six.fdva")
    assert run("member", "six.fdva", "6").exit_code == 0
    assert run("member", "six.fdva", "5").exit_code == 1
    res = run("apply", "symdiff", "six.fdva", "six.fdva")
    assert res.exit_code == 0
    a = loads(res.output)
    assert a.size == 1 and not any(a.final)
    assert run("apply", "complement", "six.fdva", "six.fdva").exit_code == 2
    assert run("apply", "flip", "six.fdva").exit_code == 2
    assert run("apply", "flip", "six.fdva", "--sign", "1").exit_code == 0


def test_translate_round_trip(run):
    write("leq.fdva", dumps(minimize(gallery.leq2())))
    assert run("translate", "leq.fdva", "--to", "ndd", "--out", "leq.ndd").exit_code == 0
    res = run("translate", "leq.ndd", "--to", "fdva")
    assert res.exit_code == 0
    assert isomorphic(loads(res.output), minimize(gallery.leq2()))


def test_analyze(run):
    write("leq.fdva", dumps(minimize(gallery.leq2())))
    res = run("analyze", "leq.fdva")
    assert res.exit_code == 0
    assert "boundary(V=Q^2) \\ axes = { x1 - 2*x2 = 0 }" in res.output
    assert run("analyze", "leq.fdva").output == res.output
    write("none.pf", "false\n")
    run("build", "none.pf", "--m", "2", "--out", "none.fdva")
    assert "terminal components: 0" in run("analyze", "none.fdva").output


def test_decide(run):
    write("leq.fdva", dumps(minimize(gallery.leq2())))
    res = run("decide", "leq.fdva", "--out", "leq.pf")
    assert res.exit_code == 0 and res.output.startswith("Presburger")
    run("build", "leq.pf", "--m", "2", "--out", "back.fdva")
    assert isomorphic(loads(open("back.fdva").read()), minimize(gallery.leq2()))
    write("pow.fdva", dumps(gallery.powers_of_two()))
    res = run("decide", "pow.fdva")
    assert res.exit_code == 3 and "NotPresburger" in res.output
    write("z.pf", "true\n")
    run("build", "z.pf", "--m", "2", "--out", "z.fdva")
    assert run("decide", "z.fdva").exit_code == 0
    assert run("decide", "leq.fdva", "pow.fdva").exit_code == 3


def test_corpus_is_seeded(run):
    a = run("--seed", "7", "corpus", "--count", "5", "--quantifiers")
    b = run("--seed", "7", "corpus", "--count", "5", "--quantifiers")
    assert a.exit_code == 0 and a.output == b.output and len(a.output.splitlines()) == 5
