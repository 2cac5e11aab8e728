import json

import pytest

from parwhile.cli import main
from parwhile.corpus import gen_corpus
from parwhile.lang import (
    Assign,
    Atomic,
    Await,
    If,
    Par,
    Seq,
    Skip,
    While,
    has_auxiliary,
    parse,
    pretty,
    sat,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_par_example_golden(capsys):
    code, out, _ = run(
        capsys,
        "eval", "--sem", "big", "--init", "{x=0}", "--depth", "6",
        "-e", "x := 1 || (x := x+2; x := x+2)",
    )
    assert code == 0
    assert out.strip() == (
        "(δ yield ⟨x := x+2; x := x+2⟩ {x=1} + δ yield ⟨x := 1 || x := x+2⟩ {x=2})"
    )


def test_eval_atomic_example_golden(capsys):
    code, out, _ = run(
        capsys,
        "eval", "--sem", "big", "--init", "{x=0}", "--depth", "12",
        "-e", "atomic { x := 1 || (x := x+2; x := x+2) }",
    )
    assert code == 0
    assert out.strip() == "(δ^5 ret {x=5} + δ^2 (δ^3 ret {x=3} + δ^3 ret {x=1}))"


def test_compare_trivial_holds(capsys):
    code, out, _ = run(
        capsys,
        "compare", "--left", "big", "--right", "small",
        "--init", "{x=0}", "--depth", "60", "-e", "skip",
    )
    assert code == 0 and out.strip() == "HOLDS(depth=60)"


def test_compare_giant_small(capsys):
    code, out, _ = run(
        capsys,
        "compare", "--left", "giant", "--right", "small",
        "--init", "{x=0}", "--depth", "40", "-e", "x := 1 || await x = 1 then y := 2",
    )
    assert code == 0 and out.strip() == "HOLDS(depth=40)"


def test_compare_trace_side(capsys):
    code, out, _ = run(
        capsys,
        "compare", "--left", "trace", "--right", "big",
        "--init", "{x=0}", "--depth", "30", "--schedule", "R",
        "-e", "x := 1 || x := 2",
    )
    assert code == 0 and out.strip() == "HOLDS(depth=30)"


def test_bisim_fails_exit_code(capsys):
    code, out, _ = run(capsys, "bisim", "skip", "x := 0", "--depth", "10")
    assert code == 1 and out.strip().startswith("FAILS(")


def test_quiet_exit_code_only(capsys):
    code, out, _ = run(
        capsys, "bisim", "skip", "x := 0", "--depth", "10", "--quiet"
    )
    assert code == 1 and out == ""


def test_parse_error_exit_3(capsys):
    code, _, err = run(capsys, "eval", "-e", "x := true")
    assert code == 3 and "type error" in err


def test_usage_error_exit_3(capsys):
    code, _, _ = run(capsys, "eval", "--sem", "nonsense", "-e", "skip")
    assert code == 3


def test_structured_format(capsys):
    code, out, _ = run(
        capsys,
        "eval", "--sem", "big", "--init", "{x=0}", "--depth", "3",
        "--format", "structured", "-e", "x := 1",
    )
    assert code == 0
    rec = json.loads(out)
    assert rec == {"kind": "delay", "children": [{"kind": "ret", "state": {"x": 1}}]}


def test_uninitialized_warning(capsys):
    code, _, err = run(capsys, "eval", "-e", "x := y", "--depth", "3")
    assert code == 0 and "possibly uninitialized" in err and "y" in err


def test_eval_trace_with_oracles(capsys):
    code, out, _ = run(
        capsys,
        "eval", "--sem", "trace", "--init", "{x=2}", "--depth", "8",
        "--resume", "{x=0}", "-e", "await x = 0 then x := 1",
    )
    assert code == 0
    assert out.strip() == "δ yield {x=2} [σ′={x=0} ↦ δ^2 ret {x=1}]"


def test_corpus_subcommand_writes_outputs(tmp_path, capsys):
    out_csv = tmp_path / "results.csv"
    report = tmp_path / "figs"
    code, out, _ = run(
        capsys,
        "corpus", "--seed", "3", "--count", "8", "--max-size", "6",
        "--depth", "30", "--out", str(out_csv), "--report-dir", str(report),
    )
    assert code == 0
    text = out_csv.read_text()
    assert text.splitlines()[0] == "index,program,init,check,verdict,depth,seconds"
    assert (report / "verdicts.png").exists()
    assert (report / "runtimes.png").exists()


# generator properties


def test_gen_corpus_minimal():
    (s, init), = gen_corpus(7, 1, 1)
    assert isinstance(s, (Skip, Assign))


def test_gen_corpus_deterministic():
    a = gen_corpus(42, 500, 12)
    b = gen_corpus(42, 500, 12)
    assert [(pretty(s), str(st)) for s, st in a] == [
        (pretty(s), str(st)) for s, st in b
    ]


def test_gen_corpus_covers_all_constructors_and_polarities():
    corpus = gen_corpus(42, 500, 12)
    seen = set()
    polarities = set()

    def walk(s, init):
        seen.add(type(s))
        if isinstance(s, Seq):
            walk(s.first, init), walk(s.second, init)
        elif isinstance(s, Par):
            walk(s.left, init), walk(s.right, init)
        elif isinstance(s, If):
            polarities.add(sat(s.guard, init))
            walk(s.then, init), walk(s.els, init)
        elif isinstance(s, While):
            polarities.add(sat(s.guard, init))
            walk(s.body, init)
        elif isinstance(s, (Atomic, Await)):
            if isinstance(s, Await):
                polarities.add(sat(s.guard, init))
            walk(s.body, init)

    for s, init in corpus:
        walk(s, init)
        assert not has_auxiliary(s)
    assert {Assign, Skip, Seq, If, While, Par, Atomic, Await} <= seen
    assert polarities == {True, False}


def test_gen_corpus_round_trips():
    for s, _ in gen_corpus(42, 500, 12):
        assert parse(pretty(s)) == s


def test_gen_corpus_rejects_bad_args():
    with pytest.raises(ValueError):
        gen_corpus(1, 0, 5)
    with pytest.raises(ValueError):
        gen_corpus(1, 5, 0)
