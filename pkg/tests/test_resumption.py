import threading

from parwhile.bigstep import eval_stmt
from parwhile.lang import parse, parse_state
from parwhile.resumption import (
    Delay,
    FDelay,
    FPlus,
    FPruned,
    FRet,
    FYield,
    Res,
    Ret,
    delay,
    delta_inf,
    delta_n,
    prefix,
    prefix_g,
    prune_to,
    render,
    ret,
    to_record,
)

SIGMA = parse_state("{x=5}")


def test_force_ret():
    node = ret(SIGMA).force()
    assert isinstance(node, Ret) and node.state == SIGMA


def test_force_delta_inf():
    r = delta_inf()
    node = r.force()
    assert isinstance(node, Delay)
    assert isinstance(node.rest.force(), Delay)


def test_force_peels_one_constructor():
    r = delta_n(3, ret(SIGMA))
    node = r.force()
    assert isinstance(node, Delay)
    assert prefix(node.rest, 10) == FDelay(FDelay(FRet(SIGMA)))


def test_prefix_delta_inf():
    assert prefix(delta_inf(), 3) == FDelay(FDelay(FDelay(FPruned())))


def test_prefix_zero_budget():
    assert prefix(ret(SIGMA), 0) == FPruned()


def test_prefix_delay_ret():
    assert prefix(delay(ret(parse_state("{x=1}"))), 2) == FDelay(FRet(parse_state("{x=1}")))


def test_prefix_of_par_example():
    r = eval_stmt(parse("x := 1 || (x := x+2; x := x+2)"), parse_state("{x=0}"))
    ft = prefix(r, 3)
    assert isinstance(ft, FPlus)
    assert isinstance(ft.left, FDelay) and isinstance(ft.left.child, FYield)
    assert ft.left.child.state == parse_state("{x=1}")
    assert isinstance(ft.right, FDelay) and isinstance(ft.right.child, FYield)
    assert ft.right.child.state == parse_state("{x=2}")


def test_idempotent_forcing():
    r = eval_stmt(parse("x := 1 || (x := x+2; x := x+2)"), parse_state("{x=0}"))
    assert prefix(r, 6) == prefix(r, 6)


def test_prefix_agrees_after_pruning():
    r = eval_stmt(parse("atomic { while x < 3 do x := x+1 od || y := x }"), parse_state("{x=0}"))
    for d in (1, 3, 5, 9):
        assert prune_to(prefix(r, d + 1), d) == prefix(r, d)


def test_productivity_depth_1000():
    r = eval_stmt(parse("atomic { while true do x := x+1 od }"), parse_state("{x=0}"))
    ft = prefix(r, 1000)
    depth = 0
    while isinstance(ft, FDelay):
        depth += 1
        ft = ft.child
    assert depth == 1000 and ft == FPruned()


def test_producer_runs_once():
    calls = []

    def produce():
        calls.append(1)
        return Ret(SIGMA)

    r = Res(produce)
    r.force()
    r.force()
    assert len(calls) == 1


def test_concurrent_first_forcing():
    r = delta_n(2000, ret(SIGMA))
    results = []

    def worker():
        results.append(prefix(r, 2001))

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(res == results[0] for res in results)


def test_render_goldens():
    assert render(FRet(parse_state("{x=1}"))) == "ret {x=1}"
    assert render(FDelay(FRet(SIGMA))) == "δ ret {x=5}"
    assert render(FDelay(FDelay(FDelay(FRet(SIGMA))))) == "δ^3 ret {x=5}"
    assert render(FPruned()) == "…"
    r = eval_stmt(parse("x := 1 || (x := x+2; x := x+2)"), parse_state("{x=0}"))
    assert render(prefix(r, 6)) == (
        "(δ yield ⟨x := x+2; x := x+2⟩ {x=1} + δ yield ⟨x := 1 || x := x+2⟩ {x=2})"
    )


def test_structured_record():
    rec = to_record(FDelay(FRet(parse_state("{x=1}"))))
    assert rec == {"kind": "delay", "children": [{"kind": "ret", "state": {"x": 1}}]}


def test_prefix_g_needs_probes():
    import pytest

    with pytest.raises(ValueError):
        prefix_g(ret(SIGMA), 5, [])
    # but ret within budget never opens a continuation
    assert prefix(ret(SIGMA), 5) == FRet(SIGMA)
