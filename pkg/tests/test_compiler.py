import pytest

from conftest import spec, target
import oracles
from fspv.compiler import (compile_process, complete_property, determinize, flatten_label,
                           minimize)
from fspv.errors import (FspError, IndexOutOfRange, NondeterministicProperty,
                         StateLimitExceeded)
from fspv.fsp import parse_spec, resolve_constants
from fspv.model import ERROR, Lts, validate_lts


def compile_text(text, name, args=None, **kw):
    return compile_process(resolve_constants(parse_spec(text)), name, args, **kw)


@pytest.mark.parametrize("base,idx,label", [
    (("readSign",), [3], "readSign.3"), (("full", "moveto"), [2], "full.moveto.2"),
    (("stockCountA",), [0], "stockCountA.0"), (("a",), [1, 2], "a.1.2"),
])
def test_flatten_label(base, idx, label):
    assert flatten_label(base, idx) == label


def test_route():
    lts = target("route.fsp", "ROUTE")
    assert (lts.state_count, lts.transition_count) == (14, 31)
    assert validate_lts(lts) == []


def test_route_self_loops_have_escape():
    lts = target("route.fsp", "ROUTE")
    for s in lts.states():
        labels = {l for l, t in lts.out(s)}
        if any(t == s and l.startswith("readSign") for l, t in lts.out(s)):
            assert labels & {"movetonext", "movetoprevious", "waitforloading", "waitforunloading"}


def test_loader_cycle():
    lts = target("agents.fsp", "LOADER")
    assert (lts.state_count, lts.transition_count) == (3, 3)


def test_move_full():
    lts = target("move_full.fsp", "MOVE_FULL")
    assert lts.state_count == 13 and lts.transition_count == 22
    again = compile_process(spec("move_full.fsp"), "MOVE_FULL", [1])
    assert again == lts


def test_parameter_override_changes_start():
    lts = compile_process(spec("move_full.fsp"), "MOVE_FULL", [7])
    assert {l for l, _ in lts.out(0)} == {"readSign.7", "readUnloadSign"}


def test_compile_deterministic():
    a, b = target("route.fsp", "ROUTE"), target("route.fsp", "ROUTE")
    assert a == b and a.transitions == b.transitions


def test_alphabet_is_generated_labels():
    lts = compile_text("range R = 1..5\nP = Q[1], Q[i:R] = (when (i < 3) a[i] -> Q[i+1]).", "P")
    assert lts.alphabet == ("a.1", "a.2")
    assert lts.state_count == 3


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        compile_text("range R = 1..2\nP = Q[1], Q[i:R] = (a -> Q[i+1]).", "P")


def test_unguarded_recursion():
    with pytest.raises(FspError, match="unguarded"):
        compile_text("P = Q, Q = P.", "P")


def test_state_limit():
    with pytest.raises(StateLimitExceeded) as info:
        target_spec = spec("route.fsp")
        compile_process(target_spec, "ROUTE", max_states=5)
    exc = info.value
    assert exc.limit == 5 and exc.partial is not None and exc.partial.state_count == 5
    assert exc.frontier >= 1


def test_state_limit_env(monkeypatch):
    monkeypatch.setenv("FSPV_MAX_STATES", "4")
    with pytest.raises(StateLimitExceeded):
        target("route.fsp", "ROUTE")


def test_shared_stop():
    lts = compile_text("P = (a -> STOP | b -> STOP | c -> d -> STOP).", "P")
    assert lts.state_count == 3


def test_complete_simple_property():
    lts = complete_property(compile_text("property P = (a -> STOP).", "P"))
    assert lts.has_error and lts.state_count == 2
    assert lts.transitions == ((0, "a", 1), (1, "a", ERROR))


def test_complete_empty_carrier():
    raw = compile_process(spec("empty_carrier.fsp"), "Empty_Carrier")
    assert raw.alphabet == ("empty.movetoNext.2", "empty.movetoNext.3",
                            "empty.movetoPrevious.1", "empty.movetoPrevious.2",
                            "empty.start", "empty.stop")
    done = complete_property(raw)
    errors = [t for t in done.transitions if t[2] == ERROR]
    assert (raw.state_count, raw.transition_count, len(errors)) == (4, 6, 18)
    assert set(raw.transitions) <= set(done.transitions)


def test_complete_noloss():
    raw = compile_process(spec("noloss.fsp"), "NOLOSS_Stock")
    assert raw.alphabet == ("empty.loaded", "full.moveto.1", "full.moveto.2", "full.unloaded")
    done = complete_property(raw)
    assert (done.state_count, done.transition_count) == (4, 16)
    for s in done.states():
        assert sorted(l for l, _ in done.out(s)) == list(done.alphabet)


def test_complete_rejects_nondeterminism():
    with pytest.raises(NondeterministicProperty, match="state 0 has two transitions on a"):
        complete_property(compile_text("property P = (a -> STOP | a -> b -> STOP).", "P"))


def test_complete_rejects_non_property():
    with pytest.raises(FspError):
        complete_property(compile_text("P = (a -> STOP).", "P"))


def test_determinize_branching():
    nfa = compile_text("P = (a -> b -> STOP | a -> c -> STOP).", "P")
    dfa = determinize(nfa)
    # the shared STOP sink makes the b- and c-successors one subset: 3 states, not 4
    assert dfa.is_deterministic() and dfa.state_count == 3
    after_a = dict(dfa.out(0))["a"]
    assert {l for l, _ in dfa.out(after_a)} == {"b", "c"}
    assert oracles.traces(dfa, 8) == oracles.traces(nfa, 8)


def test_determinize_fixed_point():
    lts = target("route.fsp", "ROUTE")
    assert determinize(lts) == lts
    one = Lts(1, (), ())
    assert determinize(one) == one


def test_determinize_rejects_error():
    with pytest.raises(FspError):
        determinize(target("noloss.fsp", "NOLOSS"))


def test_minimize_examples():
    assert minimize(compile_text("P = (a -> STOP | a -> STOP).", "P")).state_count == 2
    mu = target("maker_user.fsp", "MAKER_USER")
    assert minimize(mu).state_count == 4 and oracles.bisimilar(mu, minimize(mu))


def test_minimize_merges_bisimilar():
    lts = compile_text("P = (a -> Q), Q = (a -> P).", "P")
    assert lts.state_count == 2 and minimize(lts).state_count == 1


def test_minimize_keeps_error_apart_from_sink():
    lts = Lts(3, ["a", "b"], [(0, "a", 1), (0, "b", ERROR)], has_error=True)
    m = minimize(lts)
    assert m.has_error and oracles.bisimilar(lts, m)
    assert (0, "b", ERROR) in m.transitions


@pytest.mark.parametrize("file,name", [
    ("route.fsp", "ROUTE"), ("move_full.fsp", "MOVE_FULL"), ("stock.fsp", "STOCKSYSTEM"),
    ("noloss.fsp", "NOLOSS"), ("noloss_drivers.fsp", "NOLOSS_BAD"),
    ("empty_carrier.fsp", "Empty_Carrier"),
])
def test_minimize_corpus(file, name):
    lts = target(file, name)
    m = minimize(lts)
    assert oracles.bisimilar(lts, m)
    assert minimize(m) == m
    assert validate_lts(m) == []
