import pytest

from fspv.model import (ERROR, Lts, ProgressProperty, Trace, is_valid_label, replay,
                        replay_states, trace_to_text, validate_lts)


def test_valid_one_state_lts():
    assert validate_lts(Lts(1, (), ())) == []


def test_label_outside_alphabet_named():
    problems = validate_lts(Lts(1, ["a"], [(0, "b", 0)]))
    assert len(problems) == 1 and "'b'" in problems[0]


def test_error_must_be_absorbing():
    problems = validate_lts(Lts(1, ["a"], [(0, "a", ERROR), (ERROR, "a", 0)], has_error=True))
    assert problems == ["ERROR must be absorbing"]


def test_error_target_requires_flag():
    assert validate_lts(Lts(1, ["a"], [(0, "a", ERROR)], has_error=False))


def test_state_out_of_range():
    assert validate_lts(Lts(1, ["a"], [(0, "a", 3)]))


@pytest.mark.parametrize("text,ok", [
    ("readSign.3", True), ("c.1.empty.loaded", True), ("a", True),
    ("", False), (".a", False), ("a.", False), ("a..b", False), ("a-b", False),
])
def test_label_syntax(text, ok):
    assert is_valid_label(text) is ok


def test_alphabet_canonical_and_transitions_sorted():
    lts = Lts(2, ["b", "a", "b"], [(1, "b", 0), (0, "a", 1), (0, "a", 1)])
    assert lts.alphabet == ("a", "b")
    assert lts.transitions == ((0, "a", 1), (1, "b", 0))


@pytest.mark.parametrize("actions,text", [
    ((), "<empty>"), (("make", "ready"), "make, ready"),
    (("c.1.empty.loaded", "c.1.full.unloaded"), "c.1.empty.loaded, c.1.full.unloaded"),
])
def test_trace_to_text(actions, text):
    assert trace_to_text(Trace(actions)) == text


def test_progress_property_nonempty():
    with pytest.raises(ValueError):
        ProgressProperty("P", frozenset())


def test_replay_nondeterministic():
    lts = Lts(3, ["a"], [(0, "a", 1), (0, "a", 2)])
    assert replay(lts, ["a"]) == {1, 2}
    assert replay_states(lts, Trace(("a",), (0, 2)))
    assert not replay_states(lts, Trace(("a",), (0, 0)))
