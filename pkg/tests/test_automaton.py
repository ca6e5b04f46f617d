import pytest
from hypothesis import given
from hypothesis import strategies as st

from tmlab.automaton import Action, AutomatonState, action_of, deepest, depth, penalty, reward


@st.composite
def automata(draw, max_n=50):
    n = draw(st.integers(1, max_n))
    return n, draw(st.integers(1, 2 * n))


@pytest.mark.parametrize(
    "n, state, expected",
    [(3, 1, Action.INCLUDE), (3, 4, Action.EXCLUDE), (1, 2, Action.EXCLUDE), (3, 3, Action.INCLUDE)],
)
def test_action(n, state, expected):
    assert AutomatonState(state, n).action is expected


@pytest.mark.parametrize("n, state, expected", [(3, 2, 1), (3, 1, 1), (3, 5, 6), (3, 6, 6), (3, 3, 2), (3, 4, 5)])
def test_reward(n, state, expected):
    assert AutomatonState(state, n).apply_reward().state == expected


@pytest.mark.parametrize("n, state, expected", [(3, 3, 4), (3, 4, 3), (1, 1, 2), (1, 2, 1), (3, 1, 2), (3, 6, 5)])
def test_penalty(n, state, expected):
    assert AutomatonState(state, n).apply_penalty().state == expected


@pytest.mark.parametrize("state, n", [(0, 3), (7, 3), (1, 0)])
def test_invalid_state(state, n):
    with pytest.raises(ValueError):
        AutomatonState(state, n)


def test_symbols_round_trip():
    for a in Action:
        assert Action.from_symbol(a.symbol) is a
    with pytest.raises(ValueError):
        Action.from_symbol("X")


def test_depth_and_deepest():
    assert [depth(s, 3) for s in range(1, 7)] == [3, 2, 1, 1, 2, 3]
    assert deepest(Action.INCLUDE, 5) == 1
    assert deepest(Action.EXCLUDE, 5) == 10


@given(automata())
def test_transitions_stay_in_range(a):
    n, s = a
    assert 1 <= reward(s, n) <= 2 * n
    assert 1 <= penalty(s, n) <= 2 * n


@given(automata())
def test_reward_keeps_action(a):
    n, s = a
    assert action_of(reward(s, n), n) is action_of(s, n)


@given(automata())
def test_penalty_flips_only_at_boundary(a):
    n, s = a
    flipped = action_of(penalty(s, n), n) is not action_of(s, n)
    assert flipped == (s in (n, n + 1))


@given(automata())
def test_reward_then_penalty_reverses_off_the_ends(a):
    n, s = a
    if s not in (1, 2 * n):
        assert penalty(reward(s, n), n) == s


@given(st.integers(1, 50))
def test_fixed_points(n):
    assert [s for s in range(1, 2 * n + 1) if reward(s, n) == s] == [1, 2 * n]
    assert all(penalty(s, n) != s for s in range(1, 2 * n + 1))
