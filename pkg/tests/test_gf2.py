import itertools

from hypothesis import given, strategies as st

from evendicycle.gf2 import satisfies, solve_lexmin


@st.composite
def systems(draw):
    nvars = draw(st.integers(0, 7))
    nrows = draw(st.integers(0, 9))
    rows = draw(st.lists(st.integers(0, (1 << nvars) - 1), min_size=nrows, max_size=nrows))
    rhs = draw(st.lists(st.integers(0, 1), min_size=nrows, max_size=nrows))
    return rows, rhs, nvars


@given(systems())
def test_lexmin_solution_equals_first_feasible_assignment(system):
    rows, rhs, nvars = system
    first = next((vals for vals in itertools.product((0, 1), repeat=nvars)
                  if satisfies(rows, rhs, vals)), None)
    sol = solve_lexmin(rows, rhs, nvars)
    if first is None:
        assert not sol.feasible
        combo = sol.conflict
        acc_row, acc_rhs = 0, 0
        for j in combo:
            acc_row ^= rows[j]
            acc_rhs ^= rhs[j]
        assert acc_row == 0 and acc_rhs == 1
    else:
        assert sol.feasible and sol.values == first


def test_small_cases():
    assert solve_lexmin([0b11], [1], 2).values == (0, 1)
    assert solve_lexmin([0b1, 0b1], [0, 1], 1).conflict == (0, 1)
    assert solve_lexmin([], [], 3).values == (0, 0, 0)
