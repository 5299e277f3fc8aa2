from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmodel.core.errors import Inconsistent
from opmodel.core.linalg import (
    LinearMap,
    LinearSystem,
    format_scalar,
    image,
    in_span,
    kernel,
    left_inverse,
    parse_scalar,
    quotient,
    right_inverse,
    solve_columns,
)


@st.composite
def small_matrices(draw, max_side=4):
    rows = draw(st.integers(min_value=1, max_value=max_side))
    cols = draw(st.integers(min_value=1, max_value=max_side))
    values = draw(
        st.lists(
            st.lists(st.integers(min_value=-3, max_value=3), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return LinearMap.from_rows(values, cols)


def test_parse_scalar_forms():
    """Strings, integers and fractions all read as exact rationals."""
    assert parse_scalar("3/6") == Fraction(1, 2)
    assert parse_scalar(" -2 ") == Fraction(-2)
    assert parse_scalar(4) == Fraction(4)
    assert format_scalar(Fraction(-3, 9)) == "-1/3"


def test_parse_scalar_rejects_bool():
    with pytest.raises(TypeError):
        parse_scalar(True)


def test_kernel_of_row():
    """ker [1 1] is spanned by (-1, 1)."""
    f = LinearMap.from_rows([[1, 1]])
    k = kernel(f)
    assert k.shape == (2, 1)
    assert k.column(0) == {0: Fraction(-1), 1: Fraction(1)}
    assert (f @ k).is_zero()


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_rank_nullity(f):
    """rank + nullity = number of columns, and f kills its kernel."""
    k = kernel(f)
    assert f.rank() + k.cols == f.cols
    assert (f @ k).is_zero()
    assert image(f).cols == f.rank()
    assert k.is_injective()


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_quotient_section_splits_projection(f):
    """projection ∘ section = id and the projection kills the subspace."""
    q = quotient(f.rows, f)
    assert q.projection @ q.section == LinearMap.identity(q.section.cols)
    assert (q.projection @ f).is_zero()
    assert q.section.cols == f.rows - f.rank()


def test_solve_columns_inconsistent():
    f = LinearMap.from_rows([[1, 0], [0, 0]])
    target = LinearMap.from_rows([[0], [1]])
    with pytest.raises(Inconsistent):
        solve_columns(f, target)


def test_solve_columns_exact():
    f = LinearMap.from_rows([[2, 0], [0, 3]])
    target = LinearMap.from_rows([[1], [1]])
    x = solve_columns(f, target)
    assert x.column(0) == {0: Fraction(1, 2), 1: Fraction(1, 3)}


def test_one_sided_inverses():
    f = LinearMap.from_rows([[1, 0], [1, 1], [0, 2]])
    g = left_inverse(f)
    assert g @ f == LinearMap.identity(2)
    h = right_inverse(f.transpose())
    assert f.transpose() @ h == LinearMap.identity(2)
    with pytest.raises(Inconsistent):
        left_inverse(f.transpose())


def test_in_span():
    basis = LinearMap.from_rows([[1], [1], [0]])
    assert in_span(basis, {0: Fraction(2), 1: Fraction(2)})
    assert not in_span(basis, {2: Fraction(1)})
    assert in_span(basis, {})


def test_kron_shape_and_entries():
    a = LinearMap.from_rows([[1, 2]])
    b = LinearMap.from_rows([[0], [3]])
    k = a.kron(b)
    assert k.shape == (2, 2)
    assert k.dense() == [[0, 0], [3, 6]]


def test_linear_system_right_multiplication():
    """X A = B is solved for the matrix unknown X."""
    a = LinearMap.from_rows([[1, 1], [0, 1]])
    b = LinearMap.from_rows([[1, 2], [3, 4]])
    system = LinearSystem()
    system.add_unknown("X", 2, 2)
    system.add_block([("X", None, a, 1)], rhs=b)
    x = system.solve()["X"]
    assert x @ a == b


def test_linear_system_inconsistent():
    system = LinearSystem()
    system.add_unknown("X", 1, 1)
    system.add_block([("X", None, None, 1)], rhs=LinearMap.from_rows([[1]]))
    system.add_block([("X", None, None, 1)], rhs=LinearMap.from_rows([[2]]))
    assert not system.is_consistent()


def test_linear_system_kernel():
    """An unconstrained unknown has a full kernel basis."""
    system = LinearSystem()
    system.add_unknown("Y", 1, 2)
    _, basis = system.solve_with_kernel()
    assert len(basis) == 2
