from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combitri.complex_core import f_vector
from combitri.constructions import boundary_of_simplex, fixture
from combitri.errors import BadType, ChiMismatch, DimensionMismatch, ResidualNonzero
from combitri.fvector import (
    FVector,
    VirtualMovePlan,
    apply_virtual,
    complete_f,
    d_vector,
    ds_residual_boundary,
    ds_residual_closed,
    hat_f,
    lower_top,
    q_matrix,
    reduced_system,
    solve_virtual_plan,
)
from combitri.moves import apply_bistellar, enumerate_bistellar
from combitri.complex_core import boundary_f_vector, double


def fv(*vals):
    return FVector.from_counts(vals)


# ---- d-vectors ----

def test_d_zero_move_dim2_by_counting():
    C = boundary_of_simplex(2)
    m = enumerate_bistellar(C, 0)[0]
    assert f_vector(apply_bistellar(C, m)) - f_vector(C) == d_vector(2, 0).d == (1, 3, 2)


def test_d_middle_dim2():
    assert d_vector(2, 1).d == (0, 0, 0)


def test_d_two_three_move_by_counting():
    # ∂Δ⁴ has no legal 1-move; a 0-move first creates some
    C = apply_bistellar(boundary_of_simplex(3), enumerate_bistellar(boundary_of_simplex(3), 0)[0])
    m = enumerate_bistellar(C, 1)[0]
    assert f_vector(apply_bistellar(C, m)) - f_vector(C) == d_vector(3, 1).d == (0, 1, 2, 1)


def test_d_antisymmetric_example():
    assert d_vector(3, 3).d == (-1, -4, -6, -3)


def test_d_bad_type():
    with pytest.raises(BadType):
        d_vector(2, 3)


@pytest.mark.parametrize("n", range(1, 11))
def test_d_identities(n):
    for i in range(n + 1):
        assert d_vector(n, n - i).d == tuple(-x for x in d_vector(n, i).d)
    if n % 2 == 0:
        assert d_vector(n, n // 2).d == (0,) * (n + 1)


# ---- Dehn–Sommerville ----

@pytest.mark.parametrize("n", range(1, 7))
def test_ds_closed_simplex_boundaries(n):
    assert not any(ds_residual_closed(f_vector(boundary_of_simplex(n))))


def test_ds_torus_and_perturbed():
    assert not any(ds_residual_closed(FVector(2, 0, (7, 21, 14))))
    res = ds_residual_closed(FVector(2, 1, (4, 6, 5)))
    assert any(res)


def test_ds_boundary_examples():
    assert not any(ds_residual_boundary(fv(4, 6, 3), fv(3, 3)))
    assert not any(ds_residual_boundary(fv(3, 3, 1), fv(3, 3)))
    assert any(ds_residual_boundary(fv(4, 6, 3), FVector(1, 0, (4, 4))))


def test_ds_boundary_dimension_check():
    with pytest.raises(DimensionMismatch):
        ds_residual_boundary(fv(4, 6, 3), fv(3, 3, 1))


# ---- q-matrix and completion ----

def test_q_matrix_dim2():
    Q = q_matrix(2)
    assert Q.coefficient(1, -1) == -6 and Q.coefficient(1, 0) == 3
    assert Q.coefficient(2, -1) == -4 and Q.coefficient(2, 0) == 2


def test_q_matrix_dim3():
    Q = q_matrix(3)
    # f_2 = 2f_1 - 2f_0, f_3 = f_1 - f_0
    assert [Q.coefficient(2, j) for j in (-1, 0, 1)] == [0, -2, 2]
    assert [Q.coefficient(3, j) for j in (-1, 0, 1)] == [0, -1, 1]


@pytest.mark.parametrize("n", range(1, 8))
def test_q_matrix_integral(n):
    Q = q_matrix(n)
    assert all(isinstance(x, int) for row in Q.q for x in row)


def test_complete_examples():
    assert complete_f((1, 4), 2).full() == (1, 4, 6, 4)
    assert complete_f((0, 7, 21), 3).f[2:] == (28, 14)
    assert complete_f((0, 7), 2).full() == (0, 7, 21, 14)
    assert complete_f((1, 12), 2).f == (12, 30, 20)


@pytest.mark.parametrize("name", ["sphere2_min", "icosahedron", "torus7", "rp2_6", "sphere3_min", "sphere4_min"])
def test_complete_on_fixtures(name):
    f = f_vector(fixture(name))
    m = lower_top(f.n)
    assert complete_f(f.full()[: m + 2], f.n).f == f.f


# ---- hat-f ----

def test_hat_f_coned_triangle():
    C = fixture("disk_cone")
    h = hat_f(f_vector(C), boundary_f_vector(C))
    assert h.full() == (Fraction(1, 2), Fraction(5, 2), Fraction(9, 2), 3)


def test_hat_f_closed():
    f = f_vector(fixture("torus7"))
    assert hat_f(f, FVector(1, 0, (0, 0))).full() == f.full()


def test_hat_f_is_half_double():
    C = fixture("disk_cone")
    h = hat_f(f_vector(C), boundary_f_vector(C))
    d = f_vector(double(C))
    assert tuple(2 * x for x in h.full()) == d.full()


# ---- virtual plans ----

def test_solve_sphere_to_icosahedron():
    plan = solve_virtual_plan(fv(4, 6, 4), fv(12, 30, 20))
    assert plan.x == (8,) and plan.describe() == "0:+8; N=8"


def test_solve_dim3():
    plan = solve_virtual_plan(FVector(3, 0, (5, 10, 10, 5)), FVector(3, 0, (6, 14, 16, 8)))
    assert plan.x == (1, 0)


def test_solve_identity():
    plan = solve_virtual_plan(fv(4, 6, 4), fv(4, 6, 4))
    assert plan.total_moves == 0 and plan.describe() == "N=0"


def test_solve_errors():
    with pytest.raises(ChiMismatch):
        solve_virtual_plan(fv(4, 6, 4), fv(7, 21, 14))
    with pytest.raises(ResidualNonzero):
        solve_virtual_plan(FVector(2, 1, (4, 6, 4)), FVector(2, 1, (5, 7, 4)))
    with pytest.raises(DimensionMismatch):
        solve_virtual_plan(fv(4, 6, 4), FVector(3, 0, (5, 10, 10, 5)))


def test_negative_plan_uses_high_moves():
    plan = solve_virtual_plan(fv(12, 30, 20), fv(4, 6, 4))
    assert plan.x == (-8,) and plan.move_types() == [2] * 8


def test_apply_virtual():
    assert apply_virtual(fv(4, 6, 4), VirtualMovePlan(2, (8,))).f == (12, 30, 20)
    base = f_vector(fixture("sphere3_min"))
    assert apply_virtual(base, VirtualMovePlan(3, (0, 0))).f == base.f


@pytest.mark.parametrize("n", range(1, 11))
def test_reduced_system_unit_lower_triangular(n):
    A = reduced_system(n)
    for k in range(len(A)):
        assert A[k][k] == 1
        assert all(A[k][i] == 0 for i in range(k + 1, len(A)))


# ---- properties ----

@st.composite
def base_and_plan(draw):
    n = draw(st.integers(1, 6))
    base = f_vector(boundary_of_simplex(n))
    x = tuple(draw(st.integers(-20, 20)) for _ in range(lower_top(n) + 1))
    return base, VirtualMovePlan(n, x)


@settings(max_examples=150, deadline=None)
@given(base_and_plan())
def test_plan_roundtrip(bp):
    base, plan = bp
    target = apply_virtual(base, plan)
    assert not any(ds_residual_closed(target))
    got = solve_virtual_plan(base, target)
    assert got == plan
    assert apply_virtual(apply_virtual(base, plan), plan.negated()).f == base.f


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.data())
def test_every_move_type_preserves_ds(n, data):
    i = data.draw(st.integers(0, n))
    base = f_vector(boundary_of_simplex(n))
    moved = FVector(n, base.f_minus1, tuple(a + b for a, b in zip(base.f, d_vector(n, i).d)))
    assert not any(ds_residual_closed(moved))
