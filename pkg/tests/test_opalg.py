import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivlab.corealg import GF
from derivlab.opalg import (
    DimensionBoundExceeded,
    InvalidAlgebraError,
    LinearOperator,
    StructureAlgebra,
    algebra_from_operators,
    assoc_span_closure,
    is_nilpotent_operator,
    left_mult_operator,
    lie_span_closure,
    lower_central_series,
    strictly_upper_triangular,
)

from helpers import rand_matrix, rand_strict_upper

small = st.integers(-2, 2)


def mats(d=3):
    return st.lists(small, min_size=d * d, max_size=d * d).map(
        lambda a: LinearOperator.from_rows([a[i * d:(i + 1) * d] for i in range(d)]))


def test_compose_convention():
    # F sends e0 -> e1; G sends e1 -> e2; G o F sends e0 -> e2
    F = LinearOperator(3, {(1, 0): 1})
    G = LinearOperator(3, {(2, 1): 1})
    e0 = (Fraction(1), Fraction(0), Fraction(0))
    assert G.compose(F)(e0) == (0, 0, 1)
    assert G(F(e0)) == G.compose(F)(e0)
    assert F.compose(G).is_zero()


@given(mats(), mats(), mats())
@settings(max_examples=40)
def test_bracket_identities(A, B, C):
    assert A.bracket(B) == -B.bracket(A)
    jac = A.bracket(B.bracket(C)) + B.bracket(C.bracket(A)) + C.bracket(A.bracket(B))
    assert jac.is_zero()
    assert A.compose(B.compose(C)) == A.compose(B).compose(C)


def test_nilpotent_operator():
    N = LinearOperator(3, {(0, 1): 1, (1, 2): 1})
    assert is_nilpotent_operator(N) == (True, 3)
    assert is_nilpotent_operator(LinearOperator.identity(3)) == (False, None)
    assert is_nilpotent_operator(LinearOperator.zero(2)) == (True, 1)


def test_strictly_upper_triangular_series():
    for d in (3, 4, 5):
        A, pairs = strictly_upper_triangular(d)
        assert A.dim == d * (d - 1) // 2
        lcs = lower_central_series(A)
        assert lcs.nilpotent and lcs.index == d
        assert lcs.dims == tuple(sum(1 for i, j in pairs if j - i >= k) for k in range(1, d + 1))


def test_two_dim_nonabelian():
    A = StructureAlgebra(2, "lie", {(0, 1): {1: 1}, (1, 0): {1: -1}})
    lcs = lower_central_series(A)
    assert not lcs.nilpotent and lcs.dims == (2, 1)


def test_validation_rejects_bad_tables():
    with pytest.raises(InvalidAlgebraError):
        StructureAlgebra(2, "lie", {(0, 1): {1: 1}})
    with pytest.raises(InvalidAlgebraError):
        StructureAlgebra(1, "lie", {(0, 0): {0: 1}})
    with pytest.raises(InvalidAlgebraError):
        # e0*e0 = e1 and e1*e0 = e0 break associativity
        StructureAlgebra(2, "associative", {(0, 0): {1: 1}, (1, 0): {0: 1}})
    with pytest.raises(InvalidAlgebraError):
        StructureAlgebra(2, "jordan", {})


def test_json_round_trip():
    A, _ = strictly_upper_triangular(3)
    B = StructureAlgebra.from_json(A.to_json())
    assert B.table == A.table and B.kind == A.kind
    F = StructureAlgebra(1, "associative", {(0, 0): {0: 1}}, field=GF(3))
    assert StructureAlgebra.from_json(F.to_json()).field == GF(3)


def test_commutator_algebra_is_lie():
    rng = random.Random(3)
    for _ in range(10):
        ops = [rand_matrix(rng, 3, 0.4) for _ in range(2)]
        try:
            A, _ = algebra_from_operators(ops, "associative", dim_bound=9)
        except DimensionBoundExceeded:
            continue
        AL = A.lie_algebra()
        for i in range(A.dim):
            for j in range(A.dim):
                ei, ej = A.basis(i), A.basis(j)
                want = tuple(a - b for a, b in zip(A.mul(ei, ej), A.mul(ej, ei)))
                assert AL.mul(ei, ej) == want


def test_left_multiplication_matches_product():
    A, _ = strictly_upper_triangular(4)
    rng = random.Random(0)
    for _ in range(20):
        a = tuple(Fraction(rng.randint(-2, 2)) for _ in range(A.dim))
        b = tuple(Fraction(rng.randint(-2, 2)) for _ in range(A.dim))
        assert left_mult_operator(A, a)(b) == A.mul(a, b)


def test_closures():
    rng = random.Random(1)
    for _ in range(10):
        ops = [rand_strict_upper(rng, 4) for _ in range(2)]
        basis = assoc_span_closure(ops)
        assert len(basis) <= 6
        lie = lie_span_closure(ops)
        assert len(lie) <= len(basis)
    with pytest.raises(DimensionBoundExceeded):
        lie_span_closure([LinearOperator(3, {(0, 1): 1}), LinearOperator(3, {(1, 0): 1})], dim_bound=2)


def test_generators_first_in_basis():
    rng = random.Random(2)
    ops = [rand_strict_upper(rng, 4) for _ in range(2)]
    A, basis = algebra_from_operators(ops, "lie")
    assert basis[:2] == ops
