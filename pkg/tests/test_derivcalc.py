from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivlab.corealg import RingMismatchError, ring_of
from derivlab.derivcalc import (
    Derivation,
    apply,
    apply_word,
    extend_linear_to_derivation,
    iterated_bracket,
    leibniz_expansion,
    lie_bracket,
    linear_combination,
)
from derivlab.opalg import LinearOperator

from helpers import R3, polys, triangular_derivations

P = polys(R3)
x, y, z = R3.gens()
D = Derivation(R3, {"y": x, "z": y})
E = Derivation(R3, {"x": y, "y": -z})


def test_intro_pair_values():
    assert apply(E, x) == y
    assert apply(D, apply(E, x)) == x
    assert lie_bracket(D, E)(x) == x
    assert D(x ** 2 * z) == x ** 2 * y


def test_word_order_applies_first_element_first():
    w = apply_word([E, D], x)
    assert w.trace == (x, y, x)
    assert apply_word([D, E], x).value == R3.zero()


def test_iterated_bracket_is_right_nested():
    assert iterated_bracket([D, E, D]) == lie_bracket(D, lie_bracket(E, D))
    assert iterated_bracket([E]) == E
    with pytest.raises(ValueError):
        iterated_bracket([])


@given(triangular_derivations(), P, P)
@settings(max_examples=60)
def test_derivation_product_rule(A, p, q):
    assert A(p * q) == A(p) * q + p * A(q)


@given(triangular_derivations(), triangular_derivations(), P)
@settings(max_examples=60)
def test_bracket_matches_commutator(A, B, p):
    assert lie_bracket(A, B)(p) == A(B(p)) - B(A(p))


@given(triangular_derivations(), triangular_derivations(), triangular_derivations())
@settings(max_examples=40)
def test_antisymmetry_and_jacobi(A, B, C):
    zero = Derivation(R3)
    assert lie_bracket(A, B) + lie_bracket(B, A) == zero
    assert lie_bracket(A, A) == zero
    jac = lie_bracket(A, lie_bracket(B, C)) + lie_bracket(B, lie_bracket(C, A)) + lie_bracket(C, lie_bracket(A, B))
    assert jac == zero


@given(st.lists(triangular_derivations(), min_size=1, max_size=3), P, P)
@settings(max_examples=60)
def test_generalized_leibniz(Ds, p, q):
    assert leibniz_expansion(Ds, p, q) == apply_word(Ds, p * q).value


def test_generalized_leibniz_frozen_value():
    # D(xy) under D=d/dx twice is 0; under (x d/dy, d/dx) it is 2x
    Dx = Derivation.partial(R3, "x")
    A = Derivation.partial(R3, "y", x)
    assert leibniz_expansion([A, Dx], x, y) == 2 * x
    assert leibniz_expansion([Dx, Dx], x, y) == R3.zero()


def test_linear_combination_and_scale():
    assert linear_combination([2, Fraction(1, 2)], [D, E]) == D.scale(2) + E.scale(Fraction(1, 2))
    with pytest.raises(ValueError):
        linear_combination([1], [D, E])


def test_json_round_trip():
    assert Derivation.from_json(D.to_json(), R3) == D
    with pytest.raises(KeyError):
        Derivation.from_json({"w": "1"}, R3)


def test_ring_checks():
    S = ring_of(["x"])
    with pytest.raises(RingMismatchError):
        apply(D, S.var(0))
    with pytest.raises(RingMismatchError):
        lie_bracket(D, Derivation.partial(S, 0))


@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9),
       st.lists(st.integers(-2, 2), min_size=9, max_size=9))
@settings(max_examples=40)
def test_extension_is_a_bracket_homomorphism(a, b):
    F = LinearOperator.from_rows([a[0:3], a[3:6], a[6:9]])
    G = LinearOperator.from_rows([b[0:3], b[3:6], b[6:9]])
    psiF, psiG = extend_linear_to_derivation(F, R3), extend_linear_to_derivation(G, R3)
    # bracket of the derivations restricted to variables is the operator commutator
    assert lie_bracket(psiF, psiG) == extend_linear_to_derivation(F.bracket(G), R3)
    # agreement on variables: column j of F is the image of x_j
    for j, v in enumerate(R3.gens()):
        img = F(tuple(Fraction(int(i == j)) for i in range(3)))
        assert psiF(v) == sum((g * c for g, c in zip(R3.gens(), img)), R3.zero())
