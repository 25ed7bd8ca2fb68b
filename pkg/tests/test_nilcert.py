import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from derivlab.corealg import RingMismatchError, ring_of
from derivlab.derivcalc import Derivation, apply
from derivlab.nilcert import (
    NEG_INF,
    OperatorSet,
    Verdict,
    check_deg_laws,
    check_generated_set_invariance,
    check_schedule,
    deg_delta,
    is_zero,
    nil_membership,
    replay_certificate,
    set_locally_nilpotent,
    unil_lie_membership,
    word_vanishing_depth,
)
from derivlab.opalg import LinearOperator

from helpers import (
    R3,
    brute_degree,
    polys,
    rand_matrix,
    rand_poly,
    rand_strict_upper,
    rand_triangular,
    triangular_derivations,
)

x, y, z = R3.gens()
D = Derivation(R3, {"y": x, "z": y})
E = Derivation(R3, {"x": y, "y": -z})
INTRO = OperatorSet([D, E], ["D", "E"])
P = polys(R3, max_exp=2, max_terms=3)
slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def brute(delta, v, bound):
    return brute_degree(list(range(len(delta))), lambda i, w: delta.act(i, w), v, is_zero, bound)


def test_single_derivation_degrees():
    delta = OperatorSet([D])
    assert deg_delta(delta, x).degree == 0
    assert deg_delta(delta, y).degree == 1
    cert = deg_delta(delta, z)
    assert cert.certified and cert.degree == 2 and cert.witness == (0, 0)
    assert deg_delta(delta, z ** 2).degree == 4
    assert deg_delta(delta, R3.zero()).degree == NEG_INF
    assert deg_delta(delta, R3.one()).degree == 0


def test_intro_refuted_with_period():
    cert = nil_membership(INTRO, x)
    assert cert.refuted
    assert cert.periodic == {"preperiod": [], "period": [1, 0], "scale": "1"}
    assert replay_certificate(INTRO, x, cert)
    j = cert.to_json()
    assert set(j) >= {"verdict", "degree", "bound", "witness", "periodic"}
    assert j["verdict"] == "refuted" and j["degree"] is None


def test_search_alone_does_not_refute():
    cert = deg_delta(INTRO, x)
    assert cert.verdict is Verdict.INCONCLUSIVE
    assert cert.evidence["cycle"]["period"] == [1, 0]


def test_caller_schedule():
    cert = check_schedule(INTRO, x, [], [1, 0])
    assert cert.refuted
    # (D, E) kills x immediately, so it proves nothing
    assert check_schedule(INTRO, x, [], [0, 1]).verdict is Verdict.INCONCLUSIVE
    cert = nil_membership(INTRO, z, schedule=([0], [1, 0]))
    assert cert.refuted and replay_certificate(INTRO, z, cert)
    with pytest.raises(IndexError):
        check_schedule(INTRO, x, [], [5])
    with pytest.raises(ValueError):
        check_schedule(INTRO, x, [], [])


def test_intro_members_of_separate_sets():
    for F in (D, E):
        assert set_locally_nilpotent(OperatorSet([F])).certified
    assert set_locally_nilpotent(INTRO).refuted


@given(st.lists(triangular_derivations(max_exp=1), min_size=1, max_size=2), P)
@slow
def test_degree_matches_brute_force(Ds, p):
    delta = OperatorSet(Ds)
    cert = deg_delta(delta, p, depth_bound=7)
    oracle = brute(delta, p, 7)
    if oracle is None:
        assert not cert.certified
    else:
        assert cert.certified and cert.degree == oracle
        assert replay_certificate(delta, p, cert)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_operator_degree_matches_brute_force(seed):
    rng = random.Random(seed)
    dim = rng.randint(2, 4)
    gen = rand_strict_upper if rng.random() < 0.6 else rand_matrix
    delta = OperatorSet([gen(rng, dim) for _ in range(rng.randint(1, 3))])
    v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim))
    cert = nil_membership(delta, v, depth_bound=6)
    oracle = brute(delta, v, 6)
    if cert.certified:
        assert oracle == cert.degree
        assert replay_certificate(delta, v, cert)
    elif cert.refuted:
        assert oracle is None
        assert replay_certificate(delta, v, cert)
    if oracle is not None:
        assert cert.certified


@given(st.lists(triangular_derivations(max_exp=1), min_size=2, max_size=3), P)
@slow
def test_degree_monotone_in_the_set(Ds, p):
    small = deg_delta(OperatorSet(Ds[:1]), p, 8)
    big = deg_delta(OperatorSet(Ds), p, 8)
    if small.certified and big.certified:
        assert small.degree <= big.degree


@given(st.lists(triangular_derivations(max_exp=1), min_size=1, max_size=2), P)
@slow
def test_certified_degree_kills_longer_bracket_words(Ds, p):
    delta = OperatorSet(Ds)
    cert = deg_delta(delta, p, 8)
    if not cert.certified or cert.degree == NEG_INF:
        return
    lie = unil_lie_membership(delta, p, depth_bound=int(cert.degree) + 3)
    pattern = lie.evidence["pattern"]
    assert all(pattern[n - 1] for n in range(int(cert.degree) + 1, len(pattern) + 1))


@given(st.lists(triangular_derivations(max_exp=1), min_size=1, max_size=2), st.lists(P, min_size=2, max_size=3))
@slow
def test_degree_laws_on_triangular_sets(Ds, samples):
    rep = check_deg_laws(OperatorSet(Ds), samples, depth_bound=8)
    assert rep["violations"] == []


def test_degree_laws_on_partial():
    delta = OperatorSet([Derivation.partial(R3, "x")])
    samples = [x ** 3, x * y, x + 1, y, x ** 2 - x, R3.zero()]
    rep = check_deg_laws(delta, samples)
    assert rep["violations"] == [] and rep["uncertified"] == [] and rep["checks"] > 20
    # the degree under d/dx is the x-degree
    assert deg_delta(delta, x ** 3 * y + x).degree == 3


def test_enriching_by_brackets_keeps_degrees():
    rng = random.Random(5)
    checked = 0
    for _ in range(5):
        delta = OperatorSet([rand_triangular(rng) for _ in range(2)])
        samples = [rand_poly(rng, R3, 2) for _ in range(4)]
        rep = check_generated_set_invariance(delta, [(0, 1), (1, 0, 1)], samples, depth_bound=12)
        assert rep["violations"] == []
        checked += rep["checked"]
    assert checked >= 10


def test_generated_subalgebra_membership():
    # for a locally nilpotent pair, products and sums of members stay members
    delta = OperatorSet([D])
    for p in (y * z, z ** 3 + x, (y + z) ** 2):
        assert nil_membership(delta, p).certified


def test_word_vanishing_depth_on_operators():
    N = LinearOperator(3, {(0, 1): 1, (1, 2): 1})
    delta = OperatorSet([N])
    miss = word_vanishing_depth(delta, 2)
    assert not miss and miss.witness == (0, 0) and miss.probe == 2
    assert word_vanishing_depth(delta, 3)
    assert word_vanishing_depth(delta, 0).vanishes is False


def test_lie_cutoff_certifies():
    rng = random.Random(0)
    ops = [rand_strict_upper(rng, 4) for _ in range(2)]
    delta = OperatorSet(ops)
    cert = unil_lie_membership(delta, (Fraction(1), 0, 0, 0))
    assert cert.certified and cert.evidence["cutoff"] <= 4
    # non-nilpotent pair: bracket words of every length stay nonzero
    pair = OperatorSet([LinearOperator(2, {(0, 1): 1}), LinearOperator(2, {(1, 0): 1})])
    assert unil_lie_membership(pair, (Fraction(1), Fraction(0)), depth_bound=8).verdict is Verdict.INCONCLUSIVE


def test_input_checks():
    with pytest.raises(ValueError):
        deg_delta(INTRO, x, depth_bound=0)
    with pytest.raises(RingMismatchError):
        deg_delta(INTRO, ring_of(["x"]).var(0))
    with pytest.raises(TypeError):
        OperatorSet([D, LinearOperator.zero(3)])
    with pytest.raises(ValueError):
        deg_delta(OperatorSet([LinearOperator.zero(3)]), (1, 0))


def test_empty_set():
    empty = OperatorSet()
    assert deg_delta(empty, x).degree == 0
    assert set_locally_nilpotent(empty).certified


def test_replay_rejects_tampering():
    cert = deg_delta(OperatorSet([D]), z)
    assert not replay_certificate(OperatorSet([D]), z, replace(cert, degree=1, witness=(0,)))
    bad = replace(nil_membership(INTRO, x), periodic={"preperiod": [], "period": [1, 0], "scale": "2"})
    assert not replay_certificate(INTRO, x, bad)
    assert apply(D, apply(E, x)) == x
