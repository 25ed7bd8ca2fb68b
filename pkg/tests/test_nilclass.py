import random
from fractions import Fraction

import pytest

from derivlab.nilcert import NEG_INF, Verdict
from derivlab.nilclass import (
    CONDITIONS,
    ConsistencyError,
    NilpotencyReport,
    brute_force_words_vanish,
    check_A_vs_AL,
    classify,
    nil_prime_membership,
    s_value,
    words_vanish,
)
from derivlab.opalg import (
    DimensionBoundExceeded,
    StructureAlgebra,
    algebra_from_operators,
    lower_central_series,
    strictly_upper_triangular,
)

from helpers import rand_matrix, rand_strict_upper

NONABELIAN = StructureAlgebra(2, "lie", {(0, 1): {1: 1}, (1, 0): {1: -1}})


def random_algebras(count, seed=0, max_dim=4):
    """Seeded algebras of dimension 2..4 generated by two or three small matrices; H is the generators."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        size = rng.randint(2, 4)
        kind = rng.choice(["associative", "lie"])
        maker = rand_strict_upper if rng.random() < 0.7 else rand_matrix
        ops = [maker(rng, size) for _ in range(rng.randint(2, 3))]
        if any(op.is_zero() for op in ops):
            continue
        try:
            A, basis = algebra_from_operators(ops, kind, dim_bound=max_dim)
        except (DimensionBoundExceeded, ValueError):
            continue
        if A.dim < 2:
            continue
        # generators come first in the closure basis; keep the independent ones
        gens = [A.basis(i) for i, b in enumerate(basis) if b in ops]
        out.append((A, gens))
    return out


@pytest.mark.parametrize("d", [3, 4, 5])
def test_strictly_upper_triangular(d):
    A, _ = strictly_upper_triangular(d)
    rep = classify(A)
    assert rep.all_certified()
    assert rep.s_value == d - 2


def test_two_dim_nonabelian_refutes_all():
    rep = classify(NONABELIAN)
    assert rep.all_refuted()
    assert rep.evidence["nil"]["non_nilpotent_sample"] is not None


def test_s_value_of_generators():
    A, pairs = strictly_upper_triangular(4)
    gens = [A.basis(pairs.index((i, i + 1))) for i in range(1, 4)]
    cert = s_value(A, gens)
    assert cert.certified and cert.degree == 2
    assert s_value(A, [A.zero()]).degree == NEG_INF
    assert s_value(NONABELIAN, [NONABELIAN.basis(0), NONABELIAN.basis(1)]).refuted


def test_s_value_ignores_redundant_generators():
    for A, gens in random_algebras(20, seed=4):
        base = s_value(A, gens)
        extra = tuple(a + b for a, b in zip(gens[0], gens[-1]))
        more = s_value(A, gens + [extra])
        assert base.verdict == more.verdict
        if base.certified:
            assert base.degree == more.degree


def test_generator_level_vanishing_matches_brute_force():
    algebras = random_algebras(50, seed=1)
    assert len(algebras) == 50
    for A, gens in algebras:
        for n in range(1, A.dim + 2):
            assert words_vanish(A, gens, n) == brute_force_words_vanish(A, n)


def test_s_value_matches_series_index():
    for A, gens in random_algebras(30, seed=2):
        lcs = lower_central_series(A)
        cert = s_value(A, gens)
        if lcs.nilpotent:
            assert cert.certified and cert.degree == lcs.index - 2
        else:
            assert not cert.certified


def test_nil_prime_membership():
    A, pairs = strictly_upper_triangular(3)
    e12 = A.basis(pairs.index((1, 2)))
    e23 = A.basis(pairs.index((2, 3)))
    assert nil_prime_membership(A, [e12], e23).degree == 1
    assert nil_prime_membership(A, [], e23).degree == 0
    assert nil_prime_membership(NONABELIAN, [NONABELIAN.basis(0)], NONABELIAN.basis(1)).refuted


def test_random_algebras_classify_consistently():
    for A, _ in random_algebras(30, seed=3):
        rep = classify(A, sample_count=5)
        decided = rep.verdicts["N"]
        assert all(rep.verdicts[c] is decided for c in CONDITIONS)


def test_implication_lattice_guard():
    verdicts = {c: Verdict.CERTIFIED for c in CONDITIONS}
    verdicts["Lnil"] = Verdict.REFUTED
    with pytest.raises(ConsistencyError):
        NilpotencyReport(verdicts)
    verdicts = {c: Verdict.REFUTED for c in CONDITIONS}
    verdicts["Lnil"] = Verdict.CERTIFIED
    NilpotencyReport(verdicts)


def test_associative_versus_commutator_algebra():
    A, _ = strictly_upper_triangular(4)
    out = check_A_vs_AL(A)
    assert out["A"]["verdicts"]["N"] == "certified"
    assert out["A_L"]["verdicts"]["N"] == "certified"
    full = StructureAlgebra(1, "associative", {(0, 0): {0: 1}})
    out = check_A_vs_AL(full)
    assert out["A"]["verdicts"]["N"] == "refuted"
    # the commutator algebra of a commutative algebra is abelian
    assert out["A_L"]["verdicts"]["N"] == "certified"


def test_report_json():
    rep = classify(strictly_upper_triangular(3)[0])
    j = rep.to_json()
    assert j["s"] == 1 and j["series"]["dims"] == [3, 1, 0]
    assert set(j["verdicts"]) == set(CONDITIONS)


def test_element_length_checked():
    A, _ = strictly_upper_triangular(3)
    with pytest.raises(ValueError):
        s_value(A, [(Fraction(1),)])
