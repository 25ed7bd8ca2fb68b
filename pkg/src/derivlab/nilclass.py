"""Nilpotency conditions for finite-dimensional associative and Lie algebras.

Elements are coordinate tuples over the algebra's basis.  For a subset
``H`` the primed notions reduce to operator sets through left
multiplication ``phi(h) = (x -> h * x)``: ``x`` is in ``Nil'(H)`` exactly
when it is in ``Nil(phi(H))``, and ``deg'_H = deg_{phi(H)}``.

The five conditions reported by :func:`classify` are

* ``N``: some ``n`` with every product ``x_n ... x_1`` zero;
* ``SN``: every infinite sequence has a vanishing right-nested product;
* ``LN``: finitely generated subalgebras are nilpotent;
* ``nil``: ``phi(x)`` is nilpotent for every ``x``;
* ``Lnil``: ``phi(x)`` is locally nilpotent for every ``x``.

In finite dimension they are all equivalent, so the verdict of ``N``,
decided exactly by the lower central series, settles all five.  Sampled
checks of ``nil`` and ``SN`` are attached as evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .linalg import SpanBasis
from .nilcert import (
    DEFAULT_DEPTH_BOUND,
    NEG_INF,
    Certificate,
    OperatorSet,
    Verdict,
    degree_json,
    nil_membership,
)
from .opalg import (
    InvalidAlgebraError,
    StructureAlgebra,
    is_nilpotent_operator,
    left_mult_operator,
    lower_central_series,
)

CONDITIONS = ("N", "SN", "LN", "nil", "Lnil")

# (premise, conclusion) pairs of the implication diagram
IMPLICATIONS = (("N", "SN"), ("N", "nil"), ("SN", "LN"), ("LN", "Lnil"), ("nil", "Lnil"))

__all__ = [
    "CONDITIONS",
    "IMPLICATIONS",
    "ConsistencyError",
    "NilpotencyReport",
    "phi_set",
    "nil_prime_membership",
    "s_value",
    "words_vanish",
    "brute_force_words_vanish",
    "classify",
    "check_A_vs_AL",
]


class ConsistencyError(AssertionError):
    """Raised when computed verdicts contradict a proven implication."""


def _check_vector(A: StructureAlgebra, x) -> tuple:
    if len(x) != A.dim:
        raise ValueError(f"element of length {len(x)} for a {A.dim}-dimensional algebra")
    return tuple(A.field(c) for c in x)


def phi_set(A: StructureAlgebra, H: Sequence) -> OperatorSet:
    """Left multiplications by the elements of ``H``."""
    H = [_check_vector(A, h) for h in H]
    return OperatorSet([left_mult_operator(A, h) for h in H], [f"phi(h{i})" for i in range(len(H))])


def nil_prime_membership(A: StructureAlgebra, H: Sequence, x, depth_bound: int = DEFAULT_DEPTH_BOUND) -> Certificate:
    """Whether every sequence from ``H`` eventually left-multiplies ``x`` to zero."""
    x = _check_vector(A, x)
    if not H:
        return nil_membership(OperatorSet(), x, depth_bound)
    return nil_membership(phi_set(A, H), x, depth_bound)


def s_value(A: StructureAlgebra, H: Sequence, depth_bound: int = DEFAULT_DEPTH_BOUND) -> Certificate:
    """``s(H)``: the largest ``deg'_H(x)`` for ``x`` in ``H``.

    ``-inf`` when ``H`` has no nonzero element.  Refuted (``s = +inf``) when
    some element of ``H`` is refuted; inconclusive if some degree is unknown.
    """
    H = [_check_vector(A, h) for h in H]
    if not any(any(h) for h in H):
        return Certificate(Verdict.CERTIFIED, NEG_INF, depth_bound)
    delta = phi_set(A, H)
    best = NEG_INF
    witness = ()
    unknown = False
    for k, h in enumerate(H):
        cert = nil_membership(delta, h, depth_bound)
        if cert.refuted:
            return Certificate(Verdict.REFUTED, None, depth_bound, cert.witness, cert.periodic,
                               evidence={"element": k})
        if not cert.certified:
            unknown = True
        elif cert.degree > best:
            best, witness = cert.degree, (k,) + tuple(cert.witness)
    if unknown:
        return Certificate(Verdict.INCONCLUSIVE, None, depth_bound,
                           evidence={"lower_bound": degree_json(best)})
    # witness: index of x_0 followed by the surviving word x_1 .. x_s
    return Certificate(Verdict.CERTIFIED, best, depth_bound, witness)


def _vec(v) -> Dict[int, object]:
    return {k: c for k, c in enumerate(v) if c}


def words_vanish(A: StructureAlgebra, H: Sequence, n: int) -> bool:
    """Whether every right-nested product of ``n`` elements of ``H`` is zero.

    Computed on spans: ``S_1 = span(H)`` and ``S_{k+1} = span(h * S_k)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    H = [_check_vector(A, h) for h in H]
    level = []
    span = SpanBasis()
    for h in H:
        if any(h) and span.add(_vec(h)):
            level.append(h)
    for _ in range(n - 1):
        if not level:
            break
        span = SpanBasis()
        nxt = []
        for v in level:
            for h in H:
                p = A.mul(h, v)
                if any(p) and span.add(_vec(p)):
                    nxt.append(p)
        level = nxt
    return not level


def brute_force_words_vanish(A: StructureAlgebra, n: int) -> bool:
    """Every product of ``n`` basis elements is zero (all ``dim^n`` words)."""
    import itertools

    basis = [A.basis(i) for i in range(A.dim)]
    return all(not any(A.right_nested(list(w))) for w in itertools.product(basis, repeat=n))


@dataclass
class NilpotencyReport:
    verdicts: Dict[str, Verdict]
    evidence: Dict[str, dict] = field(default_factory=dict)
    s_value: Optional[float] = None
    series: Optional[dict] = None

    def __post_init__(self):
        self.check_implications()

    def check_implications(self) -> None:
        for a, b in IMPLICATIONS:
            va, vb = self.verdicts.get(a), self.verdicts.get(b)
            if va is Verdict.CERTIFIED and vb is Verdict.REFUTED:
                raise ConsistencyError(f"{a} certified but {b} refuted")

    def all_certified(self) -> bool:
        return all(self.verdicts[c] is Verdict.CERTIFIED for c in CONDITIONS)

    def all_refuted(self) -> bool:
        return all(self.verdicts[c] is Verdict.REFUTED for c in CONDITIONS)

    def to_json(self):
        return {
            "verdicts": {c: self.verdicts[c].value for c in CONDITIONS},
            "evidence": self.evidence,
            "s": degree_json(self.s_value) if self.s_value is not None else None,
            "series": self.series,
        }


def _random_element(A: StructureAlgebra, rng: random.Random) -> tuple:
    return tuple(A.field(rng.randint(-3, 3)) for _ in range(A.dim))


def classify(A: StructureAlgebra, generators: Optional[Sequence] = None, sample_count: int = 20,
             depth_bound: int = DEFAULT_DEPTH_BOUND, rng_seed: int = 0) -> NilpotencyReport:
    """Verdicts for the five conditions on a finite-dimensional algebra.

    ``N`` comes from the lower central series and decides the rest.  Evidence:
    nilpotency of ``phi`` on the basis and on ``sample_count`` random
    elements, and ``sample_count`` random sequences of generators (default:
    the basis) replayed to ``depth_bound``.
    """
    rng = random.Random(rng_seed)
    lcs = lower_central_series(A)
    decided = Verdict.CERTIFIED if lcs.nilpotent else Verdict.REFUTED
    gens = [A.basis(i) for i in range(A.dim)] if generators is None else [_check_vector(A, g) for g in generators]

    # nil: phi(x) nilpotent on basis and samples
    samples = [A.basis(i) for i in range(A.dim)] + [_random_element(A, rng) for _ in range(sample_count)]
    nil_fail = None
    for k, x in enumerate(samples):
        ok, _ = is_nilpotent_operator(left_mult_operator(A, x))
        if not ok:
            nil_fail = k
            break
    nil_evidence = {"checked": len(samples) if nil_fail is None else nil_fail + 1,
                    "non_nilpotent_sample": nil_fail}

    # SN: random schedules of generators
    died = []
    survived = 0
    for _ in range(sample_count):
        if not gens:
            break
        acc = gens[rng.randrange(len(gens))]
        length = 0
        while any(acc) and length < depth_bound:
            acc = A.mul(gens[rng.randrange(len(gens))], acc)
            length += 1
        if any(acc):
            survived += 1
        else:
            died.append(length)
    sn_evidence = {"schedules": sample_count if gens else 0, "survived_to_bound": survived,
                   "longest_before_zero": max(died) if died else None}

    if lcs.nilpotent:
        if nil_fail is not None or (survived and depth_bound >= lcs.index):
            raise ConsistencyError("nilpotent series but sampled evidence disagrees")
        s = lcs.index - 2 if A.dim else NEG_INF
    else:
        s = None
    verdicts = {c: decided for c in CONDITIONS}
    evidence = {
        "N": {"series": lcs.to_json()},
        "nil": nil_evidence,
        "SN": sn_evidence,
        "method": "finite dimension: all five conditions follow from N",
    }
    return NilpotencyReport(verdicts, evidence, s, lcs.to_json())


def check_A_vs_AL(A: StructureAlgebra, depth_bound: int = DEFAULT_DEPTH_BOUND, rng_seed: int = 0) -> dict:
    """Classify an associative algebra and its commutator algebra side by side.

    Certified ``N``, ``nil``, ``LN`` or ``Lnil`` for ``A`` must carry over to
    ``A_L``; a violation raises :class:`ConsistencyError`.
    """
    if A.kind != "associative":
        raise InvalidAlgebraError("A must be associative")
    AL = A.lie_algebra()
    ra = classify(A, depth_bound=depth_bound, rng_seed=rng_seed)
    rl = classify(AL, depth_bound=depth_bound, rng_seed=rng_seed)
    for c in ("N", "nil", "LN", "Lnil"):
        if ra.verdicts[c] is Verdict.CERTIFIED and rl.verdicts[c] is Verdict.REFUTED:
            raise ConsistencyError(f"{c} holds for A but fails for A_L")
    return {"A": ra.to_json(), "A_L": rl.to_json()}
