"""Lie algebras of derivations of a polynomial ring.

A polynomial ring is derivation-finite: a derivation vanishing on every
variable is zero, so the variables form a separating set.  Two tools live
here.  :func:`ad_nilpotence_index` measures how fast ``ad(D)`` kills a
derivation when ``D`` is locally nilpotent, next to the envelope
``m + n - 1`` read off from vanishing orders.  :func:`fg_lie_nilpotency`
saturates a finite generating set under brackets and decides nilpotency
of the resulting finite-dimensional Lie algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .corealg import Polynomial
from .derivcalc import Derivation, apply, lie_bracket
from .linalg import closure
from .nilcert import (
    DEFAULT_DEPTH_BOUND,
    DEFAULT_DIM_BOUND,
    Certificate,
    OperatorSet,
    Verdict,
    set_locally_nilpotent,
)
from .nilclass import ConsistencyError
from .opalg import lower_central_series, structure_constants

__all__ = [
    "DerivationLieAlgebra",
    "FgLieReport",
    "vanishing_order",
    "ad_nilpotence_index",
    "fg_lie_nilpotency",
]


class DerivationLieAlgebra:
    """Lie algebra generated by finitely many derivations of one ring.

    ``separating`` defaults to the ring variables.  A custom separating set is
    taken on trust; it is only used to compute envelopes.
    """

    def __init__(self, generators: Sequence[Derivation], separating: Optional[Sequence[Polynomial]] = None):
        self.generators = tuple(generators)
        if not self.generators:
            raise ValueError("at least one generator is required")
        self.ring = self.generators[0].ring
        if any(D.ring != self.ring for D in self.generators):
            raise ValueError("generators over different rings")
        self.separating = tuple(separating) if separating is not None else self.ring.gens()
        self._basis: Optional[List[Derivation]] = None

    def closure_basis(self, dim_bound: int = DEFAULT_DIM_BOUND, degree_cap: Optional[int] = None):
        """Basis of the bracket closure, or ``None`` if a bound is crossed."""
        basis, _, exceeded = closure(list(self.generators), lie_bracket, lambda D: D.coordinates(), dim_bound)
        if exceeded:
            return None
        if degree_cap is not None and any(p.degree() > degree_cap for D in basis for p in D.images.values()):
            return None
        self._basis = basis
        return basis


def vanishing_order(D: Derivation, xs: Sequence[Polynomial], bound: int) -> Optional[int]:
    """Least ``n > 0`` with ``D^n(x) = 0`` for every ``x`` in ``xs``, or ``None`` past ``bound``."""
    current = [x for x in xs if x]
    for n in range(1, bound + 1):
        current = [y for y in (apply(D, x) for x in current) if y]
        if not current:
            return n
    return None


def ad_nilpotence_index(D: Derivation, E: Derivation, bound: int = DEFAULT_DEPTH_BOUND,
                        separating: Optional[Sequence[Polynomial]] = None) -> Certificate:
    """Least ``N`` with ``ad(D)^N(E) = 0``, reported as the certificate degree.

    The evidence carries the envelope ``m + n - 1``: ``n`` is the vanishing
    order of ``D`` on the separating set ``X`` and ``m`` its vanishing order
    on ``Y = {E(D^i(x)) : x in X, i < n}``.
    """
    X = list(separating) if separating is not None else list(D.ring.gens())
    n = vanishing_order(D, X, bound)
    evidence: Dict = {"n": n}
    if n is not None:
        Y = []
        for x in X:
            v = x
            for _ in range(n):
                Y.append(apply(E, v))
                v = apply(D, v)
        m = vanishing_order(D, Y, bound)
        evidence["m"] = m
        if m is not None:
            evidence["envelope"] = m + n - 1
    F = E
    N = 0
    while F:
        if N >= bound:
            return Certificate(Verdict.INCONCLUSIVE, None, bound, evidence=evidence)
        F = lie_bracket(D, F)
        N += 1
    return Certificate(Verdict.CERTIFIED, N, bound, evidence=evidence)


@dataclass
class FgLieReport:
    """Nilpotency of a finitely generated Lie algebra of derivations."""

    verdict: Verdict
    dim: Optional[int]
    series: Optional[dict] = None
    basis: List[str] = field(default_factory=list)
    set_lnd: Optional[dict] = None
    basis_lnd: Optional[bool] = None
    bounds: Dict = field(default_factory=dict)

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "dim": self.dim,
            "series": self.series,
            "basis": self.basis,
            "set_lnd": self.set_lnd,
            "basis_lnd": self.basis_lnd,
            "bounds": self.bounds,
        }


def fg_lie_nilpotency(L: DerivationLieAlgebra, dim_bound: int = DEFAULT_DIM_BOUND,
                      depth_bound: int = DEFAULT_DEPTH_BOUND, degree_cap: Optional[int] = None) -> FgLieReport:
    """Decide whether ``L`` is a nilpotent Lie algebra when its closure is small.

    Cross-checks: if the generators form a locally nilpotent set, or every
    closure basis element is individually locally nilpotent, the series must
    reach zero.  Either failure raises :class:`ConsistencyError`.
    """
    bounds = {"dim_bound": dim_bound, "depth_bound": depth_bound, "degree_cap": degree_cap}
    set_cert = set_locally_nilpotent(OperatorSet(L.generators), depth_bound=depth_bound)
    basis = L.closure_basis(dim_bound, degree_cap)
    if basis is None:
        return FgLieReport(Verdict.INCONCLUSIVE, None, set_lnd=set_cert.to_json(), bounds=bounds)
    A = structure_constants(basis, lie_bracket, lambda D: D.coordinates(), "lie", L.ring.field)
    lcs = lower_central_series(A)
    verdict = Verdict.CERTIFIED if lcs.nilpotent else Verdict.REFUTED
    basis_lnd = all(set_locally_nilpotent(OperatorSet([b]), depth_bound=depth_bound).certified for b in basis)
    if not lcs.nilpotent and (set_cert.certified or basis_lnd):
        raise ConsistencyError("locally nilpotent derivations generate a non-nilpotent closure")
    return FgLieReport(verdict, len(basis), lcs.to_json(), [str(b) for b in basis],
                       set_cert.to_json(), basis_lnd, bounds)
