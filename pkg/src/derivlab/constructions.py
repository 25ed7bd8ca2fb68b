"""Factories for the worked examples, with their identities as runnable claims.

Every example is infinite in its natural form; each factory takes an
explicit truncation parameter and restates the claims at that scale.

========== ======================================================================
id         truncation
========== ======================================================================
intro-DE   none: ``D = x d/dy + y d/dz`` and ``E = y d/dx - z d/dy`` on ``k[x,y,z]``
ex-298     ``n``: the set ``D_0..D_n``; ``horizon``: ring ``x_0..x_{horizon+1}``
ex-928349  ``n`` variables ``X_1..X_n``; generators ``f d/dX_j`` with ``f`` a
           scaled monomial in ``X_1..X_{j-1}`` of degree at most ``fdeg``
ex-ckj029  ``n``: basis ``e_0..e_n`` and maps ``F_1..F_{n-1}``
ex-PpPP    ``n``: maps ``T_{i,j}`` with ``j <= i <= n`` on ``e_0..e_{n+1}``
ex-Zf24    ``n``: variables ``x_1..x_n``; ``length``: longest stored monomial
ex-2ndPart ``n`` as for ex-Zf24, transported to derivations of a polynomial ring
========== ======================================================================
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .corealg import QQ, Polynomial, ring_of
from .derivcalc import (
    Derivation,
    apply,
    apply_word,
    extend_linear_to_derivation,
    iterated_bracket,
    lie_bracket,
)
from .derfinite import DerivationLieAlgebra, fg_lie_nilpotency
from .linalg import SpanBasis
from .nilcert import (
    DEFAULT_DEPTH_BOUND,
    OperatorSet,
    check_generated_set_invariance,
    deg_delta,
    degree_json,
    nil_membership,
    set_locally_nilpotent,
    unil_lie_membership,
    word_vanishing_depth,
)
from .nilclass import classify
from .opalg import LinearOperator, algebra_from_operators, unit_vector

__all__ = [
    "EXAMPLE_IDS",
    "UnknownExampleError",
    "TruncationOverflow",
    "Claim",
    "ExampleInstance",
    "FreeAlgebraModule",
    "free_module_action",
    "witt_dimension",
    "build",
    "run_claims",
]


class UnknownExampleError(KeyError):
    pass


class TruncationOverflow(ValueError):
    """A product would leave the stored range of monomial lengths."""


ClaimResult = Tuple[bool, dict]


@dataclass
class Claim:
    name: str
    check: Callable[[int], ClaimResult]


@dataclass
class ExampleInstance:
    id: str
    params: Dict
    objects: Dict
    claims: List[Claim] = field(default_factory=list)

    def claim(self, name: str):
        def register(fn):
            self.claims.append(Claim(name, fn))
            return fn
        return register


def _rand_fraction(rng: random.Random, lo: int = -9, hi: int = 9) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(lo, hi)
    return Fraction(num, rng.randint(1, 5))


def unit_vector_q(dim: int, i: Optional[int]) -> tuple:
    """Rational basis vector ``e_i``, or the zero vector for ``i = None``."""
    return unit_vector(QQ, dim, i) if i is not None else (Fraction(0),) * dim


def op_matrix(op: LinearOperator) -> List[List[str]]:
    return [[str(c) for c in row] for row in op.to_rows()]


def right_nested_ops(ops: Sequence[LinearOperator]) -> LinearOperator:
    """``[ops[0], [ops[1], ... [ops[-2], ops[-1]]]]``."""
    acc = ops[-1]
    for a in reversed(ops[:-1]):
        acc = a.bracket(acc)
    return acc


def compose_all(ops: Sequence[LinearOperator]) -> LinearOperator:
    """``ops[0] o ops[1] o ... o ops[-1]`` (the last one acts first)."""
    acc = ops[-1]
    for a in reversed(ops[:-1]):
        acc = a.compose(acc)
    return acc


def linear_part_matrix(D: Derivation, variables: Sequence[int]) -> LinearOperator:
    """Matrix of ``D`` on the span of the given variables (images must stay linear there)."""
    ring = D.ring
    pos = {v: k for k, v in enumerate(variables)}
    entries = {}
    for col, v in enumerate(variables):
        img = D.image(v)
        for m, c in img.terms.items():
            if len(m) != 1 or m[0][1] != 1 or m[0][0] not in pos:
                raise ValueError("image leaves the span of the chosen variables")
            entries[(pos[m[0][0]], col)] = c
    return LinearOperator(len(variables), entries, ring.field)


# -- intro -------------------------------------------------------------------

def _build_intro(char: int = 0, seed: int = 0, samples: int = 20) -> ExampleInstance:
    R = ring_of(["x", "y", "z"], char)
    x, y, z = R.gens()
    D = Derivation(R, {"y": x, "z": y})
    E = Derivation(R, {"x": y, "y": -z})
    delta = OperatorSet([D, E], ["D", "E"])
    inst = ExampleInstance("intro-DE", {"char": char, "seed": seed, "samples": samples},
                           {"ring": R, "D": D, "E": E, "delta": delta})

    @inst.claim("D(E(x)) = x")
    def _(depth):
        v = apply(D, apply(E, x))
        return v == x, {"value": str(v)}

    @inst.claim("[D,E](x) = x")
    def _(depth):
        v = lie_bracket(D, E)(x)
        return v == x, {"value": str(v)}

    @inst.claim("(aD+bE)^3 = 0 on span(x,y,z)")
    def _(depth):
        rng = random.Random(seed)
        failures = []
        for _ in range(samples):
            a, b = R.field(_rand_fraction(rng)), R.field(_rand_fraction(rng))
            M = linear_part_matrix(D.scale(a) + E.scale(b), [0, 1, 2])
            if not M.power(3).is_zero():
                failures.append([str(a), str(b)])
        return not failures, {"samples": samples, "failures": failures}

    @inst.claim("D and E are each locally nilpotent")
    def _(depth):
        certs = [set_locally_nilpotent(OperatorSet([F]), depth_bound=depth) for F in (D, E)]
        return all(c.certified for c in certs), {"degrees": [degree_json(c.degree) for c in certs]}

    @inst.claim("x is refuted by the schedule (E,D) repeating")
    def _(depth):
        cert = nil_membership(delta, x, depth)
        per = cert.periodic or {}
        trace = apply_word([E, D], x).trace
        ok = (cert.refuted and per.get("period") == [1, 0] and per.get("preperiod") == []
              and trace[-1] == x and trace[1] == y)
        return ok, {"certificate": cert.to_json(), "trace": [str(p) for p in trace]}

    return inst


# -- ex-298 --------------------------------------------------------------------

def _build_298(n: int = 4, horizon: Optional[int] = None, char: int = 0) -> ExampleInstance:
    # D_0..D_horizon exist on x_0..x_{horizon+1}; the set under study is D_0..D_n
    horizon = n + 1 if horizon is None else horizon
    if n < 2 or horizon < n:
        raise ValueError("ex-298 needs 2 <= n <= horizon")
    R = ring_of([f"x{i}" for i in range(horizon + 2)], char)
    xs = R.gens()
    Ds = [Derivation(R, {i: xs[i + 1] for i in range(k + 1)}) for k in range(horizon + 1)]
    delta = OperatorSet(Ds[: n + 1], [f"D{k}" for k in range(n + 1)])
    inst = ExampleInstance("ex-298", {"n": n, "horizon": horizon, "char": char},
                           {"ring": R, "D": Ds, "delta": delta})

    @inst.claim("D_k(x_i) = x_{i+1} exactly when i <= k")
    def _(depth):
        bad = [[k, i] for k, D in enumerate(Ds) for i in range(R.nvars)
               if D.image(i) != (xs[i + 1] if i <= k else R.zero())]
        return not bad, {"mismatches": bad}

    @inst.claim("all words of length n+2 vanish, some word of length n+1 survives")
    def _(depth):
        short = word_vanishing_depth(delta, n + 1)
        long = word_vanishing_depth(delta, n + 2)
        return (not short) and bool(long), {
            "witness": list(short.witness or ()), "probe": short.probe, "vanishes_at_n_plus_2": long.vanishes}

    @inst.claim("(D_N o ... o D_k)(x_k) = x_{N+1}")
    def _(depth):
        bad = []
        for k in range(horizon + 1):
            for N in range(k, horizon + 1):
                if apply_word(Ds[k: N + 1], xs[k]).value != xs[N + 1]:
                    bad.append([k, N])
        return not bad, {"checked_up_to": horizon, "mismatches": bad}

    @inst.claim("{D_0..D_n} is a locally nilpotent set")
    def _(depth):
        cert = set_locally_nilpotent(delta, depth_bound=depth)
        return cert.certified and cert.degree == n + 1, {"certificate": cert.to_json()}

    @inst.claim("Lie algebra generated by D_0..D_n is nilpotent")
    def _(depth):
        rep = fg_lie_nilpotency(DerivationLieAlgebra(delta.actors), depth_bound=depth)
        return rep.verdict.value == "certified", {"dim": rep.dim, "series": rep.series}

    return inst


# -- ex-928349 -----------------------------------------------------------------

def _build_928349(n: int = 4, seed: int = 0, fdeg: int = 2, max_m: int = 5, pairs: int = 100,
                  sequences: int = 100, sequence_depth: int = 20, char: int = 0) -> ExampleInstance:
    if n < 2:
        raise ValueError("ex-928349 needs n >= 2")
    if char != 0:
        raise ValueError("ex-928349 is stated in characteristic zero")
    R = ring_of([f"X{i}" for i in range(1, n + 1)], char)
    X = R.gens()
    E = Derivation.partial(R, 0)
    Dm = {m: Derivation.partial(R, 1, X[0] ** m) for m in range(1, max_m + 1)}

    def sample_generator(rng: random.Random) -> Tuple[int, Polynomial, Derivation]:
        j = rng.randint(1, n)
        f = R.const(_rand_fraction(rng, -5, 5))
        budget = fdeg
        for v in range(j - 1):
            e = rng.randint(0, budget)
            budget -= e
            f = f * X[v] ** e
        return j, f, Derivation.partial(R, j - 1, f)

    inst = ExampleInstance("ex-928349", {"n": n, "seed": seed, "fdeg": fdeg, "max_m": max_m, "pairs": pairs,
                                         "sequences": sequences, "sequence_depth": sequence_depth},
                           {"ring": R, "E": E, "D_m": Dm, "sample": sample_generator})

    @inst.claim("(E^m o D_m)(X_2) = m!")
    def _(depth):
        vals = {m: apply_word([Dm[m]] + [E] * m, X[1]).value for m in Dm}
        return all(v == R.const(math.factorial(m)) for m, v in vals.items()), {
            "values": {str(m): str(v) for m, v in vals.items()}}

    @inst.claim("[E,...,E,D_m](X_2) = m!")
    def _(depth):
        vals = {m: iterated_bracket([E] * m + [Dm[m]])(X[1]) for m in Dm}
        return all(v == R.const(math.factorial(m)) for m, v in vals.items()), {
            "values": {str(m): str(v) for m, v in vals.items()}}

    @inst.claim("[D_f^j, D_g^k] = D^k_{D_f^j(g)} for j <= k")
    def _(depth):
        rng = random.Random(seed)
        bad = []
        for t in range(pairs):
            (j, f, A), (k, g, B) = sample_generator(rng), sample_generator(rng)
            if j > k:
                (j, f, A), (k, g, B) = (k, g, B), (j, f, A)
            if lie_bracket(A, B) != Derivation.partial(R, k - 1, apply(A, g)):
                bad.append(t)
        return not bad, {"pairs": pairs, "failures": bad}

    @inst.claim("random generator sequences reach a zero bracket")
    def _(depth):
        rng = random.Random(seed + 1)
        lengths = []
        for _ in range(sequences):
            acc = sample_generator(rng)[2]
            steps = 0
            while acc and steps < sequence_depth:
                acc = lie_bracket(sample_generator(rng)[2], acc)
                steps += 1
            lengths.append(steps if not acc else None)
        return None not in lengths, {"sequences": sequences, "depth": sequence_depth,
                                     "longest": max((s for s in lengths if s is not None), default=None),
                                     "survivors": lengths.count(None)}

    @inst.claim("ad(E)^m(D_m) != 0")
    def _(depth):
        nonzero = {m: bool(iterated_bracket([E] * m + [Dm[m]])) for m in Dm}
        return all(nonzero.values()), {"nonzero": {str(m): v for m, v in nonzero.items()}}

    @inst.claim("deg of X_2 under {E, D_1..D_M} is M+1")
    def _(depth):
        degs = {}
        for M in range(1, max_m + 1):
            cert = deg_delta(OperatorSet([E] + [Dm[m] for m in range(1, M + 1)]), X[1], depth)
            degs[M] = degree_json(cert.degree) if cert.certified else None
        return all(degs[M] == M + 1 for M in degs), {"degrees": {str(M): d for M, d in degs.items()}}

    @inst.claim("sampled generator sets are locally nilpotent")
    def _(depth):
        rng = random.Random(seed + 2)
        degrees = []
        for _ in range(5):
            gens = [sample_generator(rng)[2] for _ in range(3)]
            cert = set_locally_nilpotent(OperatorSet(gens), depth_bound=depth)
            degrees.append(degree_json(cert.degree) if cert.certified else None)
        return None not in degrees, {"degrees": degrees}

    @inst.claim("degrees unchanged by adding a bracket")
    def _(depth):
        rng = random.Random(seed + 3)
        gens = [sample_generator(rng)[2] for _ in range(3)]
        samples = [X[i] for i in range(n)] + [X[0] * X[-1], X[1] ** 2]
        rep = check_generated_set_invariance(OperatorSet(gens), [(0, 1)], samples, depth)
        return not rep["violations"] and rep["skipped"] == 0, rep

    return inst


# -- ex-ckj029 -----------------------------------------------------------------

def _build_ckj029(n: int = 8) -> ExampleInstance:
    if n < 2:
        raise ValueError("ex-ckj029 needs n >= 2")
    dim = n + 1
    F = {}
    for k in range(1, n):
        images = [unit_vector_q(dim, None) if 1 <= i <= k else unit_vector_q(dim, k) for i in range(dim)]
        F[k] = LinearOperator.from_images(images)
    e0, e1 = unit_vector_q(dim, 0), unit_vector_q(dim, 1)
    delta = OperatorSet([F[k] for k in range(1, n)], [f"F{k}" for k in range(1, n)])
    inst = ExampleInstance("ex-ckj029", {"n": n}, {"F": F, "delta": delta})

    @inst.claim("F_b o F_a = 0 for a <= b")
    def _(depth):
        bad = [[a, b] for b in F for a in F if a <= b and not F[b].compose(F[a]).is_zero()]
        return not bad, {"failures": bad}

    @inst.claim("[F_m,...,F_1] = (-1)^(m+1) F_1 o ... o F_m")
    def _(depth):
        bad = []
        for m in range(1, n):
            lhs = right_nested_ops([F[k] for k in range(m, 0, -1)])
            rhs = compose_all([F[k] for k in range(1, m + 1)]).scale((-1) ** (m + 1))
            if lhs != rhs:
                bad.append(m)
        return not bad, {"checked_up_to": n - 1, "failures": bad}

    @inst.claim("[F_m,...,F_1](e_0) = +-e_1")
    def _(depth):
        vals = {}
        for m in range(1, n):
            v = right_nested_ops([F[k] for k in range(m, 0, -1)])(e0)
            vals[m] = 1 if v == e1 else -1 if v == tuple(-c for c in e1) else 0
        return all(vals.values()), {"signs": {str(m): s for m, s in vals.items()}}

    @inst.claim("the truncated set is locally nilpotent")
    def _(depth):
        cert = set_locally_nilpotent(delta, depth_bound=depth)
        lie = unil_lie_membership(delta, e0, depth)
        return cert.certified, {"certificate": cert.to_json(), "lie_at_e0": lie.to_json()}

    return inst


# -- ex-PpPP -------------------------------------------------------------------

def _build_PpPP(n: int = 6) -> ExampleInstance:
    if n < 2:
        raise ValueError("ex-PpPP needs n >= 2")
    dim = n + 2
    T = {}
    for i in range(n + 1):
        for j in range(i + 1):
            T[(i, j)] = LinearOperator.from_images(
                [unit_vector_q(dim, None) if k <= i else unit_vector_q(dim, j) for k in range(dim)])
    S = [T[(i, i)] for i in range(n + 1)]
    keys = sorted(T)
    delta = OperatorSet([T[k] for k in keys], [f"T{i},{j}" for i, j in keys])
    inst = ExampleInstance("ex-PpPP", {"n": n}, {"T": T, "S": S, "delta": delta})

    @inst.claim("relations (alpha) and (beta)")
    def _(depth):
        bad = []
        for (i1, j1), (i2, j2) in itertools.product(keys, repeat=2):
            prod = T[(i2, j2)].compose(T[(i1, j1)])
            want = prod.is_zero() if j1 <= i2 else prod == T[(i1, j2)]
            if not want:
                bad.append([i1, j1, i2, j2])
        return not bad, {"pairs": len(keys) ** 2, "failures": bad}

    @inst.claim("[S_m,...,S_0] = (-1)^m S_0...S_m and S_0...S_m(e_{m+1}) = e_0")
    def _(depth):
        bad = []
        for m in range(n + 1):
            lhs = right_nested_ops(S[m::-1]) if m else S[0]
            prod = compose_all(S[: m + 1])
            if lhs != prod.scale((-1) ** m) or prod(unit_vector_q(dim, m + 1)) != unit_vector_q(dim, 0):
                bad.append(m)
        return not bad, {"checked_up_to": n, "failures": bad}

    @inst.claim("deg(e_k) <= k")
    def _(depth):
        degs = []
        for k in range(dim):
            cert = deg_delta(delta, unit_vector_q(dim, k), depth)
            degs.append(degree_json(cert.degree) if cert.certified else None)
        ok = all(d is not None and (d == "neg-inf" or d <= k) for d in degs)
        return ok, {"degrees": degs}

    @inst.claim("bracket words vanish identically from some length")
    def _(depth):
        cutoffs = []
        for k in range(dim):
            cert = unil_lie_membership(delta, unit_vector_q(dim, k), depth)
            cutoffs.append(cert.evidence.get("cutoff") if cert.certified else None)
        return None not in cutoffs, {"cutoffs": cutoffs}

    @inst.claim("A is nilpotent while the S-chain of A_L survives to the boundary")
    def _(depth):
        A, basis = algebra_from_operators([T[k] for k in keys], "associative")
        rep = classify(A, depth_bound=depth)
        AL = A.lie_algebra()
        span = SpanBasis()
        for b in basis:
            span.add(b.coordinates())
        coords = []
        for s in S:
            c = span.coordinates(s.coordinates())
            coords.append(tuple(A.field(c.get(i, 0)) for i in range(A.dim)))
        chain = []
        acc = coords[0]
        chain.append(any(acc))
        for m in range(1, n + 1):
            acc = AL.mul(coords[m], acc)
            chain.append(any(acc))
        rep_l = classify(AL, depth_bound=depth)
        ok = rep.verdicts["N"].value == "certified" and all(chain)
        return ok, {"dim": A.dim, "A": rep.to_json()["verdicts"], "A_L": rep_l.to_json()["verdicts"],
                    "chain_nonzero": chain}

    return inst


# -- ex-Zf24 -------------------------------------------------------------------

Word = Tuple[int, ...]


def is_admissible(w: Word) -> bool:
    """A nonempty monomial ``x_{i_1}...x_{i_n}`` is admissible when ``n > i_n``."""
    return len(w) > w[-1]


class FreeAlgebraModule:
    """Quotient of the free algebra on ``x_1..x_k`` by the admissible monomials.

    The basis is the nonadmissible monomials of length at most
    ``max_length``; monomials are tuples of variable indices, leftmost first.
    Left multiplication prepends.  Products that would be nonadmissible but
    longer than ``max_length`` raise :class:`TruncationOverflow`.
    """

    def __init__(self, max_index: int, max_length: int):
        if max_index < 1 or max_length < 1:
            raise ValueError("bounds must be positive")
        self.max_index = max_index
        self.max_length = max_length
        basis = []
        for length in range(1, max_length + 1):
            for w in itertools.product(range(1, max_index + 1), repeat=length):
                if not is_admissible(w):
                    basis.append(w)
        self.basis: Tuple[Word, ...] = tuple(basis)
        self.position = {w: i for i, w in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, terms: Dict[Word, object]) -> tuple:
        """Class of ``sum c_w w``; admissible monomials map to zero."""
        v = [Fraction(0)] * self.dim
        for w, c in terms.items():
            if is_admissible(w):
                continue
            if len(w) > self.max_length:
                raise TruncationOverflow(f"monomial of length {len(w)} exceeds {self.max_length}")
            v[self.position[w]] += Fraction(c)
        return tuple(v)

    def operator(self, monomial: Word) -> LinearOperator:
        """Matrix of ``v -> monomial * v``."""
        images = [free_module_action(self, monomial, unit_vector_q(self.dim, i)) for i in range(self.dim)]
        return LinearOperator.from_images(images)


def free_module_action(F: FreeAlgebraModule, monomial: Word, v) -> tuple:
    if not monomial or any(not 1 <= i <= F.max_index for i in monomial):
        raise ValueError(f"monomial {monomial} is not a nonempty word in x_1..x_{F.max_index}")
    out = [Fraction(0)] * F.dim
    for k, c in enumerate(v):
        if not c:
            continue
        w = tuple(monomial) + F.basis[k]
        if is_admissible(w):
            continue
        if len(w) > F.max_length:
            raise TruncationOverflow(f"product of length {len(w)} exceeds {F.max_length}")
        out[F.position[w]] += c
    return tuple(out)


def _build_Zf24(n: int = 4, length: int = 5, seed: int = 0, samples: int = 50) -> ExampleInstance:
    if n < 2 or length < 1:
        raise ValueError("ex-Zf24 needs n >= 2 and length >= 1")
    M = FreeAlgebraModule(n, length)
    gens = [M.operator((j,)) for j in range(1, n + 1)]
    delta = OperatorSet(gens, [f"x{j}" for j in range(1, n + 1)])
    inst = ExampleInstance("ex-Zf24", {"n": n, "length": length, "seed": seed, "samples": samples},
                           {"module": M, "delta": delta})

    @inst.claim("basis is exactly the nonadmissible monomials")
    def _(depth):
        brute = [w for L in range(1, length + 1) for w in itertools.product(range(1, n + 1), repeat=L)
                 if not len(w) > w[-1]]
        ideal = all(is_admissible((j,) + w) for L in range(1, length)
                    for w in itertools.product(range(1, n + 1), repeat=L) if is_admissible(w)
                    for j in range(1, n + 1))
        return list(M.basis) == brute and ideal, {"dim": M.dim, "left_ideal": ideal}

    @inst.claim("(ab)v = a(bv)")
    def _(depth):
        rng = random.Random(seed)
        bad = 0
        for _ in range(samples):
            a = tuple(rng.randint(1, n) for _ in range(rng.randint(1, 2)))
            b = tuple(rng.randint(1, n) for _ in range(rng.randint(1, 2)))
            v = unit_vector_q(M.dim, rng.randrange(M.dim))
            if free_module_action(M, a + b, v) != free_module_action(M, a, free_module_action(M, b, v)):
                bad += 1
        return bad == 0, {"samples": samples, "failures": bad}

    @inst.claim("every word of i_m generator actions kills w")
    def _(depth):
        bad = []
        for idx, w in enumerate(M.basis):
            start = unit_vector_q(M.dim, idx)
            for word in itertools.product(range(n), repeat=w[-1]):
                if any(delta.apply_word(word, start)):
                    bad.append(list(w))
                    break
        return not bad, {"monomials": M.dim, "failures": bad}

    @inst.claim("a * x_{m+1} is nonzero in the quotient")
    def _(depth):
        rng = random.Random(seed)
        bad = 0
        top = min(3, n - 1)
        for _ in range(samples):
            terms = {}
            for _ in range(rng.randint(1, 3)):
                w = tuple(rng.randint(1, n) for _ in range(rng.randint(1, top)))
                terms[w] = terms.get(w, 0) + _rand_fraction(rng)
            terms = {w: c for w, c in terms.items() if c}
            if not terms:
                continue
            m = len(next(iter(terms)))
            xm = unit_vector_q(M.dim, M.position[(m + 1,)])
            out = [Fraction(0)] * M.dim
            for w, c in terms.items():
                img = free_module_action(M, w, xm)
                out = [o + c * t for o, t in zip(out, img)]
            if not any(out):
                bad += 1
        return bad == 0, {"samples": samples, "failures": bad, "max_length": top}

    @inst.claim("the generator actions form a uniformly locally nilpotent set")
    def _(depth):
        cert = set_locally_nilpotent(delta, depth_bound=depth)
        return cert.certified and cert.degree <= n, {"degree": degree_json(cert.degree)}

    return inst


# -- ex-2ndPart ----------------------------------------------------------------

def _mobius(k: int) -> int:
    result, p = 1, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    return -result if k > 1 else result


def witt_dimension(r: int, length: int) -> int:
    """Dimension of the length-``length`` part of the free Lie algebra on ``r`` letters."""
    total = sum(_mobius(d) * r ** (length // d) for d in range(1, length + 1) if length % d == 0)
    return total // length


def _build_2ndPart(n: int = 4, free_generators: int = 2) -> ExampleInstance:
    if n < 2:
        raise ValueError("ex-2ndPart needs n >= 2")
    M = FreeAlgebraModule(n, n)
    ring = ring_of(["v" + "_".join(map(str, w)) for w in M.basis])
    mu = [M.operator((j,)) for j in range(1, n + 1)]
    psi = [extend_linear_to_derivation(F, ring) for F in mu]
    inst = ExampleInstance("ex-2ndPart", {"n": n, "free_generators": free_generators},
                           {"module": M, "ring": ring, "mu": mu, "psi": psi})

    @inst.claim("psi respects brackets")
    def _(depth):
        bad = [[a, b] for a in range(n) for b in range(n)
               if lie_bracket(psi[a], psi[b]) != extend_linear_to_derivation(mu[a].bracket(mu[b]), ring)]
        return not bad, {"failures": bad}

    @inst.claim("psi(F) agrees with F on the variables")
    def _(depth):
        X = ring.gens()
        bad = []
        for a, F in enumerate(mu):
            for i in range(M.dim):
                img = F(unit_vector_q(M.dim, i))
                want = sum((X[k] * c for k, c in enumerate(img) if c), ring.zero())
                if apply(psi[a], X[i]) != want:
                    bad.append([a, i])
        return not bad, {"failures": bad}

    @inst.claim("degrees transfer and the derivations form a uniformly locally nilpotent set")
    def _(depth):
        ops = OperatorSet(mu)
        ders = OperatorSet(psi)
        X = ring.gens()
        mismatches = []
        worst = 0
        for i in range(M.dim):
            a = deg_delta(ops, unit_vector_q(M.dim, i), depth)
            b = deg_delta(ders, X[i], depth)
            if not (a.certified and b.certified and a.degree == b.degree):
                mismatches.append(i)
            elif b.degree > worst:
                worst = b.degree
        return not mismatches, {"variables": M.dim, "max_degree": worst, "mismatches": mismatches}

    @inst.claim("bracket words in two generators have free Lie algebra dimensions")
    def _(depth):
        S = psi[:free_generators]
        dims = []
        level = list(S)
        for L in range(1, n):
            if L > 1:
                span = SpanBasis()
                nxt = []
                for g in S:
                    for w in level:
                        b = lie_bracket(g, w)
                        if b and span.add(b.coordinates()):
                            nxt.append(b)
                level = nxt
            dims.append(len(level))
        want = [witt_dimension(free_generators, L) for L in range(1, n)]
        return dims == want, {"dims": dims, "free": want, "checked_lengths": n - 1}

    return inst


_BUILDERS = {
    "intro-DE": _build_intro,
    "ex-298": _build_298,
    "ex-928349": _build_928349,
    "ex-ckj029": _build_ckj029,
    "ex-PpPP": _build_PpPP,
    "ex-Zf24": _build_Zf24,
    "ex-2ndPart": _build_2ndPart,
}
EXAMPLE_IDS = tuple(_BUILDERS)


def build(example_id: str, **params) -> ExampleInstance:
    """Construct an example; unknown ids raise :class:`UnknownExampleError`."""
    try:
        builder = _BUILDERS[example_id]
    except KeyError:
        raise UnknownExampleError(example_id) from None
    params = {k: v for k, v in params.items() if v is not None}
    try:
        return builder(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {example_id}: {exc}") from None


def run_claims(instance: ExampleInstance, depth_bound: int = DEFAULT_DEPTH_BOUND) -> dict:
    """Run every claim; the report lists each with pass/fail and its evidence."""
    claims = []
    for c in instance.claims:
        ok, evidence = c.check(depth_bound)
        claims.append({"name": c.name, "status": "pass" if ok else "fail", "evidence": evidence})
    params = dict(instance.params)
    params["depth_bound"] = depth_bound
    return {"example": instance.id, "params": params, "claims": claims}
