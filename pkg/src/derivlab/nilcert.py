"""Bounded word searches certifying local nilpotence of operator sets.

For a finite set of actors (derivations or linear operators) and an element
``x``, the words that do not annihilate ``x`` form a tree: a word survives
only if its prefix does.  When ``x`` lies in the locally nilpotent set this
tree is finite and its height is the degree of ``x``.  The search explores
it breadth first, actors in index order, and returns one of three verdicts:

* ``certified``: the tree died at some depth within the bound;
* ``refuted``: a surviving word returns to a scalar multiple of an earlier
  value on its own trace, so repeating that stretch never annihilates ``x``;
* ``inconclusive``: words still survive at the bound.

Words in certificates are tuples of actor indices in application order
(first entry applied first).  Bracket words reported by the Lie variant are
written outermost first, like :func:`derivlab.derivcalc.iterated_bracket`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .corealg import Polynomial, RingMismatchError
from .derivcalc import Derivation, apply, iterated_bracket, lie_bracket
from .linalg import SpanBasis
from .opalg import LinearOperator, unit_vector

DEFAULT_DEPTH_BOUND = 16
DEFAULT_DIM_BOUND = 64
NEG_INF = float("-inf")

__all__ = [
    "Verdict",
    "Certificate",
    "OperatorSet",
    "VanishingResult",
    "deg_delta",
    "nil_membership",
    "check_schedule",
    "set_locally_nilpotent",
    "word_vanishing_depth",
    "unil_lie_membership",
    "check_generated_set_invariance",
    "check_deg_laws",
    "replay_certificate",
    "DEFAULT_DEPTH_BOUND",
    "DEFAULT_DIM_BOUND",
    "NEG_INF",
]


class Verdict(str, Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


def degree_json(d):
    if d is None:
        return None
    if d == NEG_INF:
        return "neg-inf"
    return int(d)


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    degree: Optional[float]
    bound: int
    witness: Tuple[int, ...] = ()
    periodic: Optional[Dict] = None
    evidence: Dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    def to_json(self):
        out = {
            "verdict": self.verdict.value,
            "degree": degree_json(self.degree),
            "bound": self.bound,
            "witness": list(self.witness),
            "periodic": self.periodic,
        }
        if self.evidence:
            out["evidence"] = self.evidence
        return out


# -- elements ----------------------------------------------------------------

def is_zero(x) -> bool:
    if isinstance(x, Polynomial):
        return not x
    return not any(x)


def normalize(x):
    """``(key, lead)`` with ``x == lead * key`` and ``key`` canonical up to scaling."""
    if isinstance(x, Polynomial):
        lead = x.leading_coefficient()
        return x * (1 / lead), lead
    lead = next(c for c in x if c)
    return tuple(c / lead for c in x), lead


def coordinates(x) -> Dict:
    """Sparse coordinates: monomial to coefficient, or position to entry."""
    if isinstance(x, Polynomial):
        return x.terms
    return {k: c for k, c in enumerate(x) if c}


def add(x, y):
    if isinstance(x, Polynomial):
        return x + y
    return tuple(a + b for a, b in zip(x, y))


class OperatorSet:
    """Finite, indexed, homogeneous family of derivations or linear operators."""

    def __init__(self, actors: Sequence = (), names: Sequence[str] | None = None):
        self.actors = tuple(actors)
        if not self.actors:
            self.kind = "empty"
        elif all(isinstance(a, Derivation) for a in self.actors):
            self.kind = "derivation"
            ring = self.actors[0].ring
            if any(a.ring != ring for a in self.actors):
                raise RingMismatchError("derivations over different rings")
        elif all(isinstance(a, LinearOperator) for a in self.actors):
            self.kind = "operator"
            d = self.actors[0].dim
            if any(a.dim != d or a.field != self.actors[0].field for a in self.actors):
                raise ValueError("operators of different sizes or fields")
        else:
            raise TypeError("actors must all be Derivations or all LinearOperators")
        if self.kind == "derivation":
            self.field = self.actors[0].ring.field
        elif self.kind == "operator":
            self.field = self.actors[0].field
        else:
            self.field = None
        self.names = tuple(names) if names is not None else tuple(f"F{i}" for i in range(len(self.actors)))
        if len(self.names) != len(self.actors):
            raise ValueError("one name per actor required")

    def __len__(self):
        return len(self.actors)

    def __getitem__(self, i):
        return self.actors[i]

    def act(self, i: int, x):
        a = self.actors[i]
        return apply(a, x) if self.kind == "derivation" else a(x)

    def apply_word(self, word: Sequence[int], x):
        for i in word:
            if is_zero(x):
                break
            x = self.act(i, x)
        return x

    def check_element(self, x) -> None:
        if self.kind == "derivation":
            if not isinstance(x, Polynomial) or x.ring != self.actors[0].ring:
                raise RingMismatchError("element is not in the derivations' ring")
        elif self.kind == "operator":
            if isinstance(x, Polynomial) or len(x) != self.actors[0].dim:
                raise ValueError("element is not a vector of the operators' space")

    def generators(self) -> List:
        """Ring variables (derivations) or basis vectors (operators)."""
        if self.kind == "derivation":
            return list(self.actors[0].ring.gens())
        if self.kind == "operator":
            a = self.actors[0]
            return [unit_vector(a.field, a.dim, i) for i in range(a.dim)]
        return []

    # map-level operations used by the Lie variant
    def bracket(self, a, b):
        return lie_bracket(a, b) if self.kind == "derivation" else a.bracket(b)

    def apply_map(self, a, x):
        return apply(a, x) if self.kind == "derivation" else a(x)

    def with_extra(self, extra: Sequence, extra_names: Sequence[str] | None = None) -> "OperatorSet":
        names = list(self.names) + list(extra_names or [f"G{i}" for i in range(len(extra))])
        return OperatorSet(list(self.actors) + list(extra), names)

    def bracket_word(self, word: Sequence[int]):
        """Right-nested bracket of the actors named by ``word`` (outermost first)."""
        ops = [self.actors[i] for i in word]
        if self.kind == "derivation":
            return iterated_bracket(ops)
        acc = ops[-1]
        for a in reversed(ops[:-1]):
            acc = a.bracket(acc)
        return acc


def _scale_json(c) -> str:
    return str(c)


# -- degree search -------------------------------------------------------------

def deg_delta(delta: OperatorSet, x, depth_bound: int = DEFAULT_DEPTH_BOUND, detect_cycles: bool = True) -> Certificate:
    """Degree of ``x`` with respect to ``delta`` via bounded breadth-first search.

    Certified degree ``n``: the witness word of length ``n`` survives and every
    word of length ``n + 1`` annihilates ``x``.  Level ``k`` keeps a basis of
    the span of all length-``k`` word values, chosen among the values
    themselves; by linearity the next level's span is reached from that basis
    alone, so the level is empty exactly when every word of that length kills
    ``x``.  The search itself never refutes; if a kept word brings a value
    back to a multiple of an earlier value on its own trace, the search stops
    early and reports the cycle under ``evidence["cycle"]`` for
    :func:`nil_membership` to verify.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be >= 1")
    delta.check_element(x)
    if is_zero(x):
        return Certificate(Verdict.CERTIFIED, NEG_INF, depth_bound, evidence={"exhausted_at": 0})
    if len(delta) == 0:
        return Certificate(Verdict.CERTIFIED, 0, depth_bound, evidence={"exhausted_at": 1})

    key0, lead0 = normalize(x)
    # frontier entries: (word, value, ancestors: key -> (position, lead))
    frontier = [((), x, {key0: (0, lead0)})]
    for depth in range(1, depth_bound + 1):
        nxt = []
        span = SpanBasis()
        for word, value, ancestors in frontier:
            for i in range(len(delta)):
                y = delta.act(i, value)
                if is_zero(y):
                    continue
                key, lead = normalize(y)
                new_word = word + (i,)
                if detect_cycles and key in ancestors:
                    # the tree is infinite; stop and hand the cycle over as a schedule
                    pos, prev_lead = ancestors[key]
                    cycle = {
                        "preperiod": list(new_word[:pos]),
                        "period": list(new_word[pos:]),
                        "scale": _scale_json(lead / prev_lead),
                    }
                    return Certificate(
                        Verdict.INCONCLUSIVE, None, depth_bound, new_word,
                        evidence={"cycle": cycle, "stopped_at": depth},
                    )
                if not span.add(coordinates(y)):
                    continue
                anc = dict(ancestors)
                anc[key] = (depth, lead)
                nxt.append((new_word, y, anc))
        if not nxt:
            return Certificate(
                Verdict.CERTIFIED, depth - 1, depth_bound, frontier[0][0],
                evidence={"exhausted_at": depth},
            )
        frontier = nxt
    return Certificate(
        Verdict.INCONCLUSIVE, None, depth_bound, frontier[0][0],
        evidence={"surviving_values_at_bound": len(frontier)},
    )


def check_schedule(delta: OperatorSet, x, preperiod: Sequence[int], period: Sequence[int],
                   max_periods: int = DEFAULT_DEPTH_BOUND) -> Certificate:
    """Follow ``preperiod`` then ``period`` repeated; refute if the period-boundary values cycle."""
    if not period:
        raise ValueError("period must be nonempty")
    for i in list(preperiod) + list(period):
        if not 0 <= i < len(delta):
            raise IndexError(f"schedule refers to actor {i} of {len(delta)}")
    delta.check_element(x)
    v = delta.apply_word(preperiod, x)
    steps = len(preperiod)
    if is_zero(v):
        return Certificate(Verdict.CERTIFIED, None, max_periods, tuple(preperiod),
                           evidence={"schedule_dies_after": steps})
    key, lead = normalize(v)
    seen = {key: (0, lead)}
    for k in range(1, max_periods + 1):
        for i in period:
            v = delta.act(i, v)
            steps += 1
            if is_zero(v):
                # the schedule dies, so it proves nothing against membership
                return Certificate(Verdict.INCONCLUSIVE, None, max_periods, (),
                                   evidence={"schedule_dies_after": steps})
        key, lead = normalize(v)
        if key in seen:
            j, prev = seen[key]
            pre = list(preperiod) + list(period) * j
            per = list(period) * (k - j)
            return Certificate(
                Verdict.REFUTED, None, max_periods, tuple(pre + per),
                {"preperiod": pre, "period": per, "scale": _scale_json(lead / prev)},
                evidence={"cycle_length": len(per)},
            )
        seen[key] = (k, lead)
    return Certificate(Verdict.INCONCLUSIVE, None, max_periods, (),
                       evidence={"schedule_survives_periods": max_periods})


def nil_membership(delta: OperatorSet, x, depth_bound: int = DEFAULT_DEPTH_BOUND,
                   schedule: Optional[Tuple[Sequence[int], Sequence[int]]] = None) -> Certificate:
    """Membership of ``x`` in the locally nilpotent set of a finite ``delta``.

    For finite sets this coincides with uniform membership, so a certified
    answer carries the degree.  When the search is inconclusive, an
    eventually periodic schedule ``(preperiod, period)`` is checked: the
    caller's if given, otherwise the cycle the search ran into.  Refuted is
    returned only after that schedule is replayed and seen to cycle.
    """
    cert = deg_delta(delta, x, depth_bound)
    if cert.verdict is not Verdict.INCONCLUSIVE:
        return cert
    if schedule is None and "cycle" in cert.evidence:
        cyc = cert.evidence["cycle"]
        schedule = (cyc["preperiod"], cyc["period"])
    if schedule is None:
        return cert
    pre, per = schedule
    sched = check_schedule(delta, x, pre, per, max_periods=depth_bound)
    if sched.refuted:
        return sched
    evidence = dict(cert.evidence)
    evidence["schedule"] = sched.evidence
    return Certificate(cert.verdict, cert.degree, cert.bound, cert.witness, None, evidence)


def set_locally_nilpotent(delta: OperatorSet, generators: Optional[Sequence] = None,
                          depth_bound: int = DEFAULT_DEPTH_BOUND) -> Certificate:
    """Certify that every element is in the locally nilpotent set by checking generators.

    Derivations: the set is a subalgebra containing the constants, so the
    ring variables suffice.  Operators: it is a subspace, so a basis suffices.
    """
    if len(delta) == 0:
        return Certificate(Verdict.CERTIFIED, 0, depth_bound, evidence={"generators": []})
    gens = delta.generators() if generators is None else list(generators)
    per_gen = []
    refuted = None
    inconclusive = False
    max_deg = NEG_INF
    for k, g in enumerate(gens):
        cert = nil_membership(delta, g, depth_bound)
        per_gen.append({"generator": k, "verdict": cert.verdict.value, "degree": degree_json(cert.degree)})
        if cert.refuted and refuted is None:
            refuted = (k, cert)
        elif cert.verdict is Verdict.INCONCLUSIVE:
            inconclusive = True
        elif cert.certified:
            max_deg = max(max_deg, cert.degree)
    evidence = {"generators": per_gen}
    if refuted is not None:
        k, cert = refuted
        evidence["refuted_generator"] = k
        return Certificate(Verdict.REFUTED, None, depth_bound, cert.witness, cert.periodic, evidence)
    if inconclusive:
        return Certificate(Verdict.INCONCLUSIVE, None, depth_bound, evidence=evidence)
    return Certificate(Verdict.CERTIFIED, max_deg, depth_bound, evidence=evidence)


@dataclass(frozen=True)
class VanishingResult:
    vanishes: bool
    witness: Optional[Tuple[int, ...]] = None
    probe: Optional[int] = None

    def __bool__(self):
        return self.vanishes


def word_vanishing_depth(delta: OperatorSet, n: int) -> VanishingResult:
    """Whether every length-``n`` word of ``delta`` kills every generator.

    Generators are the ring variables for derivations and the basis for
    operators; for operators this is exactly "every such composite is the
    zero map".  A failing answer names a surviving word and the probe.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    for k, g in enumerate(delta.generators()):
        if is_zero(g):
            continue
        frontier = [((), g)]
        for _ in range(n):
            nxt = []
            span = SpanBasis()
            for word, value in frontier:
                for i in range(len(delta)):
                    y = delta.act(i, value)
                    if not is_zero(y) and span.add(coordinates(y)):
                        nxt.append((word + (i,), y))
            frontier = nxt
            if not frontier:
                break
        if frontier:
            return VanishingResult(False, frontier[0][0], k)
    return VanishingResult(True)


def unil_lie_membership(delta: OperatorSet, x, depth_bound: int = DEFAULT_DEPTH_BOUND) -> Certificate:
    """Uniform Lie-local nilpotence of ``x`` via an operator-level cutoff.

    Tracks the span ``W_n`` of all length-``n`` bracket words
    ``[F_n, ..., F_1]``.  Certified with cutoff ``N`` once ``W_N = 0``: every
    longer bracket word is then the zero map.  Pointwise vanishing at ``x``
    is recorded per length as evidence only, since it need not persist.
    """
    delta.check_element(x)
    if len(delta) == 0:
        return Certificate(Verdict.CERTIFIED, None, depth_bound, evidence={"cutoff": 0, "pattern": []})

    def coords(a):
        return a.coordinates()

    def fresh_level(candidates):
        span = SpanBasis()
        level = []
        for word, op in candidates:
            if op and span.add(coords(op)):
                level.append((word, op))
        return level

    level = fresh_level(((i,), a) for i, a in enumerate(delta.actors))
    pattern: List[bool] = []
    dims: List[int] = []
    last_witness: Tuple[int, ...] = ()
    for n in range(1, depth_bound + 1):
        if n > 1:
            level = fresh_level(
                ((i,) + word, delta.bracket(a, op)) for word, op in level for i, a in enumerate(delta.actors)
            )
        dims.append(len(level))
        if not level:
            return Certificate(
                Verdict.CERTIFIED, None, depth_bound, last_witness,
                evidence={"cutoff": n, "pattern": pattern + [True], "span_dims": dims},
            )
        hit = next((word for word, op in level if not is_zero(delta.apply_map(op, x))), None)
        pattern.append(hit is None)
        if hit is not None:
            last_witness = hit
    return Certificate(
        Verdict.INCONCLUSIVE, None, depth_bound, last_witness,
        evidence={"pattern": pattern, "span_dims": dims},
    )


def check_generated_set_invariance(delta: OperatorSet, enrichment: Sequence[Sequence[int]], samples: Sequence,
                                   depth_bound: int = DEFAULT_DEPTH_BOUND) -> Dict:
    """Compare degrees under ``delta`` and under ``delta`` plus some of its bracket words."""
    extra = [delta.bracket_word(w) for w in enrichment]
    enriched = delta.with_extra(extra, [f"[{','.join(map(str, w))}]" for w in enrichment])
    violations = []
    checked = skipped = 0
    for k, x in enumerate(samples):
        a = deg_delta(delta, x, depth_bound)
        b = deg_delta(enriched, x, depth_bound)
        if not (a.certified and b.certified):
            skipped += 1
            continue
        checked += 1
        if a.degree != b.degree:
            violations.append({"sample": k, "base": degree_json(a.degree), "enriched": degree_json(b.degree)})
    return {"checked": checked, "skipped": skipped, "violations": violations}


def check_deg_laws(delta: OperatorSet, samples: Sequence, depth_bound: int = DEFAULT_DEPTH_BOUND,
                   pairs: Optional[Sequence[Tuple[int, int]]] = None) -> Dict:
    """Check strict decrease, the max law for sums and (derivations) subadditivity for products.

    ``pairs`` selects sample index pairs; default is all pairs ``i <= j``.
    Uncertified degrees are reported separately, never counted as passes.
    """
    cache: Dict = {}

    def deg(v):
        key = v if isinstance(v, Polynomial) else tuple(v)
        if key not in cache:
            cache[key] = deg_delta(delta, v, depth_bound)
        return cache[key]

    violations = []
    uncertified = []
    checks = 0
    for k, x in enumerate(samples):
        dx = deg(x)
        if not dx.certified:
            uncertified.append({"sample": k})
            continue
        if is_zero(x):
            continue
        for i in range(len(delta)):
            d = deg(delta.act(i, x))
            checks += 1
            if not d.certified:
                uncertified.append({"sample": k, "actor": i})
            elif not d.degree < dx.degree:
                violations.append({"law": "decrease", "sample": k, "actor": i})
    if pairs is None:
        pairs = [(i, j) for i in range(len(samples)) for j in range(i, len(samples))]
    for i, j in pairs:
        x, y = samples[i], samples[j]
        dx, dy = deg(x), deg(y)
        if not (dx.certified and dy.certified):
            continue
        checks += 1
        ds = deg(add(x, y))
        if not ds.certified:
            uncertified.append({"pair": [i, j], "law": "sum"})
        elif ds.degree > max(dx.degree, dy.degree):
            violations.append({"law": "sum", "pair": [i, j]})
        if delta.kind == "derivation":
            checks += 1
            dp = deg(x * y)
            if not dp.certified:
                uncertified.append({"pair": [i, j], "law": "product"})
            elif dp.degree > dx.degree + dy.degree:
                violations.append({"law": "product", "pair": [i, j]})
    return {"checks": checks, "violations": violations, "uncertified": uncertified}


def replay_certificate(delta: OperatorSet, x, cert: Certificate) -> bool:
    """Independently re-check a certificate by direct word evaluation.

    Certified degree ``n``: the witness has length ``n`` and survives, and all
    ``|delta|^(n+1)`` words of length ``n + 1`` kill ``x`` (brute force).
    Refuted: the period maps the post-preperiod value to a nonzero multiple
    of itself.
    """
    if cert.certified:
        if cert.degree == NEG_INF:
            return is_zero(x)
        n = int(cert.degree)
        if len(cert.witness) != n or is_zero(delta.apply_word(cert.witness, x)):
            return False
        return all(is_zero(delta.apply_word(w, x)) for w in itertools.product(range(len(delta)), repeat=n + 1))
    if cert.refuted and cert.periodic:
        v = delta.apply_word(cert.periodic["preperiod"], x)
        if is_zero(v):
            return False
        w = delta.apply_word(cert.periodic["period"], v)
        c = delta.field(cert.periodic["scale"])
        scaled = v * c if isinstance(v, Polynomial) else tuple(a * c for a in v)
        return bool(c) and w == scaled
    return False
