"""Derivations of polynomial rings.

A derivation is stored by its images on the variables and acts on a
polynomial through partial derivatives, ``D(p) = sum_i dp/dx_i * D(x_i)``.

Word convention: a word ``(D_0, D_1, ..., D_n)`` is *applied* with ``D_0``
first, i.e. it denotes the composite ``D_n o ... o D_0``.  Bracket words are
written outermost first: ``iterated_bracket([A, B, C]) == [A, [B, C]]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

from .corealg import (
    Polynomial,
    Ring,
    RingMismatchError,
    partial_derivative,
    parse_poly,
    sum_polys,
)

__all__ = [
    "Derivation",
    "WordApplication",
    "apply",
    "lie_bracket",
    "linear_combination",
    "apply_word",
    "iterated_bracket",
    "extend_linear_to_derivation",
    "leibniz_expansion",
]


class Derivation:
    """Immutable derivation ``sum_i images[i] * d/dx_i``."""

    __slots__ = ("ring", "images", "_hash")

    def __init__(self, ring: Ring, images: Mapping[int, Polynomial] | None = None):
        self.ring = ring
        clean: Dict[int, Polynomial] = {}
        for i, p in (images or {}).items():
            if isinstance(i, str):
                i = ring.index(i)
            if p.ring != ring:
                raise RingMismatchError("image polynomial lives in a different ring")
            if not 0 <= i < ring.nvars:
                raise IndexError(f"variable index {i} out of range")
            if p:
                clean[i] = p
        self.images = clean
        self._hash = None

    @classmethod
    def partial(cls, ring: Ring, var, coeff: Polynomial | None = None) -> "Derivation":
        """``coeff * d/d(var)``; ``coeff`` defaults to 1."""
        i = ring.index(var) if isinstance(var, str) else var
        return cls(ring, {i: coeff if coeff is not None else ring.one()})

    @classmethod
    def from_json(cls, data: Mapping[str, str], ring: Ring) -> "Derivation":
        images = {}
        for name, expr in data.items():
            try:
                idx = ring.index(name)
            except KeyError:
                raise KeyError(f"unknown variable {name!r} in derivation") from None
            images[idx] = parse_poly(expr, ring)
        return cls(ring, images)

    def to_json(self) -> Dict[str, str]:
        return {self.ring.names[i]: str(p) for i, p in sorted(self.images.items())}

    def image(self, i: int) -> Polynomial:
        return self.images.get(i) or self.ring.zero()

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def is_zero(self) -> bool:
        return not self.images

    def __bool__(self):
        return bool(self.images)

    def _check(self, other: "Derivation"):
        if other.ring != self.ring:
            raise RingMismatchError("derivations over different rings")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        imgs = dict(self.images)
        for i, p in other.images.items():
            imgs[i] = imgs[i] + p if i in imgs else p
        return Derivation(self.ring, imgs)

    def __neg__(self) -> "Derivation":
        return Derivation(self.ring, {i: -p for i, p in self.images.items()})

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, c) -> "Derivation":
        c = self.ring.field(c)
        return Derivation(self.ring, {i: p * c for i, p in self.images.items()})

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.images.items())))
        return self._hash

    def coordinates(self) -> Dict[Tuple[int, tuple], object]:
        """Sparse coordinate vector keyed by (variable, monomial)."""
        return {(i, m): c for i, p in self.images.items() for m, c in p.terms.items()}

    def __str__(self):
        if not self.images:
            return "0"
        parts = []
        for i, p in sorted(self.images.items()):
            parts.append(f"({p})*d/d{self.ring.names[i]}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Derivation({self})"


def apply(D: Derivation, p: Polynomial) -> Polynomial:
    if p.ring != D.ring:
        raise RingMismatchError("derivation and polynomial live in different rings")
    if not p or not D.images:
        return p.ring.zero()
    used = set(p.variables())
    return sum_polys(
        p.ring,
        (partial_derivative(p, i) * img for i, img in D.images.items() if i in used),
    )


def lie_bracket(D: Derivation, E: Derivation) -> Derivation:
    """``[D, E] = D o E - E o D``, computed on the variables."""
    D._check(E)
    imgs = {}
    for i in set(D.images) | set(E.images):
        imgs[i] = apply(D, E.image(i)) - apply(E, D.image(i))
    return Derivation(D.ring, imgs)


def linear_combination(coeffs: Sequence, Ds: Sequence[Derivation]) -> Derivation:
    if len(coeffs) != len(Ds):
        raise ValueError(f"{len(coeffs)} coefficients for {len(Ds)} derivations")
    if not Ds:
        raise ValueError("empty linear combination has no ambient ring")
    out = Derivation(Ds[0].ring)
    for c, D in zip(coeffs, Ds):
        out = out + D.scale(c)
    return out


@dataclass(frozen=True)
class WordApplication:
    """Trace of applying a word; ``trace[0]`` is the start, ``trace[j]`` follows step j-1."""

    word: Tuple[Derivation, ...]
    start: Polynomial
    trace: Tuple[Polynomial, ...]

    @property
    def value(self) -> Polynomial:
        return self.trace[-1]


def apply_word(Ds: Sequence[Derivation], p: Polynomial) -> WordApplication:
    """Apply ``Ds[0]`` first, then ``Ds[1]``, and so on."""
    if not Ds:
        raise ValueError("empty word")
    trace = [p]
    cur = p
    for D in Ds:
        cur = apply(D, cur) if cur else cur
        trace.append(cur)
    return WordApplication(tuple(Ds), p, tuple(trace))


def iterated_bracket(Ds: Sequence[Derivation]) -> Derivation:
    """Right-nested bracket ``[Ds[0], [Ds[1], ..., [Ds[-2], Ds[-1]]...]]``."""
    if not Ds:
        raise ValueError("empty bracket word")
    acc = Ds[-1]
    for D in reversed(Ds[:-1]):
        if acc.is_zero():
            break
        acc = lie_bracket(D, acc)
    return acc


def extend_linear_to_derivation(F, ring: Ring, variables: Sequence[int] | None = None) -> Derivation:
    """The unique derivation agreeing with the linear map ``F`` on the variables.

    ``F`` is a :class:`~derivlab.opalg.LinearOperator` on the span of
    ``variables`` (default: all ring variables, in order); basis vector ``j``
    corresponds to ``x_{variables[j]}`` and column ``j`` of ``F`` is its image.
    """
    variables = list(range(ring.nvars)) if variables is None else list(variables)
    if F.dim != len(variables):
        raise ValueError(f"operator of size {F.dim} on {len(variables)} variables")
    if F.field != ring.field:
        raise RingMismatchError("operator and ring have different coefficient fields")
    cols: Dict[int, Dict] = {}
    for (i, j), c in F.entries.items():
        cols.setdefault(j, {})[i] = c
    imgs = {}
    for j, col in cols.items():
        imgs[variables[j]] = Polynomial(ring, {((variables[i], 1),): c for i, c in col.items()})
    return Derivation(ring, imgs)


def leibniz_expansion(Ds: Sequence[Derivation], x: Polynomial, y: Polynomial) -> Polynomial:
    """Right side of the Leibniz rule for a composite of derivations.

    ``sum over subsets I of {0..n}`` of ``D_I(x) * D_{complement}(y)``, where
    ``D_I`` applies the members of ``I`` in increasing index order.  Equals
    ``apply_word(Ds, x * y).value``.
    """
    n = len(Ds)
    terms = []
    for mask in itertools.product((False, True), repeat=n):
        left, right = x, y
        for D, in_left in zip(Ds, mask):
            if in_left:
                left = apply(D, left) if left else left
            else:
                right = apply(D, right) if right else right
        if left and right:
            terms.append(left * right)
    return sum_polys(x.ring, terms)
