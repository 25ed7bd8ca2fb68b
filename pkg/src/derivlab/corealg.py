"""Exact coefficient fields and sparse multivariate polynomials.

Coefficients are :class:`fractions.Fraction` over Q and :class:`Mod` over F_p.
Both behave like ordinary numbers, so the polynomial code never branches on
the characteristic except when printing and parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

__all__ = [
    "Mod",
    "Field",
    "QQ",
    "GF",
    "Ring",
    "Monomial",
    "Polynomial",
    "RingMismatchError",
    "ParseError",
    "UnknownVariableError",
    "poly_add",
    "poly_mul",
    "partial_derivative",
    "parse_poly",
]


class RingMismatchError(ValueError):
    pass


class ParseError(ValueError):
    """Syntax error in a polynomial expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownVariableError(ParseError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Mod:
    """Residue class modulo a prime, stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "Mod":
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return Mod(other, self.p)
        if isinstance(other, Fraction):
            return Mod(other.numerator, self.p) / Mod(other.denominator, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return Mod(self.value * pow(o.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return Mod(-self.value, self.p)

    def __pow__(self, k: int):
        if k < 0:
            return Mod(1, self.p) / Mod(pow(self.value, -k, self.p), self.p)
        return Mod(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            o = self._coerce(other)
            return self.value == o.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Mod({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


Coefficient = Union[Fraction, Mod]


@dataclass(frozen=True)
class Field:
    """The coefficient field: Q when ``char == 0``, otherwise F_char."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or a prime, got {self.char}")

    def __call__(self, value) -> Coefficient:
        if self.char == 0:
            if isinstance(value, Mod):
                raise TypeError("cannot coerce a residue into Q")
            return Fraction(value)
        if isinstance(value, Mod):
            if value.p != self.char:
                raise ValueError(f"mixing F_{self.char} and F_{value.p}")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            return Mod(value.numerator, self.char) / Mod(value.denominator, self.char)
        return Mod(int(value), self.char)

    @property
    def zero(self) -> Coefficient:
        return self(0)

    @property
    def one(self) -> Coefficient:
        return self(1)

    def format(self, c: Coefficient) -> str:
        return str(c)

    def is_negative(self, c: Coefficient) -> bool:
        return self.char == 0 and c < 0

    def to_json(self):
        return "Q" if self.char == 0 else {"Fp": self.char}

    @classmethod
    def from_json(cls, data) -> "Field":
        if data in ("Q", None):
            return cls(0)
        if isinstance(data, dict) and set(data) == {"Fp"}:
            return cls(int(data["Fp"]))
        raise ValueError(f"bad coefficient field descriptor: {data!r}")

    def __str__(self):
        return "Q" if self.char == 0 else f"F_{self.char}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# A monomial is a sorted tuple of (variable index, positive exponent) pairs.
Monomial = Tuple[Tuple[int, int], ...]

ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for i, e in b:
        exps[i] = exps.get(i, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Ring:
    """Polynomial ring descriptor: coefficient field plus ordered variable names."""

    field: Field
    names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for n in self.names:
            if not _NAME_RE.match(n):
                raise ValueError(f"invalid variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def var(self, i: Union[int, str]) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        return Polynomial(self, {((i, 1),): self.field.one})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {ONE: self.field(c)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def to_json(self):
        return {"coefficients": self.field.to_json(), "variables": list(self.names)}

    @classmethod
    def from_json(cls, data) -> "Ring":
        return cls(Field.from_json(data.get("coefficients", "Q")), tuple(data["variables"]))


class Polynomial:
    """Immutable sparse polynomial in canonical form (no zero coefficients)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, Coefficient] | None = None):
        self.ring = ring
        self.terms: Dict[Monomial, Coefficient] = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- structure -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=-1)

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({i for m in self.terms for i, _ in m}))

    def coefficient(self, m: Monomial) -> Coefficient:
        return self.terms.get(m, self.ring.field.zero)

    def _key(self, m: Monomial):
        vec = [0] * self.ring.nvars
        for i, e in m:
            vec[i] = e
        return (mono_degree(m), vec)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order (x_0 > x_1 > ...)."""
        return sorted(self.terms.items(), key=lambda t: self._key(t[0]), reverse=True)

    def leading_coefficient(self) -> Coefficient:
        if not self.terms:
            return self.ring.field.zero
        return self.sorted_terms()[0][1]

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Mod)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Mod)):
            c = self.ring.field(other)
            return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        terms: Dict[Monomial, Coefficient] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = mono_mul(m1, m2)
                terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return self * self.ring.field(c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Mod)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- presentation ----------------------------------------------------
    def _mono_str(self, m: Monomial) -> str:
        parts = []
        for i, e in m:
            name = self.ring.names[i]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            neg = f.is_negative(c)
            a = -c if neg else c
            if m == ONE:
                body = f.format(a)
            elif a == 1:
                body = self._mono_str(m)
            else:
                body = f"{f.format(a)}*{self._mono_str(m)}"
            if k == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a * b


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """Formal partial derivative with respect to variable ``i``."""
    terms: Dict[Monomial, Coefficient] = {}
    for m, c in p.terms.items():
        exps = dict(m)
        e = exps.get(i)
        if not e:
            continue
        if e == 1:
            del exps[i]
        else:
            exps[i] = e - 1
        nm = tuple(sorted(exps.items()))
        terms[nm] = terms.get(nm, 0) + c * e
    return Polynomial(p.ring, terms)


# -- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        start = pos
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def fail(self, msg):
        tok = self.peek()
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"{msg}, found {what}", tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        tok = self.peek()
        # a leading "-" belongs to a rational literal; before anything else it negates
        if tok[0] == "-" and self.tokens[self.i + 1][0] != "num":
            self.take()
            return -self.factor()
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            e = self.take("num")
            b = b ** int(e[1])
        return b

    def base(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if tok[0] == "name":
            self.take()
            try:
                return self.ring.var(tok[1])
            except KeyError:
                raise UnknownVariableError(f"unknown variable {tok[1]!r}", tok[2], self.text) from None
        if tok[0] in ("num", "-"):
            return self.ring.const(self.rational())
        self.fail("expected a number, variable or '('")

    def rational(self):
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        num = self.take("num")
        value = Fraction(int(num[1]))
        if self.peek()[0] == "/":
            self.take()
            den = self.take("num")
            if int(den[1]) == 0 or (self.ring.field.char and int(den[1]) % self.ring.field.char == 0):
                raise ParseError("division by zero", den[2], self.text)
            value /= int(den[1])
        return self.ring.field(sign * value)


def parse_poly(text: str, ring: Ring) -> Polynomial:
    """Parse ``text`` (``+ - * ^``, rationals ``a/b``, parentheses) into a polynomial of ``ring``."""
    return _Parser(text, ring).parse()


def sum_polys(ring: Ring, polys: Iterable[Polynomial]) -> Polynomial:
    terms: Dict[Monomial, Coefficient] = {}
    for p in polys:
        for m, c in p.terms.items():
            terms[m] = terms[m] + c if m in terms else c
    return Polynomial(ring, terms)


def ring_of(names: Sequence[str], char: int = 0) -> Ring:
    return Ring(Field(char), tuple(names))


def iter_monomials(nvars: Sequence[int], max_degree: int) -> Iterator[Monomial]:
    """All monomials in the given variable indices with total degree <= max_degree."""
    nvars = list(nvars)

    def rec(k, budget):
        if k == len(nvars):
            yield ()
            return
        for e in range(budget + 1):
            for rest in rec(k + 1, budget - e):
                yield (((nvars[k], e),) + rest) if e else rest

    yield from rec(0, max_degree)
