"""Finite-dimensional linear operators and structure-constant algebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .corealg import QQ, Field
from .linalg import SpanBasis, closure

__all__ = [
    "LinearOperator",
    "StructureAlgebra",
    "InvalidAlgebraError",
    "DimensionBoundExceeded",
    "op_compose",
    "op_bracket",
    "is_nilpotent_operator",
    "left_mult_operator",
    "lie_span_closure",
    "assoc_span_closure",
    "algebra_from_operators",
    "lower_central_series",
    "LowerCentralSeries",
    "strictly_upper_triangular",
]

Vector = Tuple


class InvalidAlgebraError(ValueError):
    pass


class DimensionBoundExceeded(Exception):
    """Raised by span closures; ``partial_basis`` holds what was reached."""

    def __init__(self, partial_basis, dim_bound):
        super().__init__(f"closure dimension exceeded bound {dim_bound}")
        self.partial_basis = partial_basis
        self.dim_bound = dim_bound


def zero_vector(field: Field, dim: int) -> Vector:
    return (field.zero,) * dim


def unit_vector(field: Field, dim: int, i: int) -> Vector:
    v = [field.zero] * dim
    v[i] = field.one
    return tuple(v)


def vec_is_zero(v: Vector) -> bool:
    return not any(v)


class LinearOperator:
    """Square matrix stored sparsely as ``{(row, col): coeff}``.

    Column ``j`` is the image of basis vector ``e_j``.
    """

    __slots__ = ("field", "dim", "entries", "_hash")

    def __init__(self, dim: int, entries: Mapping[Tuple[int, int], object] | None = None, field: Field = QQ):
        self.field = field
        self.dim = dim
        clean = {}
        for (i, j), c in (entries or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise IndexError(f"entry ({i}, {j}) outside a {dim}x{dim} matrix")
            c = field(c)
            if c:
                clean[(i, j)] = c
        self.entries: Dict[Tuple[int, int], object] = clean
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> "LinearOperator":
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError("matrix must be square")
        return cls(d, {(i, j): c for i, r in enumerate(rows) for j, c in enumerate(r) if c}, field)

    @classmethod
    def from_images(cls, images: Sequence[Vector], field: Field = QQ) -> "LinearOperator":
        """Operator sending ``e_j`` to ``images[j]``."""
        d = len(images)
        return cls(d, {(i, j): c for j, col in enumerate(images) for i, c in enumerate(col) if c}, field)

    @classmethod
    def identity(cls, dim: int, field: Field = QQ) -> "LinearOperator":
        return cls(dim, {(i, i): 1 for i in range(dim)}, field)

    @classmethod
    def zero(cls, dim: int, field: Field = QQ) -> "LinearOperator":
        return cls(dim, {}, field)

    def to_rows(self) -> List[List]:
        rows = [[self.field.zero] * self.dim for _ in range(self.dim)]
        for (i, j), c in self.entries.items():
            rows[i][j] = c
        return rows

    def __call__(self, v: Vector) -> Vector:
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} for a {self.dim}-dimensional operator")
        out = [self.field.zero] * self.dim
        for (i, j), c in self.entries.items():
            if v[j]:
                out[i] = out[i] + c * v[j]
        return tuple(out)

    def _check(self, other: "LinearOperator"):
        if not isinstance(other, LinearOperator):
            raise TypeError(f"expected LinearOperator, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.field != self.field:
            raise ValueError("operators over different fields")

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        """``self o other`` (apply ``other`` first)."""
        self._check(other)
        by_col: Dict[int, List] = {}
        for (i, k), c in self.entries.items():
            by_col.setdefault(k, []).append((i, c))
        out: Dict[Tuple[int, int], object] = {}
        for (k, j), g in other.entries.items():
            for i, f in by_col.get(k, ()):
                key = (i, j)
                out[key] = out[key] + f * g if key in out else f * g
        return LinearOperator(self.dim, out, self.field)

    __matmul__ = compose

    def bracket(self, other: "LinearOperator") -> "LinearOperator":
        return self.compose(other) - other.compose(self)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        self._check(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out[k] + c if k in out else c
        return LinearOperator(self.dim, out, self.field)

    def __neg__(self):
        return LinearOperator(self.dim, {k: -c for k, c in self.entries.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinearOperator":
        c = self.field(c)
        return LinearOperator(self.dim, {k: v * c for k, v in self.entries.items()}, self.field)

    def power(self, k: int) -> "LinearOperator":
        out = LinearOperator.identity(self.dim, self.field)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def coordinates(self) -> Dict[Tuple[int, int], object]:
        return dict(self.entries)

    def __eq__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.dim == other.dim and self.field == other.field and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.field, frozenset(self.entries.items())))
        return self._hash

    def __repr__(self):
        return f"LinearOperator({[[str(c) for c in r] for r in self.to_rows()]})"


def op_compose(F: LinearOperator, G: LinearOperator) -> LinearOperator:
    return F.compose(G)


def op_bracket(F: LinearOperator, G: LinearOperator) -> LinearOperator:
    return F.bracket(G)


def is_nilpotent_operator(F: LinearOperator) -> Tuple[bool, Optional[int]]:
    """``(True, k)`` with ``k`` the least power killing ``F``, else ``(False, None)``.

    In finite dimension ``d`` a nilpotent map satisfies ``F^d = 0``.
    """
    P = F
    for k in range(1, max(F.dim, 1) + 1):
        if P.is_zero():
            return True, k
        P = F.compose(P)
    return False, None


class StructureAlgebra:
    """Algebra with basis ``e_0..e_{d-1}`` and ``e_i * e_j = sum_k c_ij^k e_k``.

    ``table`` maps ``(i, j)`` to a sparse dict ``{k: c}``; missing pairs
    multiply to zero.  Validation (associativity or alternation plus Jacobi)
    runs at construction unless ``unsafe=True``.
    """

    def __init__(
        self,
        dim: int,
        kind: str,
        table: Mapping[Tuple[int, int], Mapping[int, object]],
        names: Sequence[str] | None = None,
        field: Field = QQ,
        unsafe: bool = False,
    ):
        if kind not in ("associative", "lie"):
            raise InvalidAlgebraError(f"kind must be 'associative' or 'lie', got {kind!r}")
        self.dim = dim
        self.kind = kind
        self.field = field
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.names) != dim:
            raise InvalidAlgebraError(f"{len(self.names)} basis names for dimension {dim}")
        clean: Dict[Tuple[int, int], Dict[int, object]] = {}
        for (i, j), row in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise InvalidAlgebraError(f"table entry ({i}, {j}) outside dimension {dim}")
            r = {}
            for k, c in row.items():
                if not 0 <= k < dim:
                    raise InvalidAlgebraError(f"table index {k} outside dimension {dim}")
                c = field(c)
                if c:
                    r[k] = c
            if r:
                clean[(i, j)] = r
        self.table = clean
        if not unsafe:
            self.validate()

    # -- arithmetic ------------------------------------------------------
    def basis(self, i: int) -> Vector:
        return unit_vector(self.field, self.dim, i)

    def zero(self) -> Vector:
        return zero_vector(self.field, self.dim)

    def mul(self, x: Vector, y: Vector) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("element length does not match algebra dimension")
        out = [self.field.zero] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            for j, b in ys:
                row = self.table.get((i, j))
                if row:
                    ab = a * b
                    for k, c in row.items():
                        out[k] = out[k] + ab * c
        return tuple(out)

    def right_nested(self, elements: Sequence[Vector]) -> Vector:
        """``a_n * (a_{n-1} * ( ... * a_0))`` for ``elements = [a_0, ..., a_n]``."""
        acc = elements[0]
        for a in elements[1:]:
            if vec_is_zero(acc):
                break
            acc = self.mul(a, acc)
        return acc

    def validate(self) -> None:
        d = self.dim
        e = [self.basis(i) for i in range(d)]
        if self.kind == "associative":
            for i in range(d):
                for j in range(d):
                    eij = self.mul(e[i], e[j])
                    for k in range(d):
                        if self.mul(eij, e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                            raise InvalidAlgebraError(f"associativity fails on ({i}, {j}, {k})")
        else:
            for i in range(d):
                if (i, i) in self.table:
                    raise InvalidAlgebraError(f"e{i} * e{i} != 0")
                for j in range(i + 1, d):
                    a = self.table.get((i, j), {})
                    b = self.table.get((j, i), {})
                    if set(a) != set(b) or any(a[k] != -b[k] for k in a):
                        raise InvalidAlgebraError(f"table not antisymmetric on ({i}, {j})")
            for i in range(d):
                for j in range(i + 1, d):
                    for k in range(j + 1, d):
                        s = [self.field.zero] * d
                        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                            t = self.mul(e[x], self.mul(e[y], e[z]))
                            s = [u + v for u, v in zip(s, t)]
                        if any(s):
                            raise InvalidAlgebraError(f"Jacobi identity fails on ({i}, {j}, {k})")

    def lie_algebra(self) -> "StructureAlgebra":
        """The commutator algebra ``A_L`` (``a * b = ab - ba``)."""
        if self.kind != "associative":
            raise InvalidAlgebraError("commutator algebra requires an associative algebra")
        table: Dict[Tuple[int, int], Dict[int, object]] = {}
        for (i, j), row in self.table.items():
            for key, sign in (((i, j), 1), ((j, i), -1)):
                r = table.setdefault(key, {})
                for k, c in row.items():
                    r[k] = r.get(k, 0) + sign * c
        return StructureAlgebra(self.dim, "lie", table, self.names, self.field)

    # -- serialization ---------------------------------------------------
    def to_json(self):
        entries = []
        for (i, j), row in sorted(self.table.items()):
            for k, c in sorted(row.items()):
                entries.append({"i": i, "j": j, "k": k, "c": str(c)})
        out = {"kind": self.kind, "basis": list(self.names), "table": entries}
        if self.field.char:
            out["coefficients"] = self.field.to_json()
        return out

    @classmethod
    def from_json(cls, data, unsafe: bool = False) -> "StructureAlgebra":
        field = Field.from_json(data.get("coefficients", "Q"))
        names = data["basis"]
        table: Dict[Tuple[int, int], Dict[int, object]] = {}
        for ent in data.get("table", []):
            i, j, k = int(ent["i"]), int(ent["j"]), int(ent["k"])
            row = table.setdefault((i, j), {})
            row[k] = row.get(k, 0) + field(str(ent["c"]))
        return cls(len(names), data["kind"], table, names, field, unsafe=unsafe)

    def __repr__(self):
        return f"StructureAlgebra(dim={self.dim}, kind={self.kind!r})"


def left_mult_operator(A: StructureAlgebra, a: Vector) -> LinearOperator:
    """Matrix of ``x -> a * x``."""
    if len(a) != A.dim:
        raise ValueError(f"coordinates of length {len(a)} for a {A.dim}-dimensional algebra")
    images = [A.mul(a, A.basis(j)) for j in range(A.dim)]
    return LinearOperator.from_images(images, A.field) if A.dim else LinearOperator.zero(0, A.field)


def _closure(gens, product, dim_bound):
    basis, _, exceeded = closure(list(gens), product, lambda F: F.coordinates(), dim_bound)
    if exceeded:
        raise DimensionBoundExceeded(basis, dim_bound)
    return basis


def lie_span_closure(gens: Sequence[LinearOperator], dim_bound: int = 64) -> List[LinearOperator]:
    """Basis of the Lie algebra generated by ``gens`` under ``[F, G] = FG - GF``."""
    return _closure(gens, lambda a, b: a.bracket(b), dim_bound)


def assoc_span_closure(gens: Sequence[LinearOperator], dim_bound: int = 64) -> List[LinearOperator]:
    """Basis of the (non-unital) associative algebra generated by ``gens``."""
    return _closure(gens, lambda a, b: a.compose(b), dim_bound)


def structure_constants(basis: Sequence, product, to_vec, kind: str, field: Field, names=None, unsafe=False):
    """StructureAlgebra of a product-closed family with linearly independent ``basis``."""
    span = SpanBasis()
    for b in basis:
        if not span.add(to_vec(b)):
            raise InvalidAlgebraError("basis elements are linearly dependent")
    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            p = product(a, b)
            coords = span.coordinates(to_vec(p))
            if coords is None:
                raise InvalidAlgebraError(f"product of basis elements {i}, {j} leaves the span")
            if coords:
                table[(i, j)] = coords
    return StructureAlgebra(len(basis), kind, table, names, field, unsafe=unsafe)


def algebra_from_operators(
    ops: Sequence[LinearOperator], kind: str, dim_bound: int = 64, close: bool = True
) -> Tuple[StructureAlgebra, List[LinearOperator]]:
    """Structure algebra of the associative or Lie algebra spanned/generated by ``ops``.

    With ``close=False`` the operators must already be a basis of a closed family.
    """
    if not ops:
        return StructureAlgebra(0, kind, {}), []
    field = ops[0].field
    if kind == "lie":
        product = lambda a, b: a.bracket(b)  # noqa: E731
    else:
        product = lambda a, b: a.compose(b)  # noqa: E731
    basis = _closure(ops, product, dim_bound) if close else list(ops)
    A = structure_constants(basis, product, lambda F: F.coordinates(), kind, field)
    return A, basis


@dataclass(frozen=True)
class LowerCentralSeries:
    """Dimensions of ``A^1 = A``, ``A^{k+1} = A * A^k`` until zero or stabilization."""

    dims: Tuple[int, ...]
    nilpotent: bool

    @property
    def index(self) -> Optional[int]:
        """Least ``n`` with every right-nested product of ``n`` elements zero."""
        return len(self.dims) if self.nilpotent else None

    def to_json(self):
        return {"dims": list(self.dims), "nilpotent": self.nilpotent, "index": self.index}


def _span_products(A: StructureAlgebra, left: Sequence[Vector], right: Sequence[Vector]):
    span = SpanBasis()
    out = []
    for v in right:
        for a in left:
            p = A.mul(a, v)
            vec = {k: c for k, c in enumerate(p) if c}
            if vec and span.add(vec):
                out.append(p)
    return out


def lower_central_series(A, kind: str | None = None, dim_bound: int = 64) -> LowerCentralSeries:
    """Series of right-nested powers; nilpotent iff it reaches zero.

    ``A`` is a StructureAlgebra, or a list of operators together with ``kind``
    (their generated algebra is used).
    """
    if not isinstance(A, StructureAlgebra):
        if kind is None:
            raise ValueError("kind is required for an operator family")
        A, _ = algebra_from_operators(list(A), kind, dim_bound)
    basis = [A.basis(i) for i in range(A.dim)]
    dims = [A.dim]
    current = basis
    while dims[-1] > 0:
        current = _span_products(A, basis, current)
        if len(current) == dims[-1]:
            break
        dims.append(len(current))
    return LowerCentralSeries(tuple(dims), dims[-1] == 0)


def strictly_upper_triangular(d: int, field: Field = QQ) -> Tuple[StructureAlgebra, List[Tuple[int, int]]]:
    """Associative algebra of strictly upper triangular ``d x d`` matrices.

    Basis ``e_ij`` (``1 <= i < j <= d``) ordered lexicographically; returns the
    algebra and the index pairs.
    """
    pairs = [(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1)]
    pos = {p: n for n, p in enumerate(pairs)}
    table = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if j == k:
                table[(a, b)] = {pos[(i, l)]: 1}
    names = [f"e{i}{j}" for i, j in pairs]
    return StructureAlgebra(len(pairs), "associative", table, names, field), pairs
