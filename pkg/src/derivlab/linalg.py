"""Exact incremental row reduction over sparse coordinate vectors.

Vectors are dicts mapping sortable keys to nonzero field elements.  The
reduction is deterministic: a row's pivot is its smallest key.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

SparseVec = Dict[Hashable, object]


def _axpy(target: SparseVec, c, row: SparseVec) -> None:
    """target -= c * row, in place, dropping zeros."""
    for k, v in row.items():
        if k in target:
            nv = target[k] - c * v
            if nv:
                target[k] = nv
            else:
                del target[k]
        else:
            target[k] = -c * v


class SpanBasis:
    """Echelon basis of a growing subspace.

    Each accepted vector gets an index (its position among accepted vectors);
    :meth:`coordinates` expresses a vector in terms of the accepted originals.
    """

    def __init__(self):
        self._rows: List[Tuple[Hashable, SparseVec, Dict[int, object]]] = []
        self.originals: List[SparseVec] = []

    def __len__(self):
        return len(self.originals)

    def _reduce(self, vec: SparseVec):
        v = dict(vec)
        combo: Dict[int, object] = {}
        for pivot, row, expr in self._rows:
            c = v.get(pivot)
            if c:
                _axpy(v, c, row)
                for idx, e in expr.items():
                    nv = combo.get(idx, 0) + c * e
                    if nv:
                        combo[idx] = nv
                    else:
                        combo.pop(idx, None)
        return v, combo

    def contains(self, vec: SparseVec) -> bool:
        rest, _ = self._reduce(vec)
        return not rest

    def add(self, vec: SparseVec) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        rest, combo = self._reduce(vec)
        if not rest:
            return False
        idx = len(self.originals)
        self.originals.append(dict(vec))
        # rest = vec - sum(combo[i] * originals[i])
        expr = {i: -c for i, c in combo.items()}
        expr[idx] = 1
        pivot = min(rest)
        inv = 1 / rest[pivot]
        row = {k: c * inv for k, c in rest.items()}
        expr = {i: c * inv for i, c in expr.items()}
        self._rows.append((pivot, row, expr))
        return True

    def coordinates(self, vec: SparseVec) -> Optional[Dict[int, object]]:
        """Coefficients c_i with vec = sum c_i * originals[i], or None if outside the span."""
        rest, combo = self._reduce(vec)
        if rest:
            return None
        return combo


def closure(
    gens: Sequence,
    product: Callable,
    to_vec: Callable,
    dim_bound: int,
    left_only: bool = True,
):
    """Span of everything generated from ``gens`` under ``product``.

    With ``left_only`` the saturation uses products ``g * b`` with ``g`` a
    generator; this suffices for associative and Lie algebras because
    right-nested words over a generating set span the generated subalgebra.
    Returns ``(basis_elements, SpanBasis, exceeded)``; when ``exceeded`` the
    basis is the partial one reached before crossing ``dim_bound``.
    """
    span = SpanBasis()
    basis: List = []
    queue: List = []
    for g in gens:
        if span.add(to_vec(g)):
            basis.append(g)
            queue.append(g)
            if len(basis) > dim_bound:
                return basis, span, True
    pos = 0
    while pos < len(queue):
        b = queue[pos]
        pos += 1
        partners = gens if left_only else list(basis)
        for g in partners:
            for prod in ((product(g, b),) if left_only else (product(g, b), product(b, g))):
                if span.add(to_vec(prod)):
                    basis.append(prod)
                    queue.append(prod)
                    if len(basis) > dim_bound:
                        return basis, span, True
    return basis, span, False
