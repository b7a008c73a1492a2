"""Subspaces of K^n given by spanning lists of dense vectors."""

from __future__ import annotations

from typing import Sequence

from .fields import QQ
from .matrix import Matrix


class DimensionMismatchError(ValueError):
    """Vectors of different ambient dimension were combined."""


def _ambient(vectors: Sequence[Sequence], n: int | None) -> int | None:
    for v in vectors:
        if n is None:
            n = len(v)
        elif len(v) != n:
            raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {n}")
    return n


def span_basis(vectors: Sequence[Sequence], field=QQ, ambient: int | None = None) -> list[tuple]:
    """Echelon basis of the span of ``vectors``."""
    n = _ambient(vectors, ambient)
    if not vectors:
        return []
    return Matrix.from_rows(vectors, field, ncols=n).row_space_basis()


def dim(vectors: Sequence[Sequence], field=QQ) -> int:
    if not vectors:
        return 0
    _ambient(vectors, None)
    return Matrix.from_rows(vectors, field).rank()


def subspace_sum(U: Sequence[Sequence], W: Sequence[Sequence], field=QQ, ambient: int | None = None) -> list[tuple]:
    n = _ambient(list(U) + list(W), ambient)
    return span_basis(list(U) + list(W), field, n)


def intersect(U: Sequence[Sequence], W: Sequence[Sequence], field=QQ, ambient: int | None = None) -> list[tuple]:
    """Basis of ``span(U) ∩ span(W)``.

    Solves ``sum c_i u_i = sum d_j w_j`` and maps the ``c`` part of each kernel
    vector back into the ambient space.
    """
    n = _ambient(list(U) + list(W), ambient)
    if not U or not W:
        return []
    U = span_basis(U, field, n)
    W = span_basis(W, field, n)
    if not U or not W:
        return []
    cols = list(U) + [tuple(-x for x in w) for w in W]
    A = Matrix.from_columns(cols, n, field)
    ker = A.kernel_basis()
    k = len(U)
    z = field.zero
    vecs = []
    for c in ker:
        v = [z] * n
        for i in range(k):
            if c[i]:
                for t in range(n):
                    if U[i][t]:
                        v[t] += c[i] * U[i][t]
        vecs.append(tuple(field(x) for x in v))
    return span_basis(vecs, field, n)


def quotient_dim(U: Sequence[Sequence], W: Sequence[Sequence], field=QQ, ambient: int | None = None) -> int:
    """``dim U - dim(U ∩ W)``, i.e. the dimension of ``U / (U ∩ W)``."""
    n = _ambient(list(U) + list(W), ambient)
    return len(span_basis(U, field, n)) - len(intersect(U, W, field, n))


def contains(U: Sequence[Sequence], W: Sequence[Sequence], field=QQ) -> bool:
    """True when ``span(W) ⊆ span(U)``."""
    if not W:
        return True
    return dim(list(U) + list(W), field) == dim(U, field)


def equal(U: Sequence[Sequence], W: Sequence[Sequence], field=QQ) -> bool:
    du, dw = dim(U, field), dim(W, field)
    return du == dw and dim(list(U) + list(W), field) == du


def subspace_ops(op: str, U, W, field=QQ):
    """Dispatch ``intersect``, ``sum`` or ``quotient_dim`` by name."""
    if op == "intersect":
        return intersect(U, W, field)
    if op == "sum":
        return subspace_sum(U, W, field)
    if op == "quotient_dim":
        return quotient_dim(U, W, field)
    raise ValueError(f"unknown subspace operation {op!r}")
