"""Sparse square matrices over E, tagged E-linear or conjugate-linear.

A conjugate-linear operator with matrix M acts by v -> M * conj(v).  Composition
follows from that rule:

    linear M  o linear N  = M N            (linear)
    conj M    o conj N    = M conj(N)      (linear)
    conj M    o linear N  = M conj(N)      (conjugate-linear)
    linear M  o conj N    = M N            (conjugate-linear)
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .fieldtower import Scalar, conj, is_zero

Rows = dict[int, dict[int, Scalar]]


def _prune(rows: Mapping[int, Mapping[int, Scalar]]) -> Rows:
    out: Rows = {}
    for r, row in rows.items():
        kept = {c: v for c, v in row.items() if not is_zero(v)}
        if kept:
            out[r] = kept
    return out


def _conj_rows(rows: Rows) -> Rows:
    return {r: {c: conj(v) for c, v in row.items()} for r, row in rows.items()}


class LinOp:
    __slots__ = ("dim", "rows", "conjugate")

    def __init__(self, dim: int, rows: Mapping[int, Mapping[int, Scalar]] | None = None,
                 conjugate: bool = False):
        self.dim = dim
        self.rows = _prune(rows or {})
        self.conjugate = conjugate

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, dim: int) -> LinOp:
        return cls(dim, {i: {i: 1} for i in range(dim)})

    @classmethod
    def zero(cls, dim: int, conjugate: bool = False) -> LinOp:
        return cls(dim, {}, conjugate)

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[tuple[int, int], Scalar],
                     conjugate: bool = False) -> LinOp:
        rows: Rows = {}
        for (r, c), v in entries.items():
            if not (0 <= r < dim and 0 <= c < dim):
                raise IndexError(f"entry ({r}, {c}) outside a {dim}x{dim} matrix")
            row = rows.setdefault(r, {})
            row[c] = row.get(c, 0) + v
        return cls(dim, rows, conjugate)

    @classmethod
    def from_dense(cls, matrix: list[list[Scalar]], conjugate: bool = False) -> LinOp:
        dim = len(matrix)
        return cls(dim, {r: dict(enumerate(row)) for r, row in enumerate(matrix)}, conjugate)

    # inspection -----------------------------------------------------------

    def entry(self, r: int, c: int) -> Scalar:
        return self.rows.get(r, {}).get(c, 0)

    def entries(self) -> Iterable[tuple[int, int, Scalar]]:
        for r, row in self.rows.items():
            for c, v in row.items():
                yield r, c, v

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def to_dense(self) -> list[list[Scalar]]:
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def conj_entries(self) -> LinOp:
        return LinOp(self.dim, _conj_rows(self.rows), self.conjugate)

    # algebra --------------------------------------------------------------

    def __matmul__(self, other: LinOp) -> LinOp:
        """Composition ``self o other``."""
        if not isinstance(other, LinOp):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        right = _conj_rows(other.rows) if self.conjugate else other.rows
        out: Rows = {}
        for r, row in self.rows.items():
            acc: dict[int, Scalar] = {}
            for k, a in row.items():
                rk = right.get(k)
                if not rk:
                    continue
                for c, b in rk.items():
                    acc[c] = acc.get(c, 0) + a * b
            if acc:
                out[r] = acc
        return LinOp(self.dim, out, self.conjugate != other.conjugate)

    def _combine(self, other: LinOp, sign: int) -> LinOp:
        if not isinstance(other, LinOp):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        if self.conjugate != other.conjugate:
            raise TypeError("cannot add an E-linear and a conjugate-linear operator")
        rows: Rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            target = rows.setdefault(r, {})
            for c, v in row.items():
                target[c] = target.get(c, 0) + (v if sign > 0 else -v)
        return LinOp(self.dim, rows, self.conjugate)

    def __add__(self, other: LinOp) -> LinOp:
        return self._combine(other, 1)

    def __sub__(self, other: LinOp) -> LinOp:
        return self._combine(other, -1)

    def __neg__(self) -> LinOp:
        return LinOp(self.dim, {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()},
                     self.conjugate)

    def scale(self, c: Scalar) -> LinOp:
        """The operator v -> c * self(v)."""
        if is_zero(c):
            return LinOp.zero(self.dim, self.conjugate)
        return LinOp(self.dim, {r: {k: c * v for k, v in row.items()} for r, row in self.rows.items()},
                     self.conjugate)

    def __rmul__(self, c: Scalar) -> LinOp:
        if isinstance(c, LinOp):
            return NotImplemented
        return self.scale(c)

    def __pow__(self, e: int) -> LinOp:
        if e < 1:
            raise ValueError("only positive powers")
        out = self
        for _ in range(e - 1):
            out = out @ self
        return out

    def apply(self, vec: Mapping[int, Scalar] | list) -> dict[int, Scalar]:
        if isinstance(vec, list):
            vec = dict(enumerate(vec))
        if self.conjugate:
            vec = {k: conj(v) for k, v in vec.items()}
        out: dict[int, Scalar] = {}
        for r, row in self.rows.items():
            acc: Scalar = 0
            for c, a in row.items():
                x = vec.get(c)
                if x is not None:
                    acc = acc + a * x
            if not is_zero(acc):
                out[r] = acc
        return out

    def restrict(self, indices: list[int]) -> LinOp:
        """Block on the coordinate subspace ``indices`` (reindexed in order)."""
        pos = {old: new for new, old in enumerate(indices)}
        rows: Rows = {}
        for r, row in self.rows.items():
            if r not in pos:
                continue
            kept = {pos[c]: v for c, v in row.items() if c in pos}
            if kept:
                rows[pos[r]] = kept
        return LinOp(len(indices), rows, self.conjugate)

    # comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinOp):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.conjugate == other.conjugate and self.rows == other.rows

    __hash__ = None

    def __repr__(self) -> str:
        kind = "conj" if self.conjugate else "lin"
        return f"LinOp(dim={self.dim}, {kind}, nnz={self.nnz()})"


def commutator(a: LinOp, b: LinOp) -> LinOp:
    return a @ b - b @ a


def anticommutator(a: LinOp, b: LinOp) -> LinOp:
    return a @ b + b @ a


def scalar_op(dim: int, c: Scalar) -> LinOp:
    return LinOp.identity(dim).scale(c)


HALF = Fraction(1, 2)
