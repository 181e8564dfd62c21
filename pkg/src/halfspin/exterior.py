"""The exterior algebra on W1 = span(e_1..e_n) and the Clifford action of W on it.

A blade e_I is stored as the bitmask of I (bit i-1 set for index i), so the
basis of the exterior algebra is indexed by the integers 0..2^n - 1.  With b
scaled so that e_i e_{n+i} + e_{n+i} e_i = 1, the vector e_i (i <= n) acts by
wedge product and e_{n+i} by contraction, with no factor of 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .fieldtower import Scalar, is_zero
from .linop import LinOp

EVEN, ODD = 0, 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def blade(*indices: int) -> int:
    """Mask of e_{i1} ^ ... ^ e_{ik} for 1-based indices."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def blade_indices(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def masks_of_degree(n: int, k: int) -> list[int]:
    return [m for m in range(1 << n) if popcount(m) == k]


@lru_cache(maxsize=None)
def parity_masks(n: int, parity: int) -> tuple[int, ...]:
    """Blade masks spanning the even (S+) or odd (S-) part, ascending."""
    return tuple(m for m in range(1 << n) if popcount(m) % 2 == parity)


def _parity(parity) -> int:
    if parity in (EVEN, "even", "+", "plus"):
        return EVEN
    if parity in (ODD, "odd", "-", "minus"):
        return ODD
    raise ValueError(f"unknown parity {parity!r}")


def _sign_before(mask: int, i: int) -> int:
    """(-1)^{#{j in I : j < i}}."""
    return -1 if popcount(mask & ((1 << (i - 1)) - 1)) % 2 else 1


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"generator index {i} outside 1..{n}")


@lru_cache(maxsize=None)
def wedge_op(i: int, n: int) -> LinOp:
    """l(e_i): e_I -> (-1)^{#{j in I: j<i}} e_{I+i}, or 0 if i in I."""
    _check_index(i, n)
    bit = 1 << (i - 1)
    rows = {}
    for m in range(1 << n):
        if not m & bit:
            rows[m | bit] = {m: _sign_before(m, i)}
    return LinOp(1 << n, rows)


@lru_cache(maxsize=None)
def contraction_op(i: int, n: int) -> LinOp:
    """iota(e_{n+i}): e_I -> (-1)^{#{j in I: j<i}} e_{I-i}, or 0 if i not in I."""
    _check_index(i, n)
    bit = 1 << (i - 1)
    rows = {}
    for m in range(1 << n):
        if m & bit:
            rows[m ^ bit] = {m: _sign_before(m, i)}
    return LinOp(1 << n, rows)


def gamma(r: int, n: int) -> LinOp:
    """Action of the basis vector e_r of W (1 <= r <= 2n)."""
    if not 1 <= r <= 2 * n:
        raise IndexError(f"basis index {r} outside 1..{2 * n}")
    return wedge_op(r, n) if r <= n else contraction_op(r - n, n)


def clifford_gamma(v, n: int) -> LinOp:
    """gamma(v) for v = sum v_r e_r given as a length-2n sequence (or {r: coeff}, 1-based)."""
    if isinstance(v, dict):
        items = v.items()
    else:
        if len(v) != 2 * n:
            raise ValueError(f"expected {2 * n} coordinates, got {len(v)}")
        items = ((r + 1, c) for r, c in enumerate(v))
    out = LinOp.zero(1 << n)
    for r, c in items:
        if not is_zero(c):
            out = out + gamma(r, n).scale(c)
    return out


def degree_projector(n: int, k: int) -> LinOp:
    return LinOp(1 << n, {m: {m: 1} for m in masks_of_degree(n, k)})


def degree_profile(op: LinOp) -> set[int]:
    """Set of blade-degree shifts d with a nonzero component in End^d."""
    return {popcount(r) - popcount(c) for r, c, _ in op.entries()}


def restrict_half_spin(op: LinOp, parity, n: int) -> LinOp:
    """Block of a parity-preserving operator on S+ (even) or S- (odd)."""
    p = _parity(parity)
    if op.dim != 1 << n:
        raise ValueError(f"operator has dimension {op.dim}, expected {1 << n}")
    if any(d % 2 for d in degree_profile(op)):
        raise ValueError("operator mixes parities; it has odd-degree components")
    return op.restrict(list(parity_masks(n, p)))


def embed_half_spin(op: LinOp, parity, n: int) -> LinOp:
    """Inverse of :func:`restrict_half_spin`: extend by zero on the other parity."""
    masks = parity_masks(n, _parity(parity))
    rows = {masks[r]: {masks[c]: v for c, v in row.items()} for r, row in op.rows.items()}
    return LinOp(1 << n, rows, op.conjugate)


@dataclass
class SpinorVector:
    n: int
    coeffs: dict[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {m: c for m, c in self.coeffs.items() if not is_zero(c)}

    @property
    def parity(self) -> str:
        ps = {popcount(m) % 2 for m in self.coeffs}
        if not ps or ps == {0}:
            return "even"
        if ps == {1}:
            return "odd"
        return "mixed"

    def apply(self, op: LinOp) -> SpinorVector:
        return SpinorVector(self.n, op.apply(self.coeffs))

    def __eq__(self, other) -> bool:
        return isinstance(other, SpinorVector) and self.n == other.n and self.coeffs == other.coeffs
