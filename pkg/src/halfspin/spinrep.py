"""so(W, b), the Lie algebra g0 of G(W, b, psi), and the spin lift to End(S+) + End(S-).

Generators use X_{rs} x = b(e_s, x) e_r - b(e_r, x) e_s with the unscaled b;
the lift uses the Clifford relations of the scaled form b' = b/2, so that
rho(X_{rs}) = gamma(e_r) gamma(e_s) - b'(e_r, e_s).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exterior import EVEN, ODD, gamma, restrict_half_spin
from .fieldtower import Scalar, conj, is_zero
from .forms import HermitianData, compatibility_lambda, partner
from .linop import LinOp, scalar_op

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SoGenerator:
    r: int
    s: int
    matrix: LinOp


def _check_pair(r: int, s: int, n: int) -> None:
    for x in (r, s):
        if not 1 <= x <= 2 * n:
            raise IndexError(f"index {x} outside 1..{2 * n}")
    if r == s:
        raise ValueError("X_{rr} is not defined")


@lru_cache(maxsize=None)
def _generator_matrix(r: int, s: int, n: int) -> LinOp:
    # column partner(s) -> +e_r, column partner(r) -> -e_s (0-based storage)
    return LinOp.from_entries(2 * n, {
        (r - 1, partner(s, n) - 1): 1,
        (s - 1, partner(r, n) - 1): -1,
    })


def so_generator(r: int, s: int, n: int) -> SoGenerator:
    _check_pair(r, s, n)
    return SoGenerator(r, s, _generator_matrix(r, s, n))


def generator_pairs(n: int) -> list[tuple[int, int]]:
    return [(r, s) for r in range(1, 2 * n + 1) for s in range(r + 1, 2 * n + 1)]


def preserves_b(x: LinOp, n: int) -> bool:
    """b(Xz, w) + b(z, Xw) = 0 on basis pairs, i.e. X[p(w), z] + X[p(z), w] = 0."""
    # only pairs touching a nonzero entry can fail; entry (row, col) = (p(w), z)
    for row, col, _ in x.entries():
        z, w = col + 1, partner(row + 1, n)
        v = x.entry(row, col) + x.entry(partner(z, n) - 1, w - 1)
        if not is_zero(v):
            return False
    return True


def preserves_psi(x: LinOp, h: HermitianData) -> bool:
    """psi(T e_r, e_s) = -conj(psi(T e_s, e_r)) for all r, s, i.e. a_s T[s,r] = -conj(a_r T[r,s])."""
    pairs = set()
    for row, col, _ in x.entries():
        pairs.add((row, col))
        pairs.add((col, row))
    for s_, r in pairs:
        if h.a[s_] * x.entry(s_, r) != -conj(h.a[r] * x.entry(r, s_)):
            return False
    return True


def decompose(x: LinOp, n: int) -> dict[tuple[int, int], Scalar]:
    """Coordinates of x in so(W, b) with respect to {X_{rs} : r < s}."""
    if x.conjugate:
        raise ValueError("so(W,b) elements are E-linear")
    if not preserves_b(x, n):
        raise ValueError("matrix does not lie in so(W, b)")
    coeffs = {}
    for r, s in generator_pairs(n):
        c = x.entry(r - 1, partner(s, n) - 1)
        if not is_zero(c):
            coeffs[(r, s)] = c
    return coeffs


def combine(coeffs: dict[tuple[int, int], Scalar], n: int) -> LinOp:
    out = LinOp.zero(2 * n)
    for (r, s), c in coeffs.items():
        out = out + so_generator(r, s, n).matrix.scale(c)
    return out


@lru_cache(maxsize=None)
def _spin_generator(r: int, s: int, n: int) -> LinOp:
    op = gamma(r, n) @ gamma(s, n)
    if partner(r, n) == s:
        op = op - scalar_op(1 << n, HALF)
    return op


def spin_lift_full(x, n: int) -> LinOp:
    """rho(x) on the whole exterior algebra; x is a matrix, SoGenerator or {(r, s): coeff}."""
    if isinstance(x, SoGenerator):
        _check_pair(x.r, x.s, n)
        return _spin_generator(x.r, x.s, n)
    coeffs = x if isinstance(x, dict) else decompose(x, n)
    out = LinOp.zero(1 << n)
    for (r, s), c in coeffs.items():
        _check_pair(r, s, n)
        out = out + _spin_generator(r, s, n).scale(c)
    return out


def spin_lift(x, n: int) -> tuple[LinOp, LinOp]:
    """(rho(x) on S+, rho(x) on S-)."""
    full = spin_lift_full(x, n)
    return restrict_half_spin(full, EVEN, n), restrict_half_spin(full, ODD, n)


@dataclass
class G0BasisElement:
    family: int
    i: int
    j: int
    coeffs: dict[tuple[int, int], Scalar]
    w_matrix: LinOp
    spin_full: LinOp
    spin_plus: LinOp
    spin_minus: LinOp

    @property
    def label(self) -> str:
        return f"family{self.family}({self.i},{self.j})"


def g0_basis(h: HermitianData) -> list[G0BasisElement]:
    """E0-basis of g0 in five families; alpha = sqrt(m2) plays the purely imaginary scalar."""
    compatibility_lambda(h)
    n = h.n
    al = h.tower.sqrt_m2()
    a = h.coeff
    terms: list[tuple[int, int, int, dict]] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            terms.append((1, i, j, {(i, j): a(n + i), (n + i, n + j): a(j)}))
            terms.append((2, i, j, {(i, j): al * a(n + i), (n + i, n + j): -al * a(j)}))
            terms.append((3, i, j, {(i, n + j): a(n + i), (j, n + i): -a(n + j)}))
            terms.append((4, i, j, {(i, n + j): al * a(n + i), (j, n + i): al * a(n + j)}))
    for i in range(1, n + 1):
        terms.append((5, i, i, {(i, n + i): al}))
    out = []
    for fam, i, j, coeffs in terms:
        w = combine(coeffs, n)
        full = spin_lift_full(coeffs, n)
        out.append(G0BasisElement(fam, i, j, coeffs, w, full,
                                  restrict_half_spin(full, EVEN, n), restrict_half_spin(full, ODD, n)))
    return out


def lie_bracket(x: LinOp, y: LinOp) -> LinOp:
    return x @ y - y @ x
