"""The conjugate-linear Hodge star on the exterior algebra of W1 and the operators L+-.

The star is fixed by  x ^ star(y) = psi(x, y) vol  with vol = e_1 ^ ... ^ e_n and
psi(e_I, e_J) = delta_{IJ} a_I, which forces star(e_I) = sgn(I, I') a_I e_{I'}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import EVEN, ODD, contraction_op, degree_projector, restrict_half_spin, wedge_op
from .fieldtower import FieldElement, Scalar
from .forms import HermitianData, compatibility_lambda, discriminant
from .linop import LinOp, scalar_op


def shuffle_sign(mask: int, n: int) -> int:
    """Sign of the permutation sorting (I ascending, I' ascending) into (1..n)."""
    inversions = 0
    ones_seen = 0
    # every complement index j counts the elements of I above it
    for i in range(n - 1, -1, -1):
        if mask >> i & 1:
            ones_seen += 1
        else:
            inversions += ones_seen
    return -1 if inversions % 2 else 1


def _a_prod(h: HermitianData, mask: int) -> Scalar:
    p: Scalar = 1
    for i in range(h.n):
        if mask >> i & 1:
            p = p * h.a[i]
    return p


@dataclass
class StarOperator:
    op: LinOp
    h: HermitianData

    def star_star_scalar(self, k: int) -> FieldElement:
        """(-1)^{k(n-k)} D."""
        n = self.h.n
        return discriminant(self.h) * _neg1(k * (n - k))


def hodge_star(h: HermitianData) -> StarOperator:
    n = h.n
    full = (1 << n) - 1
    rows = {}
    for m in range(1 << n):
        rows[full ^ m] = {m: shuffle_sign(m, n) * _a_prod(h, m)}
    return StarOperator(LinOp(1 << n, rows, conjugate=True), h)


def star_star_holds(star: StarOperator) -> bool:
    op, n = star.op, star.h.n
    sq = op @ op
    for k in range(n + 1):
        P = degree_projector(n, k)
        if sq @ P != P.scale(star.star_star_scalar(k)):
            return False
    return True


def starcomps_identities(h: HermitianData, k: int, i: int) -> dict[str, tuple[LinOp, LinOp]]:
    """Both sides of the four star/Clifford commutation identities on degree k, index i.

    The sign exponents are the ones valid for even n; for odd n the two
    contraction identities acquire an extra factor -1.
    """
    n = h.n
    lam = compatibility_lambda(h)
    D = discriminant(h)
    star = hodge_star(h).op
    P = degree_projector(n, k)
    l_i, io_i = wedge_op(i, n), contraction_op(i, n)
    ai, ani = h.coeff(i), h.coeff(n + i)
    lam_inv = lam.inverse()
    return {
        "star_l_star": (star @ l_i @ star @ P,
                        (io_i @ P).scale(D * ai * _neg1(n * (k + 1)))),
        "star_iota_star": (star @ io_i @ star @ P,
                           (l_i @ P).scale(D * lam_inv * ani * _neg1(n * k + 1))),
        "star_l": (star @ l_i @ P, (io_i @ star @ P).scale(ai * _neg1(k))),
        "star_iota": (star @ io_i @ P,
                      (l_i @ star @ P).scale(lam_inv * ani * _neg1(k + n + 1))),
    }


def check_starcomps(h: HermitianData, k: int | None = None) -> list[tuple[int, int, str]]:
    """Failures (k, i, identity-name) among the star identities; empty list means all hold."""
    ks = range(h.n + 1) if k is None else [k]
    bad = []
    for kk in ks:
        for i in range(1, h.n + 1):
            for name, (lhs, rhs) in starcomps_identities(h, kk, i).items():
                if lhs != rhs:
                    bad.append((kk, i, name))
    return bad


def _neg1(e: int) -> int:
    return -1 if e % 2 else 1


def floor_half(x: int) -> int:
    return x // 2


@dataclass
class LOperator:
    sign: str  # "+" or "-"
    op: LinOp  # on the half-spin block, size 2^{n-1}
    full: LinOp  # same operator on the whole exterior algebra, zero off the block
    scalar_expected: FieldElement

    @property
    def parity(self) -> int:
        return EVEN if self.sign == "+" else ODD


def L_scalar(h: HermitianData, sign: str) -> FieldElement:
    """(-1)^m D on the block whose degrees have the parity of m, (-1)^m D lambda on the other."""
    n = h.n
    m = n // 2
    lam = compatibility_lambda(h)
    D = discriminant(h) * _neg1(m)
    parity = EVEN if sign == "+" else ODD
    return D if parity == m % 2 else D * lam


def build_L(h: HermitianData, sign: str) -> LOperator:
    """L restricted to degree k is (-1)^d lambda^{-d} star with d = floor((k - m)/2)."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    n = h.n
    if n % 2:
        raise ValueError("n must be even")
    m = n // 2
    lam = compatibility_lambda(h)
    star = hodge_star(h).op
    parity = EVEN if sign == "+" else ODD
    full = LinOp.zero(1 << n, conjugate=True)
    for k in range(parity, n + 1, 2):
        d = floor_half(k - m)
        c = lam ** (-d) * _neg1(d)
        full = full + (star @ degree_projector(n, k)).scale(c)
    block = restrict_half_spin(full, parity, n)
    return LOperator(sign, block, full, L_scalar(h, sign))


def L_squared_holds(L: LOperator) -> bool:
    return L.op @ L.op == scalar_op(L.op.dim, L.scalar_expected)


@dataclass
class CommutationResult:
    ok: bool
    checked: int
    counterexample: str | None = None


def check_commutes_g0(L: LOperator, basis) -> CommutationResult:
    """L o rho(T) = rho(T) o L on the block of L, for every T in ``basis``."""
    for idx, t in enumerate(basis):
        rho = t.spin_plus if L.sign == "+" else t.spin_minus
        if rho.dim != L.op.dim:
            raise ValueError(f"dimension mismatch: {rho.dim} vs {L.op.dim}")
        if L.op @ rho != rho @ L.op:
            return CommutationResult(False, idx + 1, getattr(t, "label", repr(t)))
    return CommutationResult(True, len(basis))


def graded_commutation_failures(L: LOperator, basis) -> list[tuple[str, int, int]]:
    """Degree-by-degree comparison of L rho(T) and rho(T) L.

    Each (source degree k, target degree) component is compared separately,
    which splits every commutation into the term identities used when the
    operators are expanded in wedge and contraction pieces.
    """
    n = L.full.dim.bit_length() - 1
    bad = []
    for t in basis:
        lt = L.full @ t.spin_full
        tl = t.spin_full @ L.full
        for k in range(L.parity, n + 1, 2):
            Pk = degree_projector(n, k)
            for k2 in range(L.parity, n + 1, 2):
                Q = degree_projector(n, k2)
                if Q @ lt @ Pk != Q @ tl @ Pk:
                    bad.append((t.label, k, k2))
    return bad


def displayed_chain_holds(h: HermitianData, i: int, j: int, k: int) -> bool:
    """(-1)^{d-1} lam^{1-d} a_j star iota_i iota_j = (-1)^d lam^{-d} a_{n+i} l_i l_j star on degree k."""
    n = h.n
    m = n // 2
    d = floor_half(k - m)
    lam = compatibility_lambda(h)
    star = hodge_star(h).op
    P = degree_projector(n, k)
    lhs = (star @ contraction_op(i, n) @ contraction_op(j, n) @ P).scale(
        lam ** (1 - d) * h.coeff(j) * _neg1(d - 1))
    rhs = (wedge_op(i, n) @ wedge_op(j, n) @ star @ P).scale(
        lam ** (-d) * h.coeff(n + i) * _neg1(d))
    return lhs == rhs

