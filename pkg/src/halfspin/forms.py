"""The bilinear form b, diagonal Hermitian forms psi, and the operator J.

Throughout, W = E^{2n} with basis e_1..e_{2n} and b(e_i, e_{n+i}) = 1 (all other
pairings zero).  A Hermitian form is recorded by its diagonal coefficients
a_1..a_{2n} in E0, so psi(z, w) = sum a_i z_i conj(w_i).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import _linalg
from .fieldtower import (FieldElement, NormVerdict, Scalar, TowerSpec, as_element, conj, is_norm,
                         is_zero, random_element)
from .linop import LinOp, scalar_op


class NotCompatible(ValueError):
    """The products a_i * a_{n+i} are not all equal."""


@dataclass(frozen=True)
class HermitianData:
    n: int
    a: tuple[Scalar, ...]
    tower: TowerSpec

    def __post_init__(self):
        a = tuple(self.a)
        object.__setattr__(self, "a", a)
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(a) != 2 * self.n:
            raise ValueError(f"need {2 * self.n} coefficients, got {len(a)}")
        for i, x in enumerate(a, 1):
            if is_zero(x):
                raise ValueError(f"coefficient a_{i} is zero")
            if isinstance(x, FieldElement) and not x.in_base:
                raise ValueError(f"coefficient a_{i} = {x} is not in E0")

    def coeff(self, i: int) -> Scalar:
        """a_i, 1-based."""
        return self.a[i - 1]

    @property
    def w1_coeffs(self) -> tuple[Scalar, ...]:
        return self.a[: self.n]


def build_psi_delta_k(n: int, k: int, delta: Scalar, tower: TowerSpec) -> HermitianData:
    """Coefficients (delta^k, 1^{n-k}, (-1)^k, (-delta)^{n-k}) of psi_{delta,k}.

    k = 0 is accepted and gives the form with no delta-entries on W1.
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    if is_zero(delta):
        raise ValueError("delta must be nonzero")
    delta = as_element(delta, tower)
    one = tower(1)
    a = [delta] * k + [one] * (n - k) + [-one] * k + [-delta] * (n - k)
    return HermitianData(n, tuple(a), tower)


def compatibility_lambda(h: HermitianData) -> Scalar:
    """The common value of a_i * a_{n+i}; J^2 = lambda * Id."""
    products = [h.a[i] * h.a[h.n + i] for i in range(h.n)]
    lam = products[0]
    for i, p in enumerate(products[1:], 2):
        if p != lam:
            raise NotCompatible(f"a_1 a_{{n+1}} = {lam} but a_{i} a_{{n+{i}}} = {p}")
    return as_element(lam, h.tower)


def is_compatible(h: HermitianData) -> bool:
    try:
        compatibility_lambda(h)
    except NotCompatible:
        return False
    return True


def discriminant(h: HermitianData) -> FieldElement:
    d = h.tower(1)
    for x in h.w1_coeffs:
        d = d * x
    return d


def partner(r: int, n: int) -> int:
    """Index s with b(e_r, e_s) = 1."""
    return r + n if r <= n else r - n


def b_gram(n: int) -> list[list[int]]:
    return [[1 if c == partner(r, n) else 0 for c in range(1, 2 * n + 1)] for r in range(1, 2 * n + 1)]


def psi_gram(h: HermitianData) -> list[list[Scalar]]:
    m = 2 * h.n
    return [[h.a[r] if r == c else 0 for c in range(m)] for r in range(m)]


def build_J(h: HermitianData) -> LinOp:
    """Conjugate-linear J = B^{-1} Psi with J e_i = a_i e_{n+i}, J e_{n+i} = a_{n+i} e_i."""
    n = h.n
    entries = {}
    for i in range(n):
        entries[(n + i, i)] = h.a[i]
        entries[(i, n + i)] = h.a[n + i]
    return LinOp.from_entries(2 * n, entries, conjugate=True)


def dual_form_grams(h: HermitianData) -> tuple[list[list[Scalar]], list[list[Scalar]]]:
    """Gram matrices, in the dual basis e_i^*, of b-dual and of b-bar transported by Psi.

    With B e_j = sum_i b(e_j, e_i) e_i^* and Psi(v) = P conj(v), P the Gram
    matrix of psi:  b-dual = B^{-T} G B^{-1}  and  b-bar_Psi = P^{-T} conj(G) P^{-1}.
    """
    g = b_gram(h.n)
    bmat = _linalg.transpose(g)
    binv = _linalg.inverse(bmat)
    bdual = _linalg.matmul(_linalg.matmul(_linalg.transpose(binv), g), binv)
    pinv = _linalg.inverse(psi_gram(h))
    gbar = [[conj(x) for x in row] for row in g]
    bbar = _linalg.matmul(_linalg.matmul(_linalg.transpose(pinv), gbar), pinv)
    return bdual, bbar


def dual_form_lambda(h: HermitianData) -> Scalar | None:
    """lambda in E0 with b-bar_Psi = lambda^{-1} b-dual, or None if there is none."""
    bdual, bbar = dual_form_grams(h)
    lam = None
    for row_d, row_b in zip(bdual, bbar):
        for xd, xb in zip(row_d, row_b):
            if is_zero(xb) != is_zero(xd):
                return None
            if is_zero(xb):
                continue
            ratio = as_element(xd, h.tower) / as_element(xb, h.tower)
            if lam is None:
                lam = ratio
            elif ratio != lam:
                return None
    if lam is None or not lam.in_base:
        return None
    return lam


def dual_form_check(h: HermitianData) -> bool:
    return dual_form_lambda(h) is not None


# --- good-basis permutations --------------------------------------------------


@dataclass(frozen=True)
class GoodBasisPerm:
    swapped: frozenset[int]
    a: int
    r: int
    t: int
    s: int

    @property
    def swap_count(self) -> int:
        return len(self.swapped)


def swap_basis(h: HermitianData, swapped) -> HermitianData:
    """Exchange e_i and e_{n+i} for every i in ``swapped`` (1-based)."""
    a = list(h.a)
    for i in swapped:
        if not 1 <= i <= h.n:
            raise IndexError(f"swap index {i} outside 1..{h.n}")
        a[i - 1], a[h.n + i - 1] = a[h.n + i - 1], a[i - 1]
    return HermitianData(h.n, tuple(a), h.tower)


def permute_good_basis(h: HermitianData, k: int, a: int, r: int) -> tuple[HermitianData, GoodBasisPerm]:
    """Keep e_1..e_a and e_{k+1}..e_{k+r}; swap the rest of W1 with its partners.

    For h = psi_{delta,k} the new discriminant is (-1)^{t+s} delta^{a+s} with
    t = k - a and s = n - k - r.
    """
    n = h.n
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    if not 0 <= a <= k:
        raise ValueError(f"a={a} outside 0..{k}")
    if not 0 <= r <= n - k:
        raise ValueError(f"r={r} outside 0..{n - k}")
    swapped = frozenset(range(a + 1, k + 1)) | frozenset(range(k + r + 1, n + 1))
    perm = GoodBasisPerm(swapped, a, r, k - a, n - k - r)
    return swap_basis(h, swapped), perm


# --- restriction of scalars ----------------------------------------------------


def _base_parts(x: Scalar, tower: TowerSpec) -> tuple[Scalar, Scalar]:
    """(p, q) in E0 with x = p + q sqrt(m2)."""
    if isinstance(x, FieldElement):
        c = x.c
        p = c[0] if c[1] == 0 else tower(c[0], c[1])
        q = c[2] if c[3] == 0 else tower(c[2], c[3])
        return p, q
    return x, 0


def res_matrix(op: LinOp, tower: TowerSpec) -> LinOp:
    """The E0-linear matrix of ``op`` on Res_{E/E0}, basis e_j -> 2j, sqrt(m2) e_j -> 2j+1."""
    m2 = tower.m2_element() if tower.m2[1] != 0 else tower.m2[0]
    sign = -1 if op.conjugate else 1
    entries: dict[tuple[int, int], Scalar] = {}

    def put(r, c, v):
        if not is_zero(v):
            entries[(r, c)] = entries.get((r, c), 0) + v

    for r, c, x in op.entries():
        p, q = _base_parts(x, tower)
        put(2 * r, 2 * c, p)
        put(2 * r + 1, 2 * c, q)
        put(2 * r, 2 * c + 1, sign * q * m2)
        put(2 * r + 1, 2 * c + 1, sign * p)
    return LinOp.from_entries(2 * op.dim, entries)


def res_scalar(x: Scalar, dim: int, tower: TowerSpec) -> LinOp:
    """Multiplication by x in E on Res_{E/E0} of an E-space of dimension ``dim``."""
    return res_matrix(scalar_op(dim, x), tower)


@dataclass
class StandardRepReport:
    lam: FieldElement
    j_squared_ok: bool
    product_identity_ok: bool
    product_trials: int
    commutes_ok: bool
    commute_checks: int
    norm_verdict: NormVerdict
    verdict: str  # "defined" | "not_defined" | "undetermined"
    zero_divisor_rank: int | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.j_squared_ok and self.product_identity_ok and self.commutes_ok


def _w_matrix(t) -> LinOp:
    return t if isinstance(t, LinOp) else t.w_matrix


def standard_rep_analysis(h: HermitianData, basis: Sequence = (), *, trials: int = 100,
                          rng: random.Random | None = None, norm_oracle=None) -> StandardRepReport:
    """Computable content of the statement that End(Res W) = E[J].

    Checks J^2 = lambda, the product rule (a + bJ)(conj a - bJ) = a conj(a) - lambda b conj(b)
    on random a, b, and that J commutes with every element of ``basis``; the
    standard representation is defined over E0 iff lambda is a norm.
    """
    rng = rng or random.Random(0)
    tower = h.tower
    lam = compatibility_lambda(h)
    dim = 2 * h.n
    J = build_J(h)
    failures: list[str] = []

    j_sq = (J @ J) == scalar_op(dim, lam)
    if not j_sq:
        failures.append("J^2 != lambda Id")

    RJ = res_matrix(J, tower)
    prod_ok = True
    for t in range(trials):
        al = random_element(tower, rng)
        be = random_element(tower, rng)
        lhs = (res_scalar(al, dim, tower) + res_scalar(be, dim, tower) @ RJ) @ (
            res_scalar(al.conj(), dim, tower) - res_scalar(be, dim, tower) @ RJ)
        value = al * al.conj() - lam * be * be.conj()
        if not value.in_base or lhs != res_scalar(value, dim, tower):
            prod_ok = False
            failures.append(f"product identity fails for alpha={al}, beta={be}")
            break

    comm_ok = True
    for t in basis:
        T = _w_matrix(t)
        RT = res_matrix(T, tower)
        if RJ @ RT != RT @ RJ or J @ T != T @ J:
            comm_ok = False
            failures.append(f"J does not commute with {getattr(t, 'label', t)}")
            break

    nv = (norm_oracle or (lambda x: is_norm(x, tower)))(lam)
    verdict = {"norm": "defined", "not_norm": "not_defined"}.get(nv.kind, "undetermined")
    zd_rank = None
    if nv.is_norm and nv.witness is not None:
        # c + J is a nonzero zero divisor when Nm(c) = lambda
        zd = res_scalar(nv.witness, dim, tower) + RJ
        zd_rank = _linalg.rank(zd.to_dense())
        if zd_rank >= 2 * dim:
            failures.append("c + J is invertible although lambda = Nm(c)")
    return StandardRepReport(lam, j_sq, prod_ok, trials, comm_ok, len(basis), nv, verdict,
                             zd_rank, failures)


def random_diagonal_form(n: int, tower: TowerSpec, rng: random.Random, *, compatible: bool = True,
                         height: int = 4) -> HermitianData:
    """Random nonzero E0 coefficients; if ``compatible`` then a_i a_{n+i} is constant."""
    first = [random_element(tower, rng, height, base=True, nonzero=True) for _ in range(n)]
    if compatible:
        lam = random_element(tower, rng, height, base=True, nonzero=True)
        second = [lam / x for x in first]
    else:
        second = [random_element(tower, rng, height, base=True, nonzero=True) for _ in range(n)]
    return HermitianData(n, tuple(first + second), tower)
