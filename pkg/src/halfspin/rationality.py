"""Deciding when the half-spin representations descend from E to E0.

Everything here is bookkeeping on top of the operator checks in
:mod:`halfspin.hodgestar`: the squares of L+- give two scalars in E0, a
representation descends iff its scalar is a norm, and a change of good basis
that swaps an odd number of pairs exchanges S+ and S-.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable

from . import _linalg
from .exterior import EVEN, ODD, parity_masks
from .fieldtower import (FieldElement, NormVerdict, Scalar, TowerSpec, _rational_sqrt, as_element, embed_sign,
                         is_norm, norm_to_base, sqrt_in_base)
from .forms import (GoodBasisPerm, HermitianData, b_gram, build_J, build_psi_delta_k, compatibility_lambda,
                    discriminant, permute_good_basis, swap_basis)
from .hodgestar import L_squared_holds, build_L, check_commutes_g0
from .linop import scalar_op
from .spinrep import g0_basis, so_generator, spin_lift

NormOracle = Callable[[Scalar], NormVerdict]

DEFINED, NOT_DEFINED, UNDETERMINED = "defined", "not_defined", "undetermined"


class CheckFailed(RuntimeError):
    def __init__(self, check: str, counterexample):
        super().__init__(f"{check} failed: {counterexample}")
        self.check = check
        self.counterexample = counterexample


@dataclass(frozen=True)
class Definability:
    status: str
    scalar: Scalar
    witness: Scalar | None = None

    @property
    def defined(self) -> bool:
        return self.status == DEFINED


@dataclass(frozen=True)
class RationalityVerdict:
    s_plus: Definability
    s_minus: Definability
    scalars: tuple[Scalar, Scalar]  # ((-1)^m D, (-1)^m D lambda)
    case_label: str

    def swapped(self) -> RationalityVerdict:
        return RationalityVerdict(self.s_minus, self.s_plus, self.scalars,
                                  _case_label(self.s_minus, self.s_plus))


def _definability(v: NormVerdict, scalar: Scalar) -> Definability:
    if v.is_norm:
        return Definability(DEFINED, scalar, v.witness)
    if v.is_not_norm:
        return Definability(NOT_DEFINED, scalar)
    return Definability(UNDETERMINED, scalar)


def _case_label(plus: Definability, minus: Definability) -> str:
    if UNDETERMINED in (plus.status, minus.status):
        return "unknown"
    return {(True, True): "i", (True, False): "ii", (False, True): "iii",
            (False, False): "iv"}[(plus.defined, minus.defined)]


def classify_rationality(m: int, D: Scalar, lam: Scalar, norm_oracle: NormOracle) -> RationalityVerdict:
    """Assign the two L-square scalars to S+ and S- by the parity of m and query the oracle."""
    sgn = -1 if m % 2 else 1
    c_d = D * sgn
    c_dl = D * lam * sgn
    v_d, v_dl = norm_oracle(c_d), norm_oracle(c_dl)
    if m % 2 == 0:
        plus, minus = _definability(v_d, c_d), _definability(v_dl, c_dl)
    else:
        plus, minus = _definability(v_dl, c_dl), _definability(v_d, c_d)
    return RationalityVerdict(plus, minus, (c_d, c_dl), _case_label(plus, minus))


def field_oracle(tower: TowerSpec) -> NormOracle:
    return lambda x: is_norm(x, tower)


def real_sign_oracle(embedding: int = 1, tower: TowerSpec | None = None) -> NormOracle:
    """Norms from C to R are exactly the positive reals."""

    def oracle(x: Scalar) -> NormVerdict:
        s = embed_sign(x, embedding, tower if not isinstance(x, FieldElement) else None)
        if s <= 0:
            return NormVerdict("not_norm", certificate={"kind": "embedding_sign", "embedding": embedding,
                                                        "sign": s})
        witness = None
        if isinstance(x, FieldElement):
            witness = sqrt_in_base(x, x.tower)
        else:
            witness = _rational_sqrt(Fraction(x))
        return NormVerdict("norm", witness=witness)

    return oracle


# --- weights ----------------------------------------------------------------


def weights_half_spin(n: int, sign: str) -> list[tuple[Fraction, ...]]:
    """All (+-1/2, ..., +-1/2) with an even (S+) or odd (S-) number of minus signs."""
    if n % 2:
        raise ValueError("n must be even")
    want = 0 if sign == "+" else 1
    h = Fraction(1, 2)
    return sorted(w for w in product((h, -h), repeat=n) if sum(x < 0 for x in w) % 2 == want)


def weights_from_cartan(n: int, sign: str) -> list[tuple[Fraction, ...]]:
    """Eigenvalues of rho(X_{i,n+i}), i = 1..n, on the blade basis of S+ or S-."""
    parity = EVEN if sign == "+" else ODD
    diag = [spin_lift(so_generator(i, n + i, n), n)[parity] for i in range(1, n + 1)]
    out = []
    for idx in range(len(parity_masks(n, parity))):
        w = []
        for op in diag:
            if set(op.rows.get(idx, {})) - {idx}:
                raise ValueError("Cartan element is not diagonal on blades")
            w.append(Fraction(op.entry(idx, idx)))
        out.append(tuple(w))
    return sorted(out)


@dataclass(frozen=True)
class FlipResult:
    flipped: frozenset[int]
    image: str  # which weight multiset phi(X(S+)) equals: "+" or "-"
    expected: str

    @property
    def ok(self) -> bool:
        return self.image == self.expected


def flip_weights_check(n: int, flipped) -> FlipResult:
    """Negate the coordinates in ``flipped`` on the weights of S+ and identify the image."""
    flipped = frozenset(flipped)
    if any(not 1 <= i <= n for i in flipped):
        raise IndexError("flip index out of range")
    plus = Counter(weights_half_spin(n, "+"))
    minus = Counter(weights_half_spin(n, "-"))
    image = Counter(tuple(-x if i + 1 in flipped else x for i, x in enumerate(w)) for w in plus.elements())
    if image == plus:
        got = "+"
    elif image == minus:
        got = "-"
    else:
        got = "?"
    return FlipResult(flipped, got, "+" if len(flipped) % 2 == 0 else "-")


def all_flip_checks(n: int) -> list[FlipResult]:
    return [flip_weights_check(n, c) for size in range(n + 1) for c in combinations(range(1, n + 1), size)]


# --- real forms ---------------------------------------------------------------


@dataclass(frozen=True)
class RealFormReport:
    embedding: int
    delta_sign: int
    kind: str  # "SOstar" | "SOpq"
    group: tuple[int, ...]  # (2n,) for SO*(2n); (p, q) with p <= q for SO(p, q)
    signature_psi: tuple[int, int]

    @property
    def label(self) -> str:
        if self.kind == "SOstar":
            return f"SO*({self.group[0]})"
        return f"SO({self.group[0]},{self.group[1]})"


def psi_signature(h: HermitianData, embedding: int) -> tuple[int, int]:
    signs = [embed_sign(as_element(x, h.tower), embedding) for x in h.a]
    return sum(s > 0 for s in signs), sum(s < 0 for s in signs)


def real_form(h: HermitianData, delta: Scalar, k: int, embedding: int) -> RealFormReport:
    n = h.n
    ds = embed_sign(as_element(delta, h.tower), embedding)
    if ds == 0:
        raise ValueError("sigma_i(delta) = 0")
    sig = psi_signature(h, embedding)
    if ds > 0:
        return RealFormReport(embedding, ds, "SOstar", (2 * n,), sig)
    p, q = sorted((2 * n - 2 * k, 2 * k))
    return RealFormReport(embedding, ds, "SOpq", (p, q), sig)


@dataclass
class WPlusReport:
    n: int
    k: int
    vectors: list[list[FieldElement]]
    diagonal: list[Scalar]
    signature: tuple[int, int]
    j_fixed: bool
    diagonal_ok: bool
    real_rank: int


def w_plus_analysis(n: int, k: int) -> WPlusReport:
    """Real basis of the +1 eigenspace of J for psi_{-1,k} over C = Q(i), and b on it."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    tower = TowerSpec.make(None, -1)
    i_ = tower.sqrt_m2()
    one, zero = tower(1), tower(0)
    h = build_psi_delta_k(n, k, tower(-1), tower)
    vecs = []
    for idx in range(1, n + 1):
        ei = [zero] * (2 * n)
        ej = [zero] * (2 * n)
        if idx > k:
            ei[idx - 1], ei[n + idx - 1] = one, one
            ej[idx - 1], ej[n + idx - 1] = i_, -i_
        else:
            ei[idx - 1], ei[n + idx - 1] = i_, i_
            ej[idx - 1], ej[n + idx - 1] = one, -one
        vecs += [ei, ej]
    J = build_J(h)
    j_fixed = all(J.apply(v) == {c: x for c, x in enumerate(v) if x} for v in vecs)
    g = b_gram(n)

    def b(u, v):
        return sum((u[r] * g[r][c] * v[c] for r in range(2 * n) for c in range(2 * n) if g[r][c]), zero)

    gram = [[b(u, v) for v in vecs] for u in vecs]
    diag = [gram[r][r] for r in range(2 * n)]
    off_ok = all(gram[r][c] == 0 for r in range(2 * n) for c in range(2 * n) if r != c)
    diag_ok = off_ok and all(x in (2, -2) for x in diag)
    # real independence: rank of the 4n real coordinates
    coords = [[x.c[j] for x in v for j in (0, 2)] for v in vecs]
    rk = _linalg.rank(coords)
    sig = (sum(x == 2 for x in diag), sum(x == -2 for x in diag))
    return WPlusReport(n, k, vecs, diag, sig, j_fixed, diag_ok, rk)


# --- the real case table ------------------------------------------------------


@dataclass(frozen=True)
class RealcaseRow:
    group: str
    m: int
    k: int | None
    s_plus: bool
    s_minus: bool
    expected_plus: bool
    expected_minus: bool

    @property
    def agrees(self) -> bool:
        return (self.s_plus, self.s_minus) == (self.expected_plus, self.expected_minus)


def realcase_table(m: int, k: int) -> list[RealcaseRow]:
    """Rows for SO*(4m) and SO(4m - 2k, 2k), computed through classify_rationality."""
    n = 2 * m
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    tower = TowerSpec.make(None, -1)
    oracle = real_sign_oracle(1, tower)
    rows = []

    # SO*(4m): psi_0, then swap m pairs so that D = (-1)^m
    h0 = build_psi_delta_k(n, k, tower(1), tower)
    swapped = range(1, m + 1)
    h1 = swap_basis(h0, swapped)
    v = classify_rationality(m, discriminant(h1), compatibility_lambda(h1), oracle)
    if m % 2:
        v = v.swapped()
    rows.append(RealcaseRow(f"SO*({2 * n})", m, None, v.s_plus.defined, v.s_minus.defined, True, False))

    h = build_psi_delta_k(n, k, tower(-1), tower)
    v = classify_rationality(m, discriminant(h), compatibility_lambda(h), oracle)
    p, q = sorted((n - k, k))
    both = (k - m) % 2 == 0
    rows.append(RealcaseRow(f"SO({2 * p},{2 * q})", m, k, v.s_plus.defined, v.s_minus.defined, both, both))
    return rows


# --- the end-to-end scenario --------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ScenarioReport:
    n: int
    k: int
    precondition_ok: bool
    verdict: RationalityVerdict  # for S+-(e), the original basis
    verdict_e_prime: RationalityVerdict | None = None
    perm: GoodBasisPerm | None = None
    l_sign: str | None = None
    checks: list[Check] = field(default_factory=list)
    real_forms: list[RealFormReport] = field(default_factory=list)
    commutation_checks: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def s_plus_defined(self) -> bool:
        return self.verdict.s_plus.defined


def admissible_perms(n: int, k: int) -> list[tuple[int, int]]:
    """(a, r) with a + s even, s = n - k - r."""
    return [(a, r) for a in range(k + 1) for r in range(n - k + 1) if (a + n - k - r) % 2 == 0]


def _require(report: ScenarioReport, name: str, ok: bool, detail="") -> None:
    report.checks.append(Check(name, ok, str(detail)))
    if not ok:
        raise CheckFailed(name, detail)


def main_scenario(tower: TowerSpec, n: int, k: int, delta: Scalar, a: int | None = None, r: int | None = None,
                  *, norm_oracle: NormOracle | None = None, check_both: bool = True) -> ScenarioReport:
    """Build psi_{delta,k}, move to a good basis with D = (-1)^k delta^{2N}, verify L and transport.

    Raises :class:`CheckFailed` with the offending data if any operator identity fails.
    """
    if n % 2:
        raise ValueError("n must be even")
    m = n // 2
    oracle = norm_oracle or field_oracle(tower)
    delta = as_element(delta, tower)
    h = build_psi_delta_k(n, k, delta, tower)
    lam = compatibility_lambda(h)
    real_forms = [real_form(h, delta, k, i) for i in tower.embeddings if embed_sign(delta, i) != 0]

    if a is None or r is None:
        perms = admissible_perms(n, k)
        a, r = perms[-1] if perms else (k, n - k)
    s = n - k - r
    pre = (m - k) % 2 == 0 and (a + s) % 2 == 0 and 0 <= a <= k and 0 <= r <= n - k
    if not pre:
        raw = classify_rationality(m, discriminant(h), lam, oracle)
        return ScenarioReport(n, k, False, raw, real_forms=real_forms)

    report = ScenarioReport(n, k, True, None, real_forms=real_forms)  # type: ignore[arg-type]
    dim = 2 * n
    _require(report, "lambda = -delta", lam == -delta, lam)
    _require(report, "J^2 = lambda Id", build_J(h) @ build_J(h) == scalar_op(dim, lam))

    hp, perm = permute_good_basis(h, k, a, r)
    report.perm = perm
    Dp = discriminant(hp)
    N = (a + s) // 2
    sgn_k = -1 if k % 2 else 1
    _require(report, "D' = (-1)^{t+s} delta^{a+s}",
             Dp == delta ** (a + s) * (-1 if (perm.t + perm.s) % 2 else 1), Dp)
    _require(report, "D' = (-1)^k delta^{2N}", Dp == delta ** (2 * N) * sgn_k, Dp)
    _require(report, "lambda unchanged", compatibility_lambda(hp) == lam)

    basis = g0_basis(hp)
    key_sign = "+" if m % 2 == 0 else "-"
    report.l_sign = key_sign
    signs = ("+", "-") if check_both else (key_sign,)
    for sign in signs:
        L = build_L(hp, sign)
        _require(report, f"L{sign}^2 = scalar Id", L_squared_holds(L), L.scalar_expected)
        res = check_commutes_g0(L, basis)
        report.commutation_checks += res.checked
        _require(report, f"L{sign} commutes with g0", res.ok, res.counterexample)
        if sign == key_sign:
            _require(report, f"L{sign}^2 scalar = delta^(2N)", L.scalar_expected == delta ** (2 * N),
                     L.scalar_expected)

    vp = classify_rationality(m, Dp, lam, oracle)
    report.verdict_e_prime = vp
    key = vp.s_plus if key_sign == "+" else vp.s_minus
    _require(report, "key scalar is a norm", key.defined, key.scalar)
    _require(report, "witness verifies", key.witness is None or norm_to_base(key.witness) == key.scalar,
             key.witness)

    flip = flip_weights_check(n, perm.swapped)
    _require(report, "weight flip parity", flip.ok, flip)
    report.verdict = vp.swapped() if perm.swap_count % 2 else vp
    _require(report, "S+(e) defined over E0", report.verdict.s_plus.defined, report.verdict.s_plus)
    return report

