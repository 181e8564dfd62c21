"""Exact arithmetic in a tower Q <= E0 <= E.

E0 is either Q or a real quadratic field Q(sqrt m1), and E = E0(sqrt m2) with
m2 totally negative, so E is a CM-type imaginary quadratic extension of E0.
Elements carry four rational coordinates in the basis
{1, sqrt m1, sqrt m2, sqrt m1 * sqrt m2}.

Scalars elsewhere in the package may also be plain ``int`` or ``Fraction``
values; the helpers :func:`conj`, :func:`is_zero` and :func:`as_element`
accept all three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, "FieldElement"]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _is_rational_square(x: Fraction) -> bool:
    return _rational_sqrt(x) is not None


@dataclass(frozen=True)
class TowerSpec:
    """E0 = Q(sqrt m1) (or Q when ``m1`` is None), E = E0(sqrt m2).

    ``m2`` is stored as its two E0 coordinates ``(p, q)`` meaning p + q sqrt m1.
    """

    m1: Fraction | None
    m2: tuple[Fraction, Fraction]

    def __post_init__(self):
        m1 = None if self.m1 is None else _q(self.m1)
        m2 = tuple(_q(c) for c in self.m2)
        if len(m2) == 1:
            m2 = (m2[0], Fraction(0))
        if len(m2) != 2:
            raise ValueError("m2 must be an E0-element given by 1 or 2 coordinates")
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)
        if m1 is not None:
            if m1 <= 0 or _is_rational_square(m1):
                raise ValueError(f"m1 must be a positive non-square rational, got {m1}")
        elif m2[1] != 0:
            raise ValueError("m2 has a sqrt(m1) coordinate but the base field is Q")
        for i in self.embeddings:
            if _sign_base(m2[0], m2[1], m1, i) >= 0:
                raise ValueError(f"m2 must be totally negative; embedding {i} gives sign >= 0")

    @classmethod
    def make(cls, m1=None, m2=-1) -> TowerSpec:
        if isinstance(m2, (int, Fraction, str)):
            m2 = (m2, 0)
        return cls(None if m1 is None else _q(m1), tuple(m2))

    @property
    def degree_base(self) -> int:
        return 1 if self.m1 is None else 2

    @property
    def embeddings(self) -> tuple[int, ...]:
        return (1,) if self.m1 is None else (1, 2)

    def __call__(self, c0: Rational = 0, c1: Rational = 0, c2: Rational = 0, c3: Rational = 0) -> FieldElement:
        return FieldElement((_q(c0), _q(c1), _q(c2), _q(c3)), self)

    def sqrt_m1(self) -> FieldElement:
        if self.m1 is None:
            raise ValueError("base field is Q; there is no sqrt(m1)")
        return self(0, 1)

    def sqrt_m2(self) -> FieldElement:
        return self(0, 0, 1)

    def m2_element(self) -> FieldElement:
        return self(self.m2[0], self.m2[1])

    def from_coords(self, coords) -> FieldElement:
        cs = [_q(c) for c in coords]
        if len(cs) > 4:
            raise ValueError("at most 4 coordinates")
        cs += [Fraction(0)] * (4 - len(cs))
        if self.m1 is None and (cs[1] != 0 or cs[3] != 0):
            raise ValueError("sqrt(m1) coordinates must vanish when E0 = Q")
        return FieldElement(tuple(cs), self)

    def to_json(self) -> dict:
        return {
            "m1": None if self.m1 is None else _fmt(self.m1),
            "m2": [_fmt(c) for c in self.m2],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TowerSpec:
        m1 = obj.get("m1")
        m2 = obj.get("m2", -1)
        if not isinstance(m2, (list, tuple)):
            m2 = [m2]
        m2 = list(m2)
        if len(m2) == 4:
            if _q(m2[2]) != 0 or _q(m2[3]) != 0:
                raise ValueError("m2 must lie in E0")
            m2 = m2[:2]
        return cls(None if m1 is None else _q(m1), tuple(_q(c) for c in m2))


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sign_base(p: Fraction, q: Fraction, m1: Fraction | None, i: int) -> int:
    """Sign of sigma_i(p + q sqrt m1) without leaving Q."""
    if m1 is None or q == 0:
        return (p > 0) - (p < 0)
    if i == 2:
        q = -q
    if p >= 0 and q >= 0:
        return 1
    if p <= 0 and q <= 0:
        return -1
    lhs, rhs = p * p, q * q * m1
    if lhs > rhs:
        return 1 if p > 0 else -1
    if lhs < rhs:
        return 1 if q > 0 else -1
    return 0


_ZERO = Fraction(0)


@lru_cache(maxsize=None)
def _mul_table(tower: TowerSpec) -> tuple:
    """table[i][j] lists (k, c): basis_i * basis_j = sum c basis_k; index bits are (sqrt m2, sqrt m1)."""
    m1 = tower.m1 or _ZERO
    p, q = tower.m2

    def times_base(coeffs: dict, x0, x1):
        # multiply an E0-coefficient pair by x0 + x1 sqrt m1
        out = {}
        for k, c in coeffs.items():
            rk = k & 1
            out[k] = out.get(k, 0) + c * x0
            if rk:
                out[k ^ 1] = out.get(k ^ 1, 0) + c * x1 * m1
            else:
                out[k | 1] = out.get(k | 1, 0) + c * x1
        return out

    table = []
    for i in range(4):
        row = []
        for j in range(4):
            r = (i & 1) + (j & 1)
            s = (i >> 1) + (j >> 1)
            prod = {(r & 1) | ((s & 1) << 1): Fraction(1)}
            if r == 2:
                prod = {k: c * m1 for k, c in prod.items()}
            if s == 2:
                prod = times_base(prod, p, q)
            row.append(tuple((k, c) for k, c in sorted(prod.items()) if c))
        table.append(tuple(row))
    return tuple(table)


class FieldElement:
    __slots__ = ("c", "tower")

    def __init__(self, coords: tuple[Fraction, Fraction, Fraction, Fraction], tower: TowerSpec):
        self.c = coords
        self.tower = tower

    def _lift(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise ValueError("elements from different towers")
            return other
        if isinstance(other, (int, Fraction)):
            z = Fraction(0)
            return FieldElement((Fraction(other), z, z, z), self.tower)
        return None

    @property
    def in_base(self) -> bool:
        return self.c[2] == 0 and self.c[3] == 0

    @property
    def is_rational(self) -> bool:
        return self.c[1] == 0 and self.c[2] == 0 and self.c[3] == 0

    def base_parts(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """(u, v) with self = u + v sqrt m2, each as (p, q) for p + q sqrt m1."""
        c = self.c
        return (c[0], c[1]), (c[2], c[3])

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        return FieldElement((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), self.tower)

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return FieldElement((-a[0], -a[1], -a[2], -a[3]), self.tower)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            a = self.c
            return FieldElement((a[0] * other, a[1] * other, a[2] * other, a[3] * other), self.tower)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = [_ZERO, _ZERO, _ZERO, _ZERO]
        table = _mul_table(self.tower)
        b = o.c
        for i, x in enumerate(self.c):
            if not x:
                continue
            row = table[i]
            for j, y in enumerate(b):
                if y:
                    xy = x * y
                    for k, coef in row[j]:
                        out[k] += xy * coef if coef != 1 else xy
        return FieldElement(tuple(out), self.tower)

    __rmul__ = __mul__

    def conj(self) -> FieldElement:
        a = self.c
        return FieldElement((a[0], a[1], -a[2], -a[3]), self.tower)

    def norm(self) -> FieldElement:
        return self * self.conj()

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        nm = self.norm()
        p, q = nm.c[0], nm.c[1]
        # (p + q r)^-1 = (p - q r) / (p^2 - m1 q^2)
        den = p * p - (self.tower.m1 or 0) * q * q
        inv_nm = FieldElement((p / den, -q / den, Fraction(0), Fraction(0)), self.tower)
        return self.conj() * inv_nm

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.tower == other.tower and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.c[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.c[0])
        return hash((self.c, self.tower.m1, self.tower.m2))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_json(self) -> list[str]:
        return [_fmt(x) for x in self.c]

    def __repr__(self) -> str:
        names = ("", "√m1", "√m2", "√m1√m2")
        parts = [f"{_fmt(x)}{'*' + n if n else ''}" for x, n in zip(self.c, names) if x]
        return "(" + " + ".join(parts) + ")" if parts else "0"


# --- helpers accepting int / Fraction / FieldElement ---------------------------


def conj(x: Scalar) -> Scalar:
    """Galois conjugation; fixes E0 pointwise and negates sqrt m2 components."""
    if isinstance(x, FieldElement):
        return x.conj()
    return x


def is_zero(x: Scalar) -> bool:
    if isinstance(x, FieldElement):
        return x.is_zero()
    return x == 0


def as_element(x: Scalar, tower: TowerSpec) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return tower(x)


def norm_to_base(x: Scalar) -> Scalar:
    """Nm_{E/E0}(x) = x * conj(x)."""
    if isinstance(x, FieldElement):
        return x.norm()
    return x * x


def embed_sign(x: Scalar, i: int, tower: TowerSpec | None = None) -> int:
    """Exact sign of sigma_i(x) for x in E0; sigma_1 takes the positive root of m1."""
    if isinstance(x, FieldElement):
        if not x.in_base:
            raise ValueError("embed_sign is defined on E0-elements only")
        if i not in x.tower.embeddings:
            raise ValueError(f"embedding index {i} out of range {x.tower.embeddings}")
        return _sign_base(x.c[0], x.c[1], x.tower.m1, i)
    if tower is not None and i not in tower.embeddings:
        raise ValueError(f"embedding index {i} out of range {tower.embeddings}")
    if tower is None and i != 1:
        raise ValueError("embedding index must be 1 for rational input without a tower")
    x = Fraction(x)
    return (x > 0) - (x < 0)


def sqrt_in_base(x: Scalar, tower: TowerSpec) -> FieldElement | None:
    """A square root of x inside E0, or None.  The root positive under sigma_1 is chosen."""
    x = as_element(x, tower)
    if not x.in_base:
        raise ValueError("sqrt_in_base expects an E0-element")
    p, q = x.c[0], x.c[1]
    m1 = tower.m1
    cands: list[FieldElement] = []
    if m1 is None or q == 0:
        r = _rational_sqrt(p)
        if r is not None:
            cands.append(tower(r))
        elif m1 is not None:
            t = _rational_sqrt(p / m1)
            if t is not None:
                cands.append(tower(0, t))
    else:
        n = _rational_sqrt(p * p - m1 * q * q)
        if n is not None:
            for s2 in ((p + n) / 2, (p - n) / 2):
                s = _rational_sqrt(s2)
                if s:
                    cands.append(tower(s, q / (2 * s)))
    for c in cands:
        if c * c == x:
            if embed_sign(c, 1) < 0:
                c = -c
            return c
    return None


# --- norm membership ----------------------------------------------------------


@dataclass(frozen=True)
class NormVerdict:
    """``kind`` is one of "norm", "not_norm", "unknown".

    A "norm" verdict carries ``witness`` with ``norm_to_base(witness)`` equal to
    the query; a "not_norm" verdict carries a ``certificate`` dict.
    """

    kind: str
    witness: Scalar | None = None
    certificate: dict | None = None

    @property
    def is_norm(self) -> bool:
        return self.kind == "norm"

    @property
    def is_not_norm(self) -> bool:
        return self.kind == "not_norm"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"


def _trial_factor(n: int, bound: int) -> tuple[dict[int, int], int]:
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p * p <= n and p <= bound:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1 and (p * p > n):
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return factors, n


def _prime_two_squares(p: int) -> tuple[int, int]:
    """x^2 + y^2 = p for a prime p = 2 or p = 1 mod 4 (Hermite-Serret)."""
    if p == 2:
        return 1, 1
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    t = pow(c, (p - 1) // 4, p)
    a, b = p, t
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    y = math.isqrt(p - b * b)
    assert b * b + y * y == p
    return b, y


def _two_squares_verdict(x: Fraction, tower: TowerSpec, bound: int) -> NormVerdict | None:
    n = x.numerator * x.denominator
    factors, rest = _trial_factor(n, bound)
    for p, e in sorted(factors.items()):
        if p % 4 == 3 and e % 2 == 1:
            return NormVerdict("not_norm", certificate={"kind": "two_squares", "prime": p, "exponent": e})
    if rest > 1:
        if rest % 4 == 3:
            # some prime = 3 mod 4 divides the unfactored cofactor to an odd power
            return NormVerdict("not_norm", certificate={"kind": "two_squares_cofactor", "cofactor": rest})
        return None
    gx, gy = 1, 0
    for p, e in factors.items():
        if p % 4 == 3:
            gx, gy = gx * p ** (e // 2), gy * p ** (e // 2)
            continue
        a, b = _prime_two_squares(p)
        for _ in range(e):
            gx, gy = gx * a - gy * b, gx * b + gy * a
    i = tower.sqrt_m2()
    return NormVerdict("norm", witness=(tower(gx) + tower(gy) * i) / x.denominator)


def _small_base_elements(tower: TowerSpec, height: int, max_den: int):
    rng = range(-height, height + 1)
    seen = set()
    for den in range(1, max_den + 1):
        if tower.m1 is None:
            for a in rng:
                v = Fraction(a, den)
                if v not in seen:
                    seen.add(v)
                    yield tower(v)
        else:
            for a, b in product(rng, rng):
                key = (Fraction(a, den), Fraction(b, den))
                if key not in seen:
                    seen.add(key)
                    yield tower(*key)


def is_norm(x: Scalar, tower: TowerSpec, *, search_height: int = 12, search_den: int = 4,
            factor_bound: int = 10**6) -> NormVerdict:
    """Decide whether x in E0* is Nm_{E/E0}(c) for some c in E.

    Returns a three-valued verdict; ``unknown`` when neither a witness nor a
    certificate is found inside the search bounds.
    """
    x = as_element(x, tower)
    if not x.in_base:
        raise ValueError("is_norm expects an E0-element")
    if x.is_zero():
        raise ValueError("is_norm is undefined at 0")

    for i in tower.embeddings:
        s = embed_sign(x, i)
        if s <= 0:
            return NormVerdict("not_norm", certificate={"kind": "embedding_sign", "embedding": i, "sign": s})

    verdict = None
    r = sqrt_in_base(x, tower)
    if r is not None:
        verdict = NormVerdict("norm", witness=r)
    if verdict is None:
        # x = Nm(v sqrt m2) = -m2 v^2
        v = sqrt_in_base(x / (-tower.m2_element()), tower)
        if v is not None:
            verdict = NormVerdict("norm", witness=v * tower.sqrt_m2())
    if verdict is None and tower.m1 is None and tower.m2 == (-1, 0):
        verdict = _two_squares_verdict(x.c[0], tower, factor_bound)
    if verdict is None:
        m2 = tower.m2_element()
        for v in _small_base_elements(tower, search_height, search_den):
            if v.is_zero():
                continue
            u = sqrt_in_base(x + m2 * v * v, tower)
            if u is not None:
                verdict = NormVerdict("norm", witness=u + v * tower.sqrt_m2())
                break
    if verdict is None:
        return NormVerdict("unknown")
    if verdict.is_norm and norm_to_base(verdict.witness) != x:
        raise AssertionError(f"norm witness {verdict.witness} failed to verify for {x}")
    return verdict


def random_element(tower: TowerSpec, rng, height: int = 5, *, base: bool = False,
                   nonzero: bool = False) -> FieldElement:
    """Small random element of E (or of E0 when ``base``), for property trials."""
    while True:
        cs = [Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(4)]
        if tower.m1 is None:
            cs[1] = cs[3] = Fraction(0)
        if base:
            cs[2] = cs[3] = Fraction(0)
        x = FieldElement(tuple(cs), tower)
        if not (nonzero and x.is_zero()):
            return x
