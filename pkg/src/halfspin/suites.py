"""Verification suites run by the CLI.

Every suite takes a :class:`ScenarioConfig` and a seeded RNG and returns a
:class:`SuiteReport`.  A suite stops at its first failing check and records the
operands as the counterexample; ``unknown`` is reported only when the norm
oracle could not decide a scalar.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .config import SUITES, ScenarioConfig
from .exterior import clifford_gamma, contraction_op, degree_profile, gamma, wedge_op
from .fieldtower import FieldElement, random_element
from .forms import (build_J, build_psi_delta_k, compatibility_lambda, discriminant, dual_form_check, is_compatible,
                    partner, permute_good_basis, random_diagonal_form, standard_rep_analysis)
from .hodgestar import (L_squared_holds, build_L, check_commutes_g0, check_starcomps, displayed_chain_holds,
                        hodge_star, star_star_holds)
from .linop import LinOp, anticommutator, scalar_op
from .rationality import (UNDETERMINED, CheckFailed, all_flip_checks, classify_rationality, field_oracle,
                          main_scenario, real_form, realcase_table, w_plus_analysis, weights_from_cartan,
                          weights_half_spin)
from .spinrep import decompose, g0_basis, generator_pairs, lie_bracket, preserves_b, preserves_psi, so_generator, \
    spin_lift_full

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


def ser(x):
    """JSON form of scalars and simple containers."""
    if isinstance(x, FieldElement):
        return x.to_json()
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [ser(v) for v in items]
    return repr(x)


@dataclass
class SuiteReport:
    suite: str
    status: str
    checks_run: int
    counterexample: dict | None = None
    elapsed: float | None = None  # milliseconds; None unless timing was requested
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> SuiteReport:
        return cls(obj["suite"], obj["status"], obj["checks_run"], obj.get("counterexample"),
                   obj.get("elapsed"), obj.get("details", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class _Failed(Exception):
    def __init__(self, check: str, operands: dict):
        super().__init__(check)
        self.payload = {"check": check, **{k: ser(v) for k, v in operands.items()}}


class _Tally:
    def __init__(self):
        self.count = 0
        self.unknown = False
        self.details: dict = {}

    def check(self, ok: bool, name: str, **operands) -> None:
        self.count += 1
        if not ok:
            raise _Failed(name, operands)


def _base_form(cfg: ScenarioConfig):
    return build_psi_delta_k(cfg.n, cfg.k, cfg.delta, cfg.tower)


def _forms_under_test(cfg: ScenarioConfig):
    """psi_{delta,k} and, when a permutation is configured, its permuted good basis."""
    h = _base_form(cfg)
    out = [("e", h)]
    if cfg.permutation is not None:
        hp, _ = permute_good_basis(h, cfg.k, *cfg.permutation)
        out.append(("e'", hp))
    return out


def _random_linop(dim: int, cfg: ScenarioConfig, rng: random.Random, conjugate: bool) -> LinOp:
    entries = {}
    for _ in range(dim):
        entries[(rng.randrange(dim), rng.randrange(dim))] = random_element(cfg.tower, rng, 3)
    return LinOp.from_entries(dim, entries, conjugate)


# --- suites -------------------------------------------------------------------


def suite_clifford(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    dim = 1 << n
    ident = LinOp.identity(dim)
    for r in range(1, 2 * n + 1):
        for s in range(r, 2 * n + 1):
            expected = ident if partner(r, n) == s else LinOp.zero(dim)
            t.check(anticommutator(gamma(r, n), gamma(s, n)) == expected, "gamma anticommutator", r=r, s=s)
    for i in range(1, n + 1):
        t.check(degree_profile(wedge_op(i, n)) == {1}, "wedge raises degree", i=i)
        t.check(degree_profile(contraction_op(i, n)) == {-1}, "contraction lowers degree", i=i)
    # Clifford relation for random vectors (support <= 3): gamma(v)^2 = b'(v, v) = sum v_i v_{n+i}
    for _ in range(cfg.trials):
        v = [cfg.tower(0)] * (2 * n)
        for idx in rng.sample(range(2 * n), min(3, 2 * n)):
            v[idx] = random_element(cfg.tower, rng, 3)
        q = sum((v[i] * v[n + i] for i in range(n)), cfg.tower(0))
        g = clifford_gamma(v, n)
        t.check(g @ g == scalar_op(dim, q), "gamma(v)^2 = b'(v,v)", v=v)
    # composition rules for conjugate-linear operators, on random vectors
    for _ in range(cfg.trials):
        ca, cb = rng.random() < 0.5, rng.random() < 0.5
        A, B = _random_linop(dim, cfg, rng, ca), _random_linop(dim, cfg, rng, cb)
        vec = {rng.randrange(dim): random_element(cfg.tower, rng, 3) for _ in range(3)}
        t.check((A @ B).apply(vec) == A.apply(B.apply(vec)), "composition matches application",
                a_conjugate=ca, b_conjugate=cb, a=list(A.entries()), b=list(B.entries()), vector=vec)


def suite_forms(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    for tag, h in _forms_under_test(cfg):
        lam = compatibility_lambda(h)
        t.check(lam == -cfg.delta, "lambda = -delta", basis=tag, got=lam)
        J = build_J(h)
        t.check(J @ J == scalar_op(2 * n, lam), "J^2 = lambda Id", basis=tag)
        t.check(dual_form_check(h), "dual-form compatibility", basis=tag, a=h.a)
    h = _base_form(cfg)
    rep = standard_rep_analysis(h, g0_basis(h), trials=cfg.trials, rng=rng)
    t.count += rep.product_trials + rep.commute_checks
    t.check(rep.ok, "standard representation checks", failures=rep.failures)
    t.details["standard_rep"] = rep.verdict
    t.details["lambda"] = ser(rep.lam)
    if rep.verdict == UNDETERMINED:
        t.unknown = True
    for _ in range(cfg.trials):
        g = random_diagonal_form(n, cfg.tower, rng, compatible=rng.random() < 0.5)
        t.check(dual_form_check(g) == is_compatible(g), "dual-form check agrees with a_i a_{n+i} constant",
                a=g.a)


def suite_lie(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    for tag, h in _forms_under_test(cfg):
        basis = g0_basis(h)
        t.check(len(basis) == 2 * n * n - n, "dim g0 = 2n^2 - n", basis=tag, got=len(basis))
        for x in basis:
            t.check(preserves_b(x.w_matrix, n), "preserves b", basis=tag, element=x.label)
            t.check(preserves_psi(x.w_matrix, h), "preserves psi", basis=tag, element=x.label)
        # closure: brackets stay in g0
        for i, x in enumerate(basis):
            for y in basis[i + 1:]:
                z = lie_bracket(x.w_matrix, y.w_matrix)
                t.check(preserves_b(z, n) and preserves_psi(z, h), "g0 closed under bracket", basis=tag,
                        x=x.label, y=y.label)
    for r, s in generator_pairs(n):
        t.check(preserves_b(so_generator(r, s, n).matrix, n), "X_rs in so(W,b)", r=r, s=s)


def suite_spin(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    gens = [so_generator(r, s, n) for r, s in generator_pairs(n)]
    lifts = [spin_lift_full(g, n) for g in gens]
    for i, x in enumerate(gens):
        for j in range(i + 1, len(gens)):
            y = gens[j]
            lhs = spin_lift_full(decompose(lie_bracket(x.matrix, y.matrix), n), n)
            rhs = lie_bracket(lifts[i], lifts[j])
            t.check(lhs == rhs, "rho([X,Y]) = [rho X, rho Y]", x=(x.r, x.s), y=(y.r, y.s))
    for i, x in enumerate(gens):
        for q in range(1, 2 * n + 1):
            # [rho(X), gamma(e_q)] = gamma(X e_q)
            col = {row + 1: v for row, v in x.matrix.apply({q - 1: 1}).items()}
            t.check(lie_bracket(lifts[i], gamma(q, n)) == clifford_gamma(col, n), "gamma-equivariance",
                    x=(x.r, x.s), q=q)


def suite_star(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    # the star/Clifford identities carry even-n signs; for odd n only star star is checked
    comps = n % 2 == 0
    t.details["starcomps"] = "checked" if comps else "skipped: odd n"
    for tag, h in _forms_under_test(cfg):
        t.check(star_star_holds(hodge_star(h)), "star star = (-1)^{k(n-k)} D", basis=tag)
        if comps:
            bad = check_starcomps(h)
            t.count += 4 * n * (n + 1) - 1
            t.check(not bad, "star/Clifford identities", basis=tag, failures=bad[:5])
    for _ in range(cfg.trials):
        g = random_diagonal_form(n, cfg.tower, rng, compatible=rng.random() < 0.5)
        t.check(star_star_holds(hodge_star(g)), "star star on random form", a=g.a)
    for _ in range(min(cfg.trials, 5) if comps else 0):
        g = random_diagonal_form(n, cfg.tower, rng, compatible=True)
        bad = check_starcomps(g)
        t.count += 4 * n * (n + 1) - 1
        t.check(not bad, "star/Clifford identities on random compatible form", a=g.a, failures=bad[:5])


def suite_L(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    m = n // 2
    for tag, h in _forms_under_test(cfg):
        basis = g0_basis(h)
        for sign in ("+", "-"):
            L = build_L(h, sign)
            t.check(L_squared_holds(L), f"L{sign}^2 = scalar Id", basis=tag, expected=L.scalar_expected)
            res = check_commutes_g0(L, basis)
            t.count += res.checked - 1
            t.check(res.ok, f"L{sign} commutes with g0", basis=tag, element=res.counterexample)
            t.details[f"L{sign}^2[{tag}]"] = ser(L.scalar_expected)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                for k in range(2, n + 1):
                    t.check(displayed_chain_holds(h, i, j, k), "contraction/wedge chain", basis=tag, i=i, j=j,
                            k=k, m=m)


def suite_rationality(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n, k = cfg.n, cfg.k
    h = _base_form(cfg)
    raw = classify_rationality(n // 2, discriminant(h), compatibility_lambda(h), field_oracle(cfg.tower))
    t.count += 1
    t.details["raw"] = _verdict_json(raw)
    a, r = cfg.permutation if cfg.permutation else (None, None)
    try:
        rep = main_scenario(cfg.tower, n, k, cfg.delta, a, r)
    except CheckFailed as exc:
        raise _Failed(exc.check, {"detail": exc.counterexample}) from None
    t.count += len(rep.checks) + rep.commutation_checks
    t.details["precondition"] = rep.precondition_ok
    t.details["verdict"] = _verdict_json(rep.verdict)
    if rep.perm is not None:
        t.details["swapped"] = ser(rep.perm.swapped)
    for v in (rep.verdict.s_plus, rep.verdict.s_minus):
        if v.status == UNDETERMINED:
            t.unknown = True


def _verdict_json(v) -> dict:
    return {
        "case": v.case_label,
        "S+": {"status": v.s_plus.status, "scalar": ser(v.s_plus.scalar), "witness": ser(v.s_plus.witness)},
        "S-": {"status": v.s_minus.status, "scalar": ser(v.s_minus.scalar), "witness": ser(v.s_minus.witness)},
    }


def suite_real(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n, k = cfg.n, cfg.k
    h = _base_form(cfg)
    forms = []
    for i in cfg.tower.embeddings:
        try:
            rf = real_form(h, cfg.delta, k, i)
        except ValueError:
            continue
        expected_sig = (n, n) if rf.kind == "SOstar" else (2 * n - 2 * k, 2 * k)
        if rf.kind == "SOpq" and rf.signature_psi != expected_sig:
            expected_sig = (2 * k, 2 * n - 2 * k)
        t.check(rf.signature_psi == expected_sig, "psi signature matches real form", embedding=i,
                got=rf.signature_psi)
        forms.append(rf.label)
    t.details["real_forms"] = forms
    w = w_plus_analysis(n, k)
    t.check(w.j_fixed, "W(+1) vectors fixed by J", k=k)
    t.check(w.diagonal_ok, "b|W(+1) diagonal with entries +-2", diagonal=w.diagonal)
    t.check(w.real_rank == 2 * n, "W(+1) real rank 2n", got=w.real_rank)
    t.check(w.signature == (2 * n - 2 * k, 2 * k), "W(+1) signature", got=w.signature)
    t.details["w_plus_signature"] = list(w.signature)
    if n % 2 == 0:
        for kk in range(n + 1):
            for row in realcase_table(n // 2, kk):
                t.check(row.agrees, "real case table", group=row.group, m=row.m, k=kk,
                        got=[row.s_plus, row.s_minus], expected=[row.expected_plus, row.expected_minus])


def suite_weights(cfg: ScenarioConfig, rng: random.Random, t: _Tally) -> None:
    n = cfg.n
    for sign in ("+", "-"):
        t.check(weights_half_spin(n, sign) == weights_from_cartan(n, sign), "weights by enumeration = Cartan",
                sign=sign)
    for res in all_flip_checks(n):
        t.check(res.ok, "weight flip parity", flipped=res.flipped, image=res.image, expected=res.expected)


RUNNERS = {
    "clifford": suite_clifford, "forms": suite_forms, "lie": suite_lie, "spin": suite_spin,
    "star": suite_star, "L": suite_L, "rationality": suite_rationality, "real": suite_real,
    "weights": suite_weights,
}
assert tuple(RUNNERS) == SUITES


def run_suite(name: str, cfg: ScenarioConfig, *, timing: bool = False) -> SuiteReport:
    rng = random.Random(f"{cfg.seed}:{name}")
    t = _Tally()
    start = time.perf_counter()
    counterexample = None
    try:
        RUNNERS[name](cfg, rng, t)
        status = UNKNOWN if t.unknown else PASS
    except _Failed as exc:
        status, counterexample = FAIL, exc.payload
    elapsed = round((time.perf_counter() - start) * 1000, 3) if timing else None
    return SuiteReport(name, status, t.count, counterexample, elapsed, t.details)


def run_suites(cfg: ScenarioConfig, *, timing: bool = False) -> list[SuiteReport]:
    return [run_suite(name, cfg, timing=timing) for name in cfg.suites]
