import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from halfspin.fieldtower import conj, random_element
from halfspin.forms import (HermitianData, NotCompatible, b_gram, build_J, build_psi_delta_k, compatibility_lambda,
                            discriminant, dual_form_check, dual_form_lambda, is_compatible, permute_good_basis,
                            random_diagonal_form, res_matrix, res_scalar, standard_rep_analysis, swap_basis)
from halfspin.linop import LinOp, scalar_op
from halfspin.spinrep import g0_basis

from .conftest import Q_I, SQRT2_I, SQRT3_TWISTED, SQRT5_I


# --- psi_{delta,k} --------------------------------------------------------------


def test_psi_delta_k_coefficients():
    t = SQRT2_I
    d = t.sqrt_m1()
    h = build_psi_delta_k(6, 1, d, t)
    assert h.a == (d, 1, 1, 1, 1, 1, -1, -d, -d, -d, -d, -d)
    assert build_psi_delta_k(2, 2, 1, Q_I).a == (1, 1, -1, -1)
    assert build_psi_delta_k(2, 1, -1, Q_I).a == (-1, 1, -1, 1)


def test_psi_delta_k_rejects_bad_input():
    with pytest.raises(ValueError):
        build_psi_delta_k(3, 1, 0, Q_I)
    with pytest.raises(ValueError):
        build_psi_delta_k(3, 4, 1, Q_I)
    with pytest.raises(ValueError):
        HermitianData(2, (1, 1, 1, Q_I(0, 0, 1)), Q_I)  # coefficient outside E0
    with pytest.raises(ValueError):
        HermitianData(2, (1, 0, 1, 1), Q_I)


def test_compatibility_lambda_examples():
    t = SQRT2_I
    d = t.sqrt_m1()
    for k in range(7):
        assert compatibility_lambda(build_psi_delta_k(6, k, d, t)) == -d
    assert compatibility_lambda(build_psi_delta_k(4, 4, 1, Q_I)) == -1
    bad = HermitianData(2, (1, 1, 1, 2), Q_I)
    with pytest.raises(NotCompatible):
        compatibility_lambda(bad)
    assert not is_compatible(bad)


def test_dual_form_check_examples():
    t = SQRT2_I
    h = build_psi_delta_k(4, 1, t.sqrt_m1(), t)
    assert dual_form_check(h)
    assert dual_form_lambda(h) == compatibility_lambda(h)
    assert dual_form_check(build_psi_delta_k(2, 2, 1, Q_I))
    assert not dual_form_check(HermitianData(2, (1, 1, 1, 2), Q_I))


def test_discriminant_examples():
    t = SQRT2_I
    d = t.sqrt_m1()
    assert discriminant(build_psi_delta_k(6, 1, d, t)) == d
    assert discriminant(build_psi_delta_k(2, 2, 1, Q_I)) == 1
    for k in range(5):
        assert discriminant(build_psi_delta_k(4, k, -1, Q_I)) == (-1) ** k


# --- J --------------------------------------------------------------------------


def _b(u, v, n):
    g = b_gram(n)
    return sum((u[r] * v[c] for r in range(2 * n) for c in range(2 * n) if g[r][c]), 0)


def _psi(h, z, w):
    return sum((h.a[i] * z[i] * conj(w[i]) for i in range(2 * h.n)), 0)


@pytest.mark.parametrize("tower", [SQRT2_I, SQRT3_TWISTED])
def test_J_compares_the_two_dualities(tower):
    # oracle: b(Jz, w) = psi(w, z) for all z, w
    rng = random.Random(3)
    for n in (2, 3):
        h = random_diagonal_form(n, tower, rng)
        J = build_J(h)
        for _ in range(10):
            z = [random_element(tower, rng, 3) for _ in range(2 * n)]
            w = [random_element(tower, rng, 3) for _ in range(2 * n)]
            Jz = J.apply(z)
            assert _b([Jz.get(i, 0) for i in range(2 * n)], w, n) == _psi(h, w, z)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_J_squared_is_lambda(n):
    rng = random.Random(n)
    for tower in (SQRT2_I, SQRT5_I, SQRT3_TWISTED):
        h = random_diagonal_form(n, tower, rng)
        J = build_J(h)
        assert J.conjugate and not (J @ J).conjugate
        assert J @ J == scalar_op(2 * n, compatibility_lambda(h))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_dual_form_check_iff_compatible(n):
    rng = random.Random(100 + n)
    seen = set()
    for i in range(30):
        h = random_diagonal_form(n, SQRT2_I, rng, compatible=i % 2 == 0)
        seen.add(is_compatible(h))
        assert dual_form_check(h) == is_compatible(h)
    assert seen == {True, False}


# --- good-basis permutations ------------------------------------------------------


def test_permute_examples():
    t = SQRT2_I
    d = t.sqrt_m1()
    h = build_psi_delta_k(6, 1, d, t)
    hp, perm = permute_good_basis(h, 1, 1, 4)
    assert (perm.t, perm.s) == (0, 1) and perm.swapped == {6}
    assert discriminant(hp) == -d * d
    hp, perm = permute_good_basis(h, 1, 1, 5)
    assert perm.swap_count == 0 and discriminant(hp) == d
    hp, perm = permute_good_basis(h, 1, 0, 0)
    assert (perm.t, perm.s) == (1, 5) and discriminant(hp) == d ** 5


def test_permute_rejects_out_of_range():
    h = build_psi_delta_k(4, 2, 3, Q_I)
    for a, r in [(-1, 0), (3, 0), (0, 3), (0, -1)]:
        with pytest.raises(ValueError):
            permute_good_basis(h, 2, a, r)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_permuted_bases_keep_lambda_and_follow_discriminant_formula(n):
    t = SQRT2_I
    d = t.sqrt_m1() + 3
    for k in range(1, n + 1):
        h = build_psi_delta_k(n, k, d, t)
        lam = compatibility_lambda(h)
        for a in range(k + 1):
            for r in range(n - k + 1):
                hp, perm = permute_good_basis(h, k, a, r)
                assert perm.t == k - a and perm.s == n - k - r
                assert perm.swap_count == perm.t + perm.s
                assert compatibility_lambda(hp) == lam
                assert discriminant(hp) == (-1) ** (perm.t + perm.s) * d ** (a + perm.s)


def test_swap_basis_is_an_involution():
    h = build_psi_delta_k(4, 2, 5, Q_I)
    assert swap_basis(swap_basis(h, {1, 3}), {1, 3}) == h
    with pytest.raises(IndexError):
        swap_basis(h, {5})


# --- restriction of scalars -----------------------------------------------------------


def _random_op(rng, dim, tower, conjugate):
    entries = {(rng.randrange(dim), rng.randrange(dim)): random_element(tower, rng, 3) for _ in range(dim + 2)}
    return LinOp.from_entries(dim, entries, conjugate)


@pytest.mark.parametrize("tower", [Q_I, SQRT2_I, SQRT3_TWISTED])
def test_res_is_multiplicative(tower):
    rng = random.Random(11)
    for _ in range(20):
        ca, cb = rng.random() < 0.5, rng.random() < 0.5
        A, B = _random_op(rng, 4, tower, ca), _random_op(rng, 4, tower, cb)
        assert res_matrix(A @ B, tower) == res_matrix(A, tower) @ res_matrix(B, tower)
        x, y = random_element(tower, rng), random_element(tower, rng)
        assert res_scalar(x, 3, tower) @ res_scalar(y, 3, tower) == res_scalar(x * y, 3, tower)


@given(st.integers(0, 2**32))
def test_res_matrix_acts_like_the_operator(seed):
    # the real coordinates of op(v) equal res(op) applied to the coordinates of v
    rng = random.Random(seed)
    tower = SQRT3_TWISTED
    conjugate = rng.random() < 0.5
    A = _random_op(rng, 3, tower, conjugate)
    v = [random_element(tower, rng, 3) for _ in range(3)]

    def coords(vec):
        out = {}
        for j, x in enumerate(vec):
            out[2 * j] = tower(x.c[0], x.c[1])
            out[2 * j + 1] = tower(x.c[2], x.c[3])
        return out

    av = A.apply(v)
    got = res_matrix(A, tower).apply(coords(v))
    expected = coords([av.get(j, tower(0)) for j in range(3)])
    assert all(got.get(i, 0) == expected[i] for i in range(6))


# --- the standard representation ---------------------------------------------------------


def test_standard_rep_not_defined_for_sqrt2():
    t = SQRT2_I
    h = build_psi_delta_k(4, 1, t.sqrt_m1(), t)
    rep = standard_rep_analysis(h, g0_basis(h), trials=30, rng=random.Random(0))
    assert rep.ok and rep.commute_checks == 28
    assert rep.verdict == "not_defined" and rep.lam == -t.sqrt_m1()


def test_standard_rep_defined_when_lambda_is_one():
    h = build_psi_delta_k(2, 1, -1, Q_I)
    assert compatibility_lambda(h) == 1
    rep = standard_rep_analysis(h, g0_basis(h), trials=30)
    assert rep.ok and rep.verdict == "defined"
    # c + J with Nm(c) = lambda is a zero divisor on the 4n-dimensional space
    assert rep.zero_divisor_rank is not None and rep.zero_divisor_rank < 8


def test_standard_rep_requires_compatibility():
    with pytest.raises(NotCompatible):
        standard_rep_analysis(HermitianData(2, (1, 1, 1, 2), Q_I))


def test_product_identity_value_lies_in_base():
    rng = random.Random(5)
    t = SQRT5_I
    lam = t(Fraction(-3, 2), 1)
    for _ in range(50):
        al, be = random_element(t, rng), random_element(t, rng)
        assert (al * conj(al) - lam * be * conj(be)).in_base
