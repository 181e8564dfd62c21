import random
from types import SimpleNamespace

import pytest

from halfspin.exterior import EVEN, ODD, blade, blade_indices, restrict_half_spin, wedge_op
from halfspin.fieldtower import conj, random_element
from halfspin.forms import (HermitianData, NotCompatible, build_psi_delta_k, compatibility_lambda, discriminant,
                            permute_good_basis, random_diagonal_form)
from halfspin.hodgestar import (L_scalar, L_squared_holds, build_L, check_commutes_g0, check_starcomps,
                                displayed_chain_holds, graded_commutation_failures, hodge_star, shuffle_sign,
                                star_star_holds, starcomps_identities)
from halfspin.linop import LinOp
from halfspin.spinrep import g0_basis, so_generator, spin_lift

from .conftest import Q_I, SQRT2_I, SQRT3_TWISTED, SQRT5_I


def _generic_h(n, tower=SQRT5_I, seed=0):
    return random_diagonal_form(n, tower, random.Random(seed))


# --- the star -----------------------------------------------------------------


def test_star_examples_n2():
    t = SQRT5_I
    a1, a2 = t(2, 1), t(-3)
    h = HermitianData(2, (a1, a2, t(1), t(1)), t)
    star = hodge_star(h).op
    assert star.conjugate
    assert star.apply({blade(): 1}) == {blade(1, 2): 1}
    assert star.apply({blade(1): 1}) == {blade(2): a1}
    assert star.apply({blade(2): 1}) == {blade(1): -a2}
    assert star.apply({blade(1, 2): 1}) == {blade(): a1 * a2}
    # on degree 1, star star = -D
    D = discriminant(h)
    for m in (blade(1), blade(2)):
        assert (star @ star).apply({m: 1}) == {m: -D}


def test_star_with_unit_coefficients_is_sign_duality():
    h = build_psi_delta_k(3, 0, -1, Q_I)  # a_1..a_3 = 1
    assert discriminant(h) == 1
    star = hodge_star(h).op
    for m in range(8):
        (target, coeff), = star.apply({m: 1}).items()
        assert target == 7 ^ m and coeff in (1, -1)


def test_shuffle_sign_small_cases():
    assert shuffle_sign(blade(1), 2) == 1
    assert shuffle_sign(blade(2), 2) == -1
    assert shuffle_sign(blade(2), 3) == -1
    assert shuffle_sign(blade(1, 3), 3) == -1
    assert shuffle_sign(0, 4) == shuffle_sign(15, 4) == 1


def _wedge_blade(mask, vec, n):
    for i in reversed(blade_indices(mask)):
        vec = wedge_op(i, n).apply(vec)
    return vec


@pytest.mark.parametrize("n", [2, 3, 4])
def test_star_satisfies_the_pairing_property(n):
    # oracle: x ^ star(y) = psi(x, y) vol, with psi(e_I, e_J) = delta_IJ a_I, sesquilinear
    tower = SQRT3_TWISTED
    rng = random.Random(n)
    h = _generic_h(n, tower, n)
    star = hodge_star(h).op
    full = (1 << n) - 1
    for I in range(1 << n):
        for J in range(1 << n):
            if bin(I).count("1") != bin(J).count("1"):
                continue  # the pairing is between blades of equal degree
            c, d = random_element(tower, rng, 3), random_element(tower, rng, 3)
            got = _wedge_blade(I, star.apply({J: d}), n)
            got = {m: c * v for m, v in got.items()}
            if I == J:
                aI = 1
                for i in blade_indices(I):
                    aI = aI * h.coeff(i)
                expected = c * conj(d) * aI
                assert {m: v for m, v in got.items() if v} == ({full: expected} if expected else {})
            else:
                assert all(not v for v in got.values())


@pytest.mark.parametrize("n", [2, 4])
def test_star_star_on_random_forms(n):
    rng = random.Random(40 + n)
    for tower in (SQRT2_I, SQRT5_I, SQRT3_TWISTED):
        for _ in range(15):
            h = random_diagonal_form(n, tower, rng, compatible=rng.random() < 0.5)
            assert star_star_holds(hodge_star(h))


def test_star_star_odd_n():
    for k in range(4):
        assert star_star_holds(hodge_star(build_psi_delta_k(3, k, SQRT2_I.sqrt_m1(), SQRT2_I)))


# --- star / Clifford identities -------------------------------------------------------


def test_starcomps_blade_level_n2():
    t = SQRT5_I
    h = random_diagonal_form(2, t, random.Random(1))
    lhs, rhs = starcomps_identities(h, 1, 1)["star_l_star"]
    D, a1 = discriminant(h), h.coeff(1)
    assert lhs.apply({blade(1): 1}) == rhs.apply({blade(1): 1}) == {blade(): D * a1}
    assert lhs.apply({blade(2): 1}) == rhs.apply({blade(2): 1}) == {}


def test_starcomps_k0_iota_side():
    h = _generic_h(4)
    lhs, rhs = starcomps_identities(h, 0, 2)["star_iota_star"]
    assert lhs == rhs


@pytest.mark.parametrize("n", [2, 4])
def test_starcomps_hold_for_psi_delta_k(n):
    t = SQRT2_I
    for k in range(n + 1):
        assert check_starcomps(build_psi_delta_k(n, k, t.sqrt_m1(), t)) == []


@pytest.mark.parametrize("n", [1, 3])
def test_starcomps_signs_are_for_even_n(n):
    # for odd n the two contraction identities hold only up to an overall -1
    t = SQRT2_I
    for k in range(n + 1):
        h = build_psi_delta_k(n, k, t.sqrt_m1(), t)
        for i in range(1, n + 1):
            ids = starcomps_identities(h, k, i)
            for name in ("star_l_star", "star_l"):
                assert ids[name][0] == ids[name][1]
            for name in ("star_iota_star", "star_iota"):
                assert ids[name][0] == -ids[name][1]


@pytest.mark.parametrize("n", [2, 4])
def test_starcomps_hold_for_random_compatible_forms(n):
    rng = random.Random(n)
    for tower in (SQRT5_I, SQRT3_TWISTED):
        for _ in range(3):
            assert check_starcomps(random_diagonal_form(n, tower, rng)) == []


def test_starcomps_require_compatibility():
    with pytest.raises(NotCompatible):
        check_starcomps(HermitianData(2, (1, 1, 1, 2), Q_I))


# --- L+- -----------------------------------------------------------------------------


def test_L_example_n2():
    t = SQRT5_I
    h = _generic_h(2, t, 3)
    lam, D = compatibility_lambda(h), discriminant(h)
    Lp = build_L(h, "+")
    # S+ basis: e_empty (0), e_12 (1); d = floor(-1/2) = -1 on degree 0
    assert Lp.op.apply({0: 1}) == {1: -lam}
    assert Lp.scalar_expected == -D * lam
    assert L_squared_holds(Lp)


def test_L_on_middle_degree_is_star():
    n = 4
    h = _generic_h(n, SQRT2_I, 5)
    L = build_L(h, "+")  # m = 2, degree 2 is in S+
    from halfspin.exterior import degree_projector
    P = degree_projector(n, 2)
    assert L.full @ P == hodge_star(h).op @ P


def test_L_scalar_example_n6():
    t = SQRT2_I
    d = t.sqrt_m1()
    h, _ = permute_good_basis(build_psi_delta_k(6, 1, d, t), 1, 1, 4)
    assert discriminant(h) == -d * d
    L = build_L(h, "-")
    assert L.scalar_expected == d * d
    assert L_squared_holds(L)


def test_L_rejects_odd_n_and_bad_sign():
    with pytest.raises(ValueError):
        build_L(build_psi_delta_k(3, 1, 2, Q_I), "+")
    with pytest.raises(ValueError):
        build_L(build_psi_delta_k(2, 1, 2, Q_I), "*")


@pytest.mark.parametrize("n", [2, 4])
def test_L_squares_and_commutes(n):
    for tower in (SQRT2_I, SQRT3_TWISTED):
        h = _generic_h(n, tower, 7 * n)
        basis = g0_basis(h)
        for sign in "+-":
            L = build_L(h, sign)
            assert L_squared_holds(L)
            res = check_commutes_g0(L, basis)
            assert res.ok and res.checked == len(basis)
            assert graded_commutation_failures(L, basis) == []


def test_L_scalars_follow_parity_of_m():
    h = _generic_h(4, SQRT5_I, 2)
    lam, D = compatibility_lambda(h), discriminant(h)
    assert L_scalar(h, "+") == D  # m = 2 even, S+ is the parity of m
    assert L_scalar(h, "-") == D * lam
    h = _generic_h(2, SQRT5_I, 2)
    lam, D = compatibility_lambda(h), discriminant(h)
    assert L_scalar(h, "-") == -D and L_scalar(h, "+") == -D * lam


def test_single_generator_outside_g0_fails_to_commute():
    h = _generic_h(2, SQRT5_I, 4)
    L = build_L(h, "+")
    plus, minus = spin_lift(so_generator(1, 2, 2), 2)
    res = check_commutes_g0(L, [SimpleNamespace(spin_plus=plus, spin_minus=minus, label="X12")])
    assert not res.ok and res.counterexample == "X12"


def test_zero_operator_commutes():
    h = _generic_h(2, SQRT5_I, 4)
    L = build_L(h, "-")
    z = LinOp.zero(2)
    assert check_commutes_g0(L, [SimpleNamespace(spin_plus=z, spin_minus=z, label="0")]).ok


def test_commutation_dimension_mismatch():
    h = _generic_h(2, SQRT5_I, 4)
    L = build_L(h, "+")
    z = LinOp.zero(4)
    with pytest.raises(ValueError):
        check_commutes_g0(L, [SimpleNamespace(spin_plus=z, spin_minus=z, label="0")])


@pytest.mark.parametrize("n", [2, 4])
def test_displayed_chain(n):
    h = _generic_h(n, SQRT3_TWISTED, 11)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                for k in range(n + 1):
                    assert displayed_chain_holds(h, i, j, k), (i, j, k)


def test_L_block_agrees_with_restriction():
    n = 4
    h = _generic_h(n, SQRT2_I, 1)
    for sign, parity in (("+", EVEN), ("-", ODD)):
        L = build_L(h, sign)
        assert restrict_half_spin(L.full, parity, n) == L.op
        assert restrict_half_spin(L.full, 1 - parity, n).is_zero()
