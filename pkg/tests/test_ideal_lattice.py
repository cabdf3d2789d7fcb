import random

import pytest
from hypothesis import given, settings, strategies as st

from dynamials.ideal_lattice import (
    IdealFactorization,
    QuadIdeal,
    factor_ideal,
    ideal_product,
    ideals_of_norm,
    kronecker_symbol,
    lattice_hnf,
    principal_ideal,
    split_prime,
    unit_ideal,
)
from dynamials.numfield import make_quadratic_field

from oracles import enumerate_ideals, gaussian_integers_of_norm, ideal_product_hnf, prime_sieve, trial_factor

QI = make_quadratic_field(-1)
Q5 = make_quadratic_field(-5)
i = QI.gen
PRIMES = [p for p, flag in enumerate(prime_sieve(500)) if flag]


def test_split_prime_five_in_gaussian_integers():
    # 5 = 1^2 + 2^2: the norm-5 scan finds elements, so 5 splits
    assert gaussian_integers_of_norm(5)
    s = split_prime(QI, 5)
    assert s.type == "split"
    assert {P.base for P in s.primes} == {principal_ideal(QI, 2 + i), principal_ideal(QI, 2 - i)}
    assert principal_ideal(QI, 2 + i) * principal_ideal(QI, 2 - i) == principal_ideal(QI, QI(5))


def test_split_prime_three_is_inert():
    assert gaussian_integers_of_norm(3) == []
    s = split_prime(QI, 3)
    assert s.type == "inert"
    (P,) = s.primes
    assert P.norm == 9 and P.f == 2


def test_split_prime_two_is_ramified():
    s = split_prime(QI, 2)
    assert s.type == "ramified"
    (P,) = s.primes
    assert P.base == principal_ideal(QI, 1 + i)
    # (1+i)^2 = 2i
    assert (1 + i) * (1 + i) == 2 * i
    assert P.base * P.base == principal_ideal(QI, QI(2))


@pytest.mark.parametrize("d", [-1, -5, 2, 5, -3, 13])
def test_efg_and_kronecker(d):
    E = make_quadratic_field(d)
    for p in PRIMES[:40]:
        s = split_prime(E, p)
        g = len(s.primes)
        for P in s.primes:
            assert P.e * P.f * g == 2
            assert P.base.norm == p**P.f
        expected = {1: "split", -1: "inert", 0: "ramified"}[kronecker_symbol(E.discriminant, p)]
        assert s.type == expected


def test_kronecker_symbol_by_counting_roots():
    # (D/p) = (#roots of X^2 - D mod p) - 1 for odd p not dividing D
    for D in (-4, -20, 8, 5, 13, -3):
        for p in PRIMES[1:30]:
            if D % p == 0:
                continue
            roots = sum(1 for r in range(p) if (r * r - D) % p == 0)
            assert kronecker_symbol(D, p) == roots - 1


def test_ideals_of_norm_examples():
    assert [I.hnf for I in ideals_of_norm(QI, 9)] == enumerate_ideals(-1, 9) == [(3, 0, 3)]
    assert ideals_of_norm(QI, 1) == [unit_ideal(QI)]
    assert ideals_of_norm(QI, 3) == [] == enumerate_ideals(-1, 3)
    assert [I.hnf for I in ideals_of_norm(QI, 5)] == enumerate_ideals(-1, 5) == [(5, 2, 1), (5, 3, 1)]
    assert [I.hnf for I in ideals_of_norm(QI, 10)] == enumerate_ideals(-1, 10) == [(10, 3, 1), (10, 7, 1)]


@pytest.mark.parametrize("d", [-1, -5, 5, 2])
def test_ideals_of_norm_matches_exhaustive_enumeration(d):
    E = make_quadratic_field(d)
    for m in range(1, 121):
        got = [I.hnf for I in ideals_of_norm(E, m)]
        assert got == sorted(enumerate_ideals(d, m))


def test_ideal_product_examples():
    P = principal_ideal(QI, 2 + i)
    Pbar = principal_ideal(QI, 2 - i)
    assert (P * Pbar).hnf == ideal_product_hnf(-1, P.hnf, Pbar.hnf) == (5, 0, 5)
    assert P * unit_ideal(QI) == P
    P2 = split_prime(QI, 2).primes[0].base
    assert (P2 * P2).hnf == ideal_product_hnf(-1, P2.hnf, P2.hnf) == (2, 0, 2)


def test_ideal_product_matches_oracle_in_q_sqrt_minus5():
    for m1 in range(1, 13):
        for m2 in range(1, 13):
            for I in ideals_of_norm(Q5, m1):
                for J in ideals_of_norm(Q5, m2):
                    assert ideal_product(I, J).hnf == ideal_product_hnf(-5, I.hnf, J.hnf)


def test_norm_multiplicative_on_500_random_pairs():
    rng = random.Random(11)
    pool = {E: [I for m in range(1, 1001) for I in ideals_of_norm(E, m)] for E in (QI, Q5)}
    for k in range(500):
        E = QI if k % 2 else Q5
        I, J = rng.choice(pool[E]), rng.choice(pool[E])
        assert (I * J).norm == I.norm * J.norm


def test_factor_ideal_examples():
    ten = principal_ideal(QI, QI(10))
    fact = factor_ideal(ten)
    p2 = principal_ideal(QI, 1 + i)
    p5 = principal_ideal(QI, 2 + i)
    p5bar = principal_ideal(QI, 2 - i)
    assert [(P.base, k) for P, k in fact.factors] == sorted(
        [(p2, 2), (p5, 1), (p5bar, 1)], key=lambda t: (t[0].norm, t[0].hnf)
    )
    assert fact.product(QI) == ten
    assert factor_ideal(unit_ideal(QI)).factors == ()
    P = split_prime(QI, 13).primes[1]
    assert factor_ideal(P.base).factors == ((P, 1),)


@pytest.mark.parametrize("E", [QI, Q5], ids=["Q(i)", "Q(sqrt-5)"])
def test_factorization_round_trip_up_to_500(E):
    for m in range(1, 501):
        for I in ideals_of_norm(E, m):
            fact = factor_ideal(I)
            assert fact.product(E) == I
            keys = [P.sort_key() for P, _ in fact.factors]
            assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_emptiness_exactly_at_odd_inert_valuations():
    for E in (QI, Q5):
        for m in range(1, 501):
            odd_inert = any(split_prime(E, p).type == "inert" and k % 2 for p, k in trial_factor(m))
            assert (ideals_of_norm(E, m) == []) == odd_inert


def test_non_principal_ideal_in_q_sqrt_minus5():
    (P2,) = split_prime(Q5, 2).primes
    # no element of norm 2: x^2 + 5y^2 = 2 has no solution
    assert not any(x * x + 5 * y * y == 2 for x in range(-2, 3) for y in range(-1, 2))
    assert P2.base.norm == 2
    assert P2.base * P2.base == principal_ideal(Q5, Q5(2))


def test_hnf_validation():
    with pytest.raises(ValueError):
        QuadIdeal(QI, 5, 1, 1)  # 1 + i has norm 2, not closed as an index-5 ideal
    with pytest.raises(ValueError):
        QuadIdeal(QI, 4, 1, 2)
    assert QuadIdeal(QI, 5, 2, 1).norm == 5


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=2, max_size=6))
def test_lattice_hnf_spans_the_same_lattice(vectors):
    if all(y == 0 for _, y in vectors) or all(x * 0 + y == 0 for x, y in vectors):
        return
    # full rank check by determinant of some pair
    if not any(x1 * y2 - x2 * y1 for (x1, y1) in vectors for (x2, y2) in vectors):
        return
    a, b, c = lattice_hnf(vectors)
    for x, y in vectors:
        assert y % c == 0 and (x - (y // c) * b) % a == 0
    det = abs(next(x1 * y2 - x2 * y1 for (x1, y1) in vectors for (x2, y2) in vectors if x1 * y2 - x2 * y1))
    assert det % (a * c) == 0


def test_json_round_trip():
    for I in ideals_of_norm(Q5, 30):
        assert QuadIdeal.from_json(I.to_json()) == I
        fact = factor_ideal(I)
        assert IdealFactorization.from_json(fact.to_json()) == fact
    assert QuadIdeal(QI, 5, 2, 1).to_json() == {"a": 5, "b": 2, "c": 1, "field": "Q(sqrt,-1)"}
