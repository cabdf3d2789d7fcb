"""The ten acceptance criteria, each with its exact tolerance and runtime limit."""

import io
import random
from fractions import Fraction

import pytest

from dynamials.cli import run
from dynamials.cyclic_algebra import (
    INFINITY,
    alg_inverse,
    candidate_places,
    hasse_profile,
    hilbert_symbol,
    is_division,
    make_cyclic_algebra,
    mat_add,
    mat_mul,
    matrix_rep,
)
from dynamials.dynamial import (
    AlgebraTerm,
    Cross,
    NoClassicalCounterpart,
    RingDescriptor,
    ZGroup,
    factorize,
    index,
    is_minimal,
    is_normal_form,
    make_dynamial,
    normalize_crossed_product,
    signature,
)
from dynamials.ideal_lattice import factor_ideal, ideals_of_norm, split_prime
from dynamials.numfield import galois_apply, make_quadratic_field, norm
from dynamials.rm_torus import SHIFT, IntMatrix2, rm_cayley_hamilton, rm_matrix, unit_power_traces, weyl_substitute
from dynamials.surface_link import classify

from acceptance_report import criterion
from cli_cases import CASES, golden_path
from oracles import (
    enumerate_ideals,
    hilbert_bruteforce,
    pell_scan,
    prime_sieve,
    quad_power,
    trial_factor,
    weyl_phase_by_action,
)

pytestmark = pytest.mark.acceptance

QI = make_quadratic_field(-1)
Q5 = make_quadratic_field(-5)
i = QI.gen
H = make_cyclic_algebra(QI, -1)


def _rand_gaussian(rng):
    return QI(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))


def _splitting_oracle(D, p):
    if D % p == 0:
        return "ramified"
    if p == 2:
        return "split" if D % 8 == 1 else "inert"
    roots = sum(1 for r in range(p) if (r * r - D) % p == 0)
    return "split" if roots == 2 else "inert"


def test_criterion_01_quaternion_construction():
    with criterion(1, "quaternion construction and matrix homomorphism", 2.0):
        rng = random.Random(101)
        u = H.u
        u_inv = alg_inverse(u)
        Mu, Mu_inv = matrix_rep(u), matrix_rep(u_inv)
        assert u * u == H.embed(-1)
        assert mat_mul(Mu, Mu) == matrix_rep(H.embed(-1))
        for _ in range(100):
            alpha = _rand_gaussian(rng)
            target = H.embed(galois_apply(alpha))
            assert u * H.embed(alpha) * u_inv == target
            assert mat_mul(mat_mul(Mu, matrix_rep(H.embed(alpha))), Mu_inv) == matrix_rep(target)
        for _ in range(500):
            x = H.element([_rand_gaussian(rng), _rand_gaussian(rng)])
            y = H.element([_rand_gaussian(rng), _rand_gaussian(rng)])
            assert matrix_rep(x * y) == mat_mul(matrix_rep(x), matrix_rep(y))
            assert matrix_rep(x + y) == mat_add(matrix_rep(x), matrix_rep(y))


def test_criterion_02_wedderburn():
    with criterion(2, "Wedderburn norm criterion verdicts", 1.0):
        assert is_division(H).status == "division"
        split = make_cyclic_algebra(QI, 1)
        v = is_division(split)
        assert (v.status, v.witness_k, v.witness_gamma) == ("not_division", 1, QI.one)
        v = is_division(make_cyclic_algebra(QI, 5))
        assert (v.status, v.witness_k, v.witness_gamma) == ("not_division", 1, 2 + i)
        assert norm(v.witness_gamma) == 5
        u = split.u
        assert (split.one + u) * (split.one - u) == split.zero
        assert split.one + u != split.zero and split.one - u != split.zero


def test_criterion_03_dynamial_arithmetic():
    with criterion(3, "dynamial factorization, minimality and index map", 5.0):
        R = RingDescriptor.algebra(H)
        flags = prime_sieve(10**4)
        rng = random.Random(303)
        for m in range(1, 10**4 + 1):
            x = make_dynamial(R, m)
            f = factorize(x)
            assert f.product() == x
            assert is_minimal(x) == flags[m]
            if m % 10 == 0:
                primes = list(f.minimal_factors)
                rng.shuffle(primes)
                acc = make_dynamial(R, 1)
                for p in primes:
                    acc = acc * make_dynamial(R, p)
                assert factorize(acc) == f
        for _ in range(1000):
            a, b = rng.randint(1, 10**6), rng.randint(1, 10**6)
            x, y = make_dynamial(R, a), make_dynamial(R, b)
            assert index(x * y) == index(x) * index(y)


def test_criterion_04_ideal_factorization():
    with criterion(4, "ideal factorization and splitting in Q(i), Q(sqrt-5)", 10.0):
        for E in (QI, Q5):
            inert = set()
            for p, flag in enumerate(prime_sieve(500)):
                if flag:
                    s = split_prime(E, p)
                    assert s.type == _splitting_oracle(E.discriminant, p)
                    if s.type == "inert":
                        inert.add(p)
            for m in range(1, 501):
                ideals = ideals_of_norm(E, m)
                for I in ideals:
                    fact = factor_ideal(I)
                    assert all(P.f == 1 or P.p in inert for P, _ in fact.factors)
                    assert fact.product(E) == I
                odd_inert = any(p in inert and k % 2 for p, k in trial_factor(m))
                assert (not ideals) == odd_inert


def test_criterion_05_weyl_phase():
    with criterion(5, "Weyl phase multiplier equals det", 1.0):
        rng = random.Random(505)
        assert weyl_substitute(IntMatrix2(1, 0, 0, 1)) == 1
        assert weyl_substitute(SHIFT) == 1
        for _ in range(1000):
            a, b, c, d = (rng.randint(-20, 20) for _ in range(4))
            q = weyl_substitute(IntMatrix2(a, b, c, d))
            assert q == a * d - b * c == weyl_phase_by_action(a, b, c, d)


def test_criterion_06_rm_matrix():
    with criterion(6, "RM matrix determinant, Cayley-Hamilton, trace recurrence", 2.0):
        flags = prime_sieve(100)
        for d in (2, 5):
            E = make_quadratic_field(d)
            for p in range(100):
                if flags[p]:
                    for k in range(1, 11):
                        r = rm_matrix(E, p, k)
                        assert r.matrix.det == p
                        assert rm_cayley_hamilton(r).holds
            eps = pell_scan(d)
            traces = unit_power_traces(E, 12)
            for k in range(13):
                assert traces[k] == 2 * quad_power(d, eps, k)[0]


def test_criterion_07_hilbert():
    vals = [v for v in range(-20, 21) if v]
    places = (2, 3, 5, 7, INFINITY)
    oracle = {(a, b, v): hilbert_bruteforce(a, b, v) for v in places for a in vals for b in vals}
    with criterion(7, "Hilbert symbol oracle, reciprocity, Hasse profile of H(Q)", 10.0):
        for (a, b, v), expected in oracle.items():
            assert hilbert_symbol(a, b, v) == expected
        rng = random.Random(707)
        for _ in range(200):
            a = rng.choice([v for v in range(-50, 51) if v])
            b = rng.choice([v for v in range(-50, 51) if v])
            total = 1
            for v in candidate_places(a, b):
                total *= hilbert_symbol(a, b, v)
            assert total == 1
        assert hasse_profile(H).as_dict() == {2: Fraction(1, 2), INFINITY: Fraction(1, 2)}


def test_criterion_08_classification():
    flags = prime_sieve(500)
    oracle = {p: len(enumerate_ideals(-1, p)) for p in range(2, 100) if flags[p]}
    with criterion(8, "surface knot and link classification codebook", 5.0):
        R = RingDescriptor.algebra(H)
        for p, count in oracle.items():
            out = classify(make_dynamial(R, p))
            assert len(out) == count
            for d in out:
                assert d.kind == "knot" and len(d.components) == 1
        for m in range(1, 501):
            fac = trial_factor(m)
            out = classify(make_dynamial(R, m))
            types = {p: split_prime(QI, p).type for p, _ in fac}
            if any(types[p] == "inert" and k % 2 for p, k in fac):
                assert out == []
            if len(fac) >= 2 and all(k == 1 and types[p] == "split" for p, k in fac):
                assert out and all(d.kind == "link" and len(d.components) >= 2 for d in out)
            for d in out:
                total = 1
                for c in d.components:
                    total *= c.p ** (c.f * c.k)
                assert total == m


def test_criterion_09_crossed_products():
    # oracle expectations are computed outside the timed region
    oracle = {m: enumerate_ideals(-1, m) for m in range(1, 201)}
    with criterion(9, "crossed-product rewriting to normal form", 3.0):
        A = make_cyclic_algebra(QI, 3)
        for m in range(1, 201):
            e = Cross(AlgebraTerm(A), ZGroup(m))
            out = normalize_crossed_product(e)
            expected = oracle[m]
            if not expected:
                assert out == NoClassicalCounterpart(QI, m)
                continue
            assert len(out) == len(expected)
            assert sorted(f.inner.inner.ideal.hnf for f in out) == sorted(expected)
            for f in out:
                assert is_normal_form(f)
                assert signature(f) == signature(e)


def test_criterion_10_cli_determinism():
    with criterion(10, "CLI golden-file byte equality", 2.0):
        for verb, argv in CASES.items():
            golden = golden_path(verb).read_text()
            for _ in range(2):
                out = io.StringIO()
                assert run(argv, out, io.StringIO()) == 0
                assert out.getvalue() == golden
