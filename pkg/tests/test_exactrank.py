import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from mpslab import (
    ExactMatrix,
    MultiQuad,
    certify_full_rank,
    ci_to_occupation,
    max_sector_rank,
    mq_add,
    mq_det,
    mq_is_zero,
    mq_mul,
    prime_state,
    primes_below,
    sector_blocks,
    unfold,
)
from mpslab.errors import UnsupportedEntryError
from mpslab.exactrank import float_matrix
from mpslab.fock import SectorBlock


def sq(p, c=1):
    return MultiQuad.sqrt_prime(p, c)


def test_sqrt2_squared_is_two():
    got = mq_mul(sq(2), sq(2))
    assert got == MultiQuad.from_rational(2)


def test_sqrt2_times_sqrt3():
    assert mq_mul(sq(2), sq(3)) == MultiQuad({frozenset({2, 3}): Fraction(1)})


def test_conjugate_product():
    a = mq_add(sq(2), sq(3))
    b = mq_add(sq(2), MultiQuad({frozenset({3}): Fraction(-1)}))
    assert mq_mul(a, b) == MultiQuad.from_rational(-1)


def test_mq_is_zero():
    assert mq_is_zero(MultiQuad.zero())
    assert mq_is_zero(mq_add(sq(5), sq(5, -1)))
    diff = mq_add(MultiQuad({frozenset({2, 7}): Fraction(1)}),
                  MultiQuad({frozenset({3, 5}): Fraction(-1)}))
    assert not mq_is_zero(diff)


def test_mq_det_1x1():
    m = ExactMatrix(((sq(5),),))
    assert mq_det(m) == sq(5)


def test_mq_det_2x2_sqrt14_minus_sqrt15():
    m = ExactMatrix(((sq(2), sq(3)), (sq(5), sq(7))))
    d = mq_det(m)
    assert d == MultiQuad({frozenset({2, 7}): Fraction(1), frozenset({3, 5}): Fraction(-1)})
    assert d.to_float() == pytest.approx(math.sqrt(14) - math.sqrt(15), rel=1e-12)
    assert d.to_float() == pytest.approx(-0.1313, abs=5e-5)
    assert not mq_is_zero(d)


def test_mq_det_equal_rows_vanishes():
    row = (sq(2), sq(3), sq(5))
    m = ExactMatrix((row, (sq(7), sq(11), sq(13)), row))
    assert mq_is_zero(mq_det(m))


def test_mq_det_matches_float_determinant():
    rng = np.random.default_rng(0)
    pool = primes_below(10_000).primes
    for _ in range(100):
        ps = rng.choice(len(pool), size=16, replace=False)
        signs = rng.choice([-1, 1], size=16)
        entries = tuple(
            tuple(sq(int(pool[ps[4 * i + j]]), int(signs[4 * i + j])) for j in range(4))
            for i in range(4)
        )
        m = ExactMatrix(entries)
        exact = mq_det(m).to_float()
        approx = float(np.linalg.det(float_matrix(m)))
        assert exact == pytest.approx(approx, rel=1e-9)


def test_mul_commutative_associative():
    rng = np.random.default_rng(1)
    primes = primes_below(100).primes

    def rand_mq():
        n = rng.integers(1, 4)
        coeffs = {}
        for _ in range(n):
            s = frozenset(int(primes[i]) for i in rng.choice(len(primes), size=rng.integers(0, 3), replace=False))
            coeffs[s] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 9)))
        return MultiQuad(coeffs)

    for _ in range(1000):
        a, b, c = rand_mq(), rand_mq(), rand_mq()
        assert mq_mul(a, b) == mq_mul(b, a)
        assert mq_mul(mq_mul(a, b), c) == mq_mul(a, mq_mul(b, c))


def test_nonzero_implies_float_nonzero():
    rng = np.random.default_rng(2)
    primes = primes_below(1000).primes
    for _ in range(200):
        s1 = frozenset(int(primes[i]) for i in rng.choice(len(primes), 2, replace=False))
        a = MultiQuad({s1: Fraction(1), frozenset(): Fraction(int(rng.integers(-3, 4)))})
        if not mq_is_zero(a):
            assert abs(a.evaluate(dps=60)) > 1e-40


def test_certify_prime_4_2_middle_block():
    pool = primes_below(2**6)
    t = ci_to_occupation(prime_state(4, 2))
    blocks = sector_blocks(unfold(t, 2), 2)
    mid = [b for b in blocks if b.n == 1][0]
    assert mid.entries.shape == (2, 2)
    cert = certify_full_rank(mid, pool)
    assert cert.passed and cert.rank == 2
    assert not mq_is_zero(cert.det)


def test_certify_1x1():
    pool = primes_below(100)
    b = SectorBlock(1, 1, (1,), (0,), np.array([[math.sqrt(13)]]))
    cert = certify_full_rank(b, pool)
    assert cert.passed and cert.rank == 1


def test_certify_prime_6_3_all_blocks():
    pool = primes_below(2**9)
    t = ci_to_occupation(prime_state(6, 3))
    total = 0
    for b in sector_blocks(unfold(t, 3), 3):
        cert = certify_full_rank(b, pool)
        assert cert.passed
        total += cert.rank
    assert total == max_sector_rank(6, 3, 3) == 8


def test_certify_rejects_non_prime_entry():
    pool = primes_below(100)
    b = SectorBlock(1, 1, (1,), (0,), np.array([[1.5]]))
    with pytest.raises(UnsupportedEntryError):
        certify_full_rank(b, pool)


def test_certify_handles_negative_entries():
    pool = primes_below(100)
    b = SectorBlock(2, 1, (1, 2), (1, 2),
                    np.array([[-math.sqrt(2), math.sqrt(3)],
                              [math.sqrt(5), -math.sqrt(7)]]))
    cert = certify_full_rank(b, pool)
    assert cert.passed and cert.rank == 2


def test_certified_ranks_match_numerical_ranks():
    for seed in range(10):
        L, N = 6, 3
        state = prime_state(L, N, seed=seed)
        t = ci_to_occupation(state)
        pool = primes_below(2 ** (N + L))
        for k in range(1, L):
            u = unfold(t, k)
            s = np.linalg.svd(u.matrix, compute_uv=False)
            numeric = int(np.sum(s > 1e-10 * s[0]))
            certified = sum(
                certify_full_rank(b, pool).rank for b in sector_blocks(u, N)
            )
            assert certified == numeric == max_sector_rank(L, N, k)
