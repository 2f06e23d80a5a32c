import numpy as np
import pytest

from mpslab import (
    CIState,
    MutualInfoMatrix,
    apply_permutation,
    bell_state,
    ci_to_occupation,
    exhaustive_best_order,
    fiedler_order,
    greedy_best_order,
    max_sector_rank,
    mutual_information_matrix,
    pair_entropy,
    pairing_permutation,
    prime_state,
    random_state,
    site_entropy,
    tt_svd,
)
from mpslab.errors import OrderingSearchError, ZeroStateError
from mpslab.ordering import OrbitalPermutation, bond_profile
from oracles import reorder_oracle

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def test_identity_permutation_is_noop():
    s = random_state(5, 2, seed=0)
    assert apply_permutation(s, OrbitalPermutation.identity(5)) == s


def test_swap_sign():
    s = CIState(3, 2, {(1, 2): 1.0})
    swapped = apply_permutation(s, OrbitalPermutation((2, 1, 3)))
    assert swapped.terms == {(1, 2): -1.0}


def test_pairing_collapses_bell_bond_dimension():
    for N in (2, 3):
        paired = apply_permutation(bell_state(N), pairing_permutation(N))
        assert max(tt_svd(ci_to_occupation(paired), 1e-10).bond_dims) == 2


def test_pairing_permutation_values():
    assert pairing_permutation(2).perm == (1, 3, 2, 4)
    assert pairing_permutation(1).perm == (1, 2)
    sigma = pairing_permutation(3)
    assert apply_permutation(
        apply_permutation(random_state(6, 3, seed=1), sigma), sigma.inverse()
    ) == random_state(6, 3, seed=1)


def test_permutation_roundtrip_exact():
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = random_state(6, 3, seed=int(rng.integers(1000)))
        perm = OrbitalPermutation(tuple(int(x) + 1 for x in rng.permutation(6)))
        back = apply_permutation(apply_permutation(s, perm), perm.inverse())
        assert back == s


def test_permutation_preserves_norm():
    s = random_state(6, 2, seed=5)
    perm = OrbitalPermutation((3, 1, 6, 2, 5, 4))
    assert apply_permutation(s, perm).norm() == pytest.approx(s.norm(), rel=1e-15)


def test_sign_oracle_agreement():
    rng = np.random.default_rng(11)
    for _ in range(100):
        L = int(rng.integers(2, 7))
        N = int(rng.integers(1, L + 1))
        s = random_state(L, N, seed=int(rng.integers(10_000)))
        perm = OrbitalPermutation(tuple(int(x) + 1 for x in rng.permutation(L)))
        got = apply_permutation(s, perm).terms
        want = reorder_oracle(s, perm)
        assert got == want


def test_site_entropy_product_state():
    s = CIState(2, 1, {(1,): 1.0})
    assert site_entropy(s, 1) == pytest.approx(0.0, abs=1e-12)


def test_site_entropy_bell_one_bit():
    s = CIState(2, 1, {(1,): INV_SQRT2, (2,): INV_SQRT2})
    assert site_entropy(s, 1) == pytest.approx(1.0, abs=1e-12)


def test_pair_entropy_bell2():
    s = bell_state(2)
    # the paired couple {1,3} carries a full pair orbital, so the state
    # factorizes across that cut and its entropy vanishes
    assert pair_entropy(s, 1, 3) == pytest.approx(0.0, abs=1e-10)
    assert pair_entropy(s, 1, 2) == pytest.approx(2.0, abs=1e-10)


def test_entropy_zero_state_raises():
    z = CIState(3, 1, {})
    with pytest.raises(ZeroStateError):
        site_entropy(z, 1)
    with pytest.raises(ZeroStateError):
        pair_entropy(z, 1, 2)


def test_mutual_information_single_determinant():
    s = CIState(4, 2, {(1, 3): 1.0})
    mi = mutual_information_matrix(s)
    assert np.max(np.abs(mi.I)) <= 1e-10


def test_mutual_information_bell_pairs():
    mi = mutual_information_matrix(bell_state(2))
    for k in (1, 2):
        assert mi.I[k - 1, k + 2 - 1] > 0.1
    assert abs(mi.I[0, 1]) <= 1e-10  # unpaired couple
    assert abs(mi.I[0, 3]) <= 1e-10


def test_mutual_information_symmetric():
    for seed in range(5):
        mi = mutual_information_matrix(random_state(5, 2, seed=seed))
        assert np.array_equal(mi.I, mi.I.T)
        assert (np.diag(mi.I) == 0).all()
        assert (mi.I >= 0).all()


def test_fiedler_all_zero_mi_identity():
    mi = MutualInfoMatrix(np.zeros((4, 4)))
    assert fiedler_order(mi).perm == (1, 2, 3, 4)


def test_fiedler_path_graph_identity():
    L = 6
    I = np.zeros((L, L))
    for i in range(L - 1):
        I[i, i + 1] = I[i + 1, i] = 1.0
    assert fiedler_order(MutualInfoMatrix(I)).perm == tuple(range(1, L + 1))


def test_fiedler_bell3_places_pairs_adjacent():
    s = bell_state(3)
    order = fiedler_order(mutual_information_matrix(s))
    pos = {orb: i for i, orb in enumerate(order.perm)}
    for k in (1, 2, 3):
        assert abs(pos[k] - pos[k + 3]) == 1
    reordered = apply_permutation(s, order)
    assert max(tt_svd(ci_to_occupation(reordered), 1e-10).bond_dims) == 2


def test_exhaustive_best_order_bell2():
    sigma, score = exhaustive_best_order(bell_state(2))
    assert score[0] == 2


def test_exhaustive_best_order_prime_invariant():
    state = prime_state(4, 2)
    sigma, score = exhaustive_best_order(state)
    assert score[0] == 4
    # every ordering scores the same maximal profile
    from itertools import permutations

    want = tuple(max_sector_rank(4, 2, k) for k in (1, 2, 3))
    for p in permutations(range(1, 5)):
        assert bond_profile(state, OrbitalPermutation(p)) == want


def test_exhaustive_best_order_single_determinant():
    s = CIState(4, 2, {(2, 4): 1.0})
    sigma, score = exhaustive_best_order(s)
    assert score[0] == 1


def test_exhaustive_cap_and_greedy_fallback():
    s = random_state(9, 2, seed=0)
    with pytest.raises(OrderingSearchError):
        exhaustive_best_order(s)
    sigma, score = greedy_best_order(bell_state(3))
    assert score[0] == 2


@pytest.mark.parametrize("L,N", [(4, 2)])
def test_prime_state_rank_invariant_all_orderings(L, N):
    from itertools import permutations

    state = prime_state(L, N)
    want = tuple(max_sector_rank(L, N, k) for k in range(1, L))
    for p in permutations(range(1, L + 1)):
        assert bond_profile(state, OrbitalPermutation(p)) == want


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_bell_collapse_profile(N):
    s = bell_state(N)
    canon = bond_profile(s, OrbitalPermutation.identity(2 * N))
    assert max(canon) == 2**N
    paired = bond_profile(s, pairing_permutation(N))
    assert max(paired) == 2


def test_permutation_validation():
    with pytest.raises(ValueError):
        OrbitalPermutation((1, 1, 2))
    with pytest.raises(ValueError):
        apply_permutation(random_state(4, 2, seed=0), OrbitalPermutation((1, 2, 3)))
