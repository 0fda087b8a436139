import itertools
import random
from math import comb

import pytest

from smallcovers.acceptance import random_general_position_weights, sphere_betti
from smallcovers.chain import betti_mod2, quotient_by_action, RegularityError
from smallcovers.gf2 import GF2Matrix, GF2Vector
from smallcovers.standard_action import (
    SignSubgroup,
    WeightsNotInGeneralPosition,
    cross_polytope_simplices,
    cross_polytope_sphere,
    is_generated_by_rotations,
    quotient_simplicial,
    quotient_sphere_homology,
    simplicial_complex,
    stabilizer,
    stabilizer_order_formula,
    standard_G,
    weak_equivalence_iso,
)


def strings(H):
    return [str(v) for v in H.elements()]


def even_weight(n):
    return sorted(x for x in range(1 << n) if bin(x).count("1") % 2 == 0)


def test_standard_G_small():
    assert strings(standard_G(2)) == ["00", "11"]
    assert strings(standard_G(3)) == ["000", "110", "101", "011"]
    assert standard_G(1).order == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_standard_G_is_even_weight(n):
    G = standard_G(n)
    assert G.order == 2 ** (n - 1)
    assert sorted(G.element_set()) == even_weight(n)


def test_stabilizer_examples():
    G4 = standard_G(4)
    H = stabilizer(G4, [0, 1, 2])
    assert H.order == 4
    assert sorted(strings(H)) == sorted(["0000", "1100", "1010", "0110"])
    for I in ([], [0], [3]):
        assert stabilizer(G4, I).order == 1
    assert stabilizer(G4, range(4)).element_set() == G4.element_set()


def test_order_formula_examples():
    assert stabilizer_order_formula(3) == 4
    assert stabilizer_order_formula(2) == 2
    assert stabilizer_order_formula(10) == 512
    assert stabilizer_order_formula(0) == 1


@pytest.mark.parametrize("k", range(1, 13))
def test_order_formula_binomial_oracle(k):
    assert sum(comb(k, j) for j in range(0, k + 1, 2)) == 2 ** (k - 1) == stabilizer_order_formula(k)
    assert stabilizer(standard_G(max(k, 2)), range(k)).order == 2 ** (k - 1)


def test_rotation_generation():
    assert is_generated_by_rotations(stabilizer(standard_G(5), [0, 2, 4]))
    assert not is_generated_by_rotations(SignSubgroup(4, (GF2Vector(0b1111, 4),)))
    assert is_generated_by_rotations(SignSubgroup(4, ()))


@pytest.mark.parametrize("n", range(2, 6))
def test_every_stabilizer_rotation_generated(n):
    G = standard_G(n)
    for r in range(2, n + 1):
        for I in itertools.combinations(range(n), r):
            assert is_generated_by_rotations(stabilizer(G, I))


def test_weak_equivalence_n3():
    ws = [GF2Vector(0b01, 2), GF2Vector(0b10, 2), GF2Vector(0b11, 2)]
    phi = weak_equivalence_iso(ws)
    assert sorted(v.value for v in phi.image()) == sorted(standard_G(3).element_set())
    assert sorted(str(v) for v in phi.image()) == sorted(["000", "110", "101", "011"])


def test_weak_equivalence_zero_weight_rejected():
    with pytest.raises(WeightsNotInGeneralPosition, match="zero") as exc:
        weak_equivalence_iso([GF2Vector(0b01, 2), GF2Vector(0, 2), GF2Vector(0b01, 2)])
    assert exc.value.subset == (1,)


def test_weak_equivalence_dependent_subset_rejected():
    with pytest.raises(WeightsNotInGeneralPosition) as exc:
        weak_equivalence_iso([GF2Vector(0b01, 2), GF2Vector(0b01, 2), GF2Vector(0b10, 2)])
    assert exc.value.subset == (0, 1)


def test_weak_equivalence_n2_repeated_weight_is_general_position():
    # Z2^1 has one nonzero functional, so (e1*, e1*) has independent 1-subsets
    phi = weak_equivalence_iso([GF2Vector(1, 1), GF2Vector(1, 1)])
    assert sorted(str(v) for v in phi.image()) == ["00", "11"]


def test_weak_equivalence_image_invariant_under_automorphisms():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 6)
        ws = random_general_position_weights(rng, n)
        k = n - 1
        while True:
            A = GF2Matrix(tuple(rng.randrange(1 << k) for _ in range(k)), k)
            if A.rank() == k:
                break
        # precompose each weight with A: alpha o A has coordinates A^T alpha
        At = A.transpose()
        moved = [At.apply(w) for w in ws]
        phi, psi = weak_equivalence_iso(ws), weak_equivalence_iso(moved)
        assert sorted(v.value for v in phi.image()) == sorted(v.value for v in psi.image())
        assert sorted(v.value for v in psi.image()) == even_weight(n)


def test_cross_polytope_counts():
    for n in range(1, 6):
        C = cross_polytope_sphere(n)
        assert C.cell_counts == tuple(comb(n, d + 1) * 2 ** (d + 1) for d in range(n))
        assert betti_mod2(C) == sphere_betti(n - 1)


def test_sphere_quotient_examples():
    assert quotient_sphere_homology(2, standard_G(2)) == (1, 1)
    assert quotient_sphere_homology(3, standard_G(3)) == (1, 0, 1)
    for n in range(1, 5):
        assert quotient_sphere_homology(n, SignSubgroup(n, ())) == sphere_betti(n - 1)


def test_square_quotient_cells():
    C = cross_polytope_sphere(2)
    flip = {s: tuple(-x for x in s) for s in C.all_cells()}
    Q, _ = quotient_by_action(C, [{}, flip])
    assert Q.cell_counts == (2, 2)


def test_antipodal_control_is_rp3():
    H = SignSubgroup(4, (GF2Vector(0b1111, 4),))
    assert quotient_sphere_homology(4, H) == (1, 1, 1, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_sign_action_is_regular(n):
    # h fixes a simplex setwise only if it fixes each of its vertices
    simplices = cross_polytope_simplices(n)
    for h in range(1 << n):
        for s in simplices:
            image = {-x if (h >> (abs(x) - 1)) & 1 else x for x in s}
            if image == set(s):
                assert all(not (h >> (abs(x) - 1)) & 1 for x in s)


def test_barycentric_fallback_on_irregular_action():
    # swapping two vertices of a triangle boundary fixes an edge but flips its ends
    triangle = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
    swap = {1: 2, 2: 1, 3: 3}
    C = simplicial_complex(triangle)
    perm = {s: tuple(sorted(swap[x] for x in s)) for s in triangle}
    with pytest.raises(RegularityError):
        quotient_by_action(C, [{}, perm])
    Q, subdivided = quotient_simplicial(triangle, [lambda x: x, lambda x: swap[x]], canon=lambda s: tuple(sorted(s)))
    assert subdivided
    assert betti_mod2(Q) == (1, 0)  # an interval
