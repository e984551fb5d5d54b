import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finicat.errors import NotAHomomorphism, ShapeMismatch
from finicat.finab import (
    FgAbGroup,
    IntMatrix,
    abelian_group,
    check_homomorphism,
    coequalizer_ab,
    cokernel,
    cyclic,
    direct_sum,
    free_abelian,
    is_smith_form,
    parse_group_name,
    pushout_ab,
    smith_normal_form,
    tensor_product,
)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def snf_postconditions(m: IntMatrix) -> None:
    s, u, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    assert is_smith_form(s)


def bilinear_count(m: int, n: int, k: int) -> int:
    """Distinct bilinear maps Z/m x Z/n -> Z/k.

    Candidates are fixed by their value at (1, 1); each one is kept only if
    additivity holds on every triple of representatives.
    """
    maps = set()
    for v in range(k):
        f = {(a, b): (a * b * v) % k for a in range(m) for b in range(n)}
        left = all(
            f[(a + a2) % m, b] == (f[a, b] + f[a2, b]) % k
            for a in range(m)
            for a2 in range(m)
            for b in range(n)
        )
        right = all(
            f[a, (b + b2) % n] == (f[a, b] + f[a, b2]) % k
            for a in range(m)
            for b in range(n)
            for b2 in range(n)
        )
        if left and right:
            maps.add(tuple(sorted(f.items())))
    return len(maps)


def hom_count_to_cyclic(g: FgAbGroup, k: int) -> int:
    rank, factors = g.canonical
    return k**rank * math.prod(math.gcd(d, k) for d in factors)


def test_identity_matrix_is_its_own_form():
    s, u, v = smith_normal_form(IntMatrix.identity(3))
    assert s == IntMatrix.identity(3)


def test_diag_2_3_becomes_1_6():
    s, _, _ = smith_normal_form(IntMatrix.of([[2, 0], [0, 3]]))
    assert s.diagonal_entries() == [1, 6]


def test_zero_and_empty_matrices():
    snf_postconditions(IntMatrix.zeros(2, 3))
    g = FgAbGroup(IntMatrix.zeros(3, 0))
    assert g.canonical == (3, ())
    assert str(g) == "Z^3"


def test_determinant_bareiss():
    assert IntMatrix.of([[2, 1], [7, 4]]).det() == 1
    assert IntMatrix.of([[1, 2, 3], [4, 5, 6], [7, 8, 10]]).det() == -3
    assert IntMatrix.of([[0, 1], [1, 0]]).det() == -1


def test_is_smith_form_detects_divisibility_failure():
    assert not is_smith_form(IntMatrix.diagonal([2, 3]))
    assert not is_smith_form(IntMatrix.of([[1, 1], [0, 2]]))
    assert is_smith_form(IntMatrix.diagonal([1, 2, 0], rows=3, cols=4))


def test_group_names_and_printing():
    assert str(cyclic(0)) == "Z"
    assert str(abelian_group(2, [4, 2])) == "Z^2 ⊕ Z/2 ⊕ Z/4"
    assert str(abelian_group(0, [1])) == "0"
    assert parse_group_name("Z4").canonical == (0, (4,))
    assert parse_group_name("Z/6 + Z").canonical == (1, (6,))
    assert parse_group_name("Z^2 ⊕ Z2").canonical == (2, (2,))
    assert parse_group_name("Q") is None


def test_group_orders():
    assert abelian_group(0, [2, 3]).order == 6
    assert cyclic(0).order is None
    assert abelian_group(0, [2, 3]).isomorphic(cyclic(6))


def test_tensor_examples():
    assert str(tensor_product(cyclic(4), cyclic(6))) == "Z/2"
    assert str(tensor_product(cyclic(0), cyclic(5))) == "Z/5"
    assert str(tensor_product(cyclic(2), cyclic(3))) == "0"
    assert str(tensor_product(free_abelian(2), free_abelian(3))) == "Z^6"
    t = tensor_product(abelian_group(1, [2]), abelian_group(0, [4, 6]))
    # (Z ⊕ Z/2) ⊗ (Z/4 ⊕ Z/6) = Z/4 ⊕ Z/6 ⊕ Z/2 ⊕ Z/2
    assert t.canonical == (0, (2, 2, 2, 12))


def test_pushout_of_doubling_and_tripling_is_z():
    g = pushout_ab(IntMatrix.of([[2]]), IntMatrix.of([[3]]))
    assert g.canonical == (1, ())


def test_pushout_over_torsion_groups():
    # Z/4 <- Z/2 -> Z/6 with 1 -> 2 and 1 -> 3
    g = pushout_ab(IntMatrix.of([[2]]), IntMatrix.of([[3]]), cyclic(2), cyclic(4), cyclic(6))
    assert g.order == 12


def test_coequalizer_examples():
    two = IntMatrix.of([[2]])
    zero = IntMatrix.of([[0]])
    assert coequalizer_ab(two, zero).canonical == (0, (2,))
    assert coequalizer_ab(IntMatrix.identity(2), IntMatrix.identity(2)).canonical == (2, ())


def test_homomorphism_check():
    with pytest.raises(NotAHomomorphism):
        check_homomorphism(IntMatrix.of([[1]]), cyclic(2), cyclic(3))
    check_homomorphism(IntMatrix.of([[3]]), cyclic(2), cyclic(6))
    with pytest.raises(ShapeMismatch):
        check_homomorphism(IntMatrix.of([[1, 0]]), cyclic(2), cyclic(6))


def test_direct_sum_and_cokernel():
    g = direct_sum(cyclic(2), cyclic(3), cyclic(0))
    assert g.canonical == (1, (6,))
    assert cokernel(IntMatrix.of([[2, 4], [0, 6]])).canonical == (0, (2, 6))


@pytest.mark.parametrize("m", range(1, 13))
def test_tensor_of_cyclics_matches_bilinear_oracle(m):
    for n in range(1, 13):
        t = tensor_product(cyclic(m), cyclic(n))
        for k in range(1, 13):
            assert hom_count_to_cyclic(t, k) == bilinear_count(m, n, k), (m, n, k)
        assert t.order == math.gcd(m, n)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_postconditions_hypothesis(rows):
    snf_postconditions(IntMatrix.of(rows))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_agrees_with_sympy(rows):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import invariant_factors

    ours = [abs(d) for d in smith_normal_form(IntMatrix.of(rows))[0].diagonal_entries() if d]
    theirs = [abs(int(d)) for d in invariant_factors(sympy.Matrix(rows), domain=sympy.ZZ) if d]
    assert ours == theirs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.lists(st.integers(1, 12), max_size=2), st.lists(st.integers(1, 12), max_size=2))
def test_tensor_is_symmetric_and_unital(r, ta, tb):
    a = abelian_group(r % 3, ta)
    b = abelian_group(0, tb)
    assert tensor_product(a, b).canonical == tensor_product(b, a).canonical
    assert tensor_product(cyclic(0), a).canonical == a.canonical
    assert tensor_product(abelian_group(0, [1]), a).canonical == (0, ())


def test_random_snf_batch():
    rng = random.Random(7)
    for _ in range(200):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        snf_postconditions(IntMatrix.of([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]))
