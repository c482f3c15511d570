import random

import pytest

from cogebra.fields import GF, FieldError, RationalField, embed
from cogebra.linalg import Subspace
from cogebra.coalgebra import (
    Coalgebra,
    FinAlgebra,
    direct_sum,
    dual_algebra,
    dual_coalgebra,
    dual_field_coalgebra,
    grouplike_coalgebra,
    grouplike_elements,
    is_geometrically_pointed,
    largest_subcoalgebra,
    matrix_coalgebra,
    quotient_algebra,
    radical,
    relative_field_algebra,
    scalar_extend_coalgebra,
    subcoalgebra_check,
    trivial_coalgebra,
    validate_coalgebra,
)


def dual_numbers_dual(field):
    """Dual coalgebra of k[u]/u^2: one grouplike e0 and e1 primitive over it."""
    one = field.one()
    delta = {(0, 0, 0): one, (1, 0, 1): one, (1, 1, 0): one}
    return Coalgebra(field, 2, delta, (one, field.zero()), ["e0", "e1"])


def test_matrix_coalgebra_structure():
    C = matrix_coalgebra(GF(2), 2)
    assert C.dim == 4
    assert validate_coalgebra(C)
    # Delta(e12) = e11 (x) e12 + e12 (x) e22 ; flat indices: e11=0,e12=1,e21=2,e22=3
    assert C.delta_of(1) == {(0, 1): 1, (1, 3): 1}


def test_matrix_coalgebra_trivial_case():
    C = matrix_coalgebra(GF(3), 1)
    assert C.dim == 1 and validate_coalgebra(C)
    assert grouplike_elements(C) == [(1,)]


def test_grouplike_coalgebra():
    C = grouplike_coalgebra(GF(2), ["a", "b"])
    assert validate_coalgebra(C)
    with pytest.raises(FieldError):
        grouplike_coalgebra(GF(2), [])


def test_counit_violation_reported_at_index_0():
    F = GF(2)
    delta = {(0, 0, 0): 1, (1, 1, 1): 1}
    C = Coalgebra(F, 2, delta, (0, 0))
    rep = validate_coalgebra(C)
    assert not rep.ok and rep.kind == "counit" and rep.location == (0,)


def test_random_dense_constants_usually_invalid():
    rng = random.Random(42)
    F = GF(2)
    bad = 0
    for _ in range(50):
        delta = {
            (k, i, j): rng.randint(0, 1) for k in range(2) for i in range(2) for j in range(2)
        }
        counit = (rng.randint(0, 1), rng.randint(0, 1))
        if not validate_coalgebra(Coalgebra(F, 2, delta, counit)).ok:
            bad += 1
    assert bad >= 45


def test_dual_algebra_matrix_units():
    # e_ij* . e_kl* = delta_jk e_il*
    C = matrix_coalgebra(GF(3), 2)
    A = dual_algebra(C)
    n = 2

    def flat(i, j):
        return i * n + j

    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    prod = A.product_vec(A.basis_vec(flat(i, j)), A.basis_vec(flat(k, l)))
                    expect = [0] * 4
                    if j == k:
                        expect[flat(i, l)] = 1
                    assert list(prod) == expect


def test_dual_algebra_grouplike_orthogonal_idempotents():
    C = grouplike_coalgebra(GF(2), ["a", "b"])
    A = dual_algebra(C)
    pa, pb = A.basis_vec(0), A.basis_vec(1)
    assert A.product_vec(pa, pa) == pa
    assert A.product_vec(pb, pb) == pb
    assert A.product_vec(pa, pb) == (0, 0)
    assert A.unit == (1, 1)


def test_dual_algebra_trivial_is_ground_field():
    A = dual_algebra(trivial_coalgebra(GF(5)))
    assert A.dim == 1 and A.unit == (1,)


def test_dual_field_coalgebra_identity_trivial():
    e = embed(GF(3), GF(3))
    C = dual_field_coalgebra(e)
    assert C.dim == 1 and validate_coalgebra(C)


def test_dual_field_coalgebra_gf4():
    e = embed(GF(2), GF(2, 2))
    C = dual_field_coalgebra(e)
    assert C.dim == 2 and validate_coalgebra(C)
    # round trip: dual algebra multiplication table is GF(4) over GF(2)
    A = dual_algebra(C)
    R = relative_field_algebra(e)
    assert A.mult == R.mult and A.unit == R.unit


def test_dual_field_coalgebra_gf8():
    e = embed(GF(2), GF(2, 3))
    C = dual_field_coalgebra(e)
    assert C.dim == 3 and validate_coalgebra(C)


def test_relative_structure_gf4_over_gf2():
    R = relative_field_algebra(embed(GF(2), GF(2, 2)))
    # basis 1, g with g^2 = g + 1
    assert R.product_vec(R.basis_vec(1), R.basis_vec(1)) == (1, 1)


def test_double_dual_round_trip_exact():
    fixtures = []
    for F in [GF(2), GF(3), RationalField()]:
        fixtures += [
            trivial_coalgebra(F),
            grouplike_coalgebra(F, ["a", "b"]),
            matrix_coalgebra(F, 2),
            dual_numbers_dual(F),
        ]
    fixtures.append(dual_field_coalgebra(embed(GF(2), GF(2, 2))))
    for C in fixtures:
        D = dual_coalgebra(dual_algebra(C))
        assert D.delta == C.delta and D.counit == C.counit


def test_direct_sum():
    F = GF(2)
    C = direct_sum(matrix_coalgebra(F, 1), matrix_coalgebra(F, 2))
    assert C.dim == 5 and validate_coalgebra(C)
    # two grouplike summands glue to the two-grouplike coalgebra
    G = direct_sum(grouplike_coalgebra(F, ["a"]), grouplike_coalgebra(F, ["b"]))
    assert G.delta == grouplike_coalgebra(F, ["a", "b"]).delta


def test_largest_subcoalgebra_full_space():
    C = matrix_coalgebra(GF(3), 2)
    W = Subspace.full(GF(3), 4)
    assert largest_subcoalgebra(C, W) == W


def test_largest_subcoalgebra_matrix_proper_subspace_is_zero():
    F = GF(2)
    C = matrix_coalgebra(F, 2)
    # W = span(e11, e22, e12)
    W = Subspace.from_vectors(F, 4, [(1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0)])
    assert largest_subcoalgebra(C, W).dim == 0


def test_largest_subcoalgebra_all_coordinate_subspaces_of_matrix():
    from itertools import combinations

    F = GF(3)
    C = matrix_coalgebra(F, 2)
    for r in range(1, 4):
        for idxs in combinations(range(4), r):
            W = Subspace.from_vectors(
                F, 4, [tuple(F.one() if t == i else F.zero() for t in range(4)) for i in idxs]
            )
            assert largest_subcoalgebra(C, W).dim == 0


def test_largest_subcoalgebra_grouplike_spans():
    F = GF(2)
    C = grouplike_coalgebra(F, ["a", "b", "c"])
    W = Subspace.from_vectors(F, 3, [(1, 0, 0), (0, 1, 0)])
    assert largest_subcoalgebra(C, W) == W


def test_largest_subcoalgebra_properties_random():
    rng = random.Random(9)
    F = GF(2)
    C = direct_sum(grouplike_coalgebra(F, ["a", "b"]), matrix_coalgebra(F, 2))
    n = C.dim
    for _ in range(25):
        vecs = [[rng.randint(0, 1) for _ in range(n)] for _ in range(rng.randint(1, n))]
        W = Subspace.from_vectors(F, n, vecs)
        D = largest_subcoalgebra(C, W)
        assert D.is_subspace_of(W)
        assert largest_subcoalgebra(C, D) == D  # idempotent
        assert subcoalgebra_check(C, D)  # direct membership check
        # monotone: shrink W and compare
        if W.dim > 1:
            W2 = Subspace.from_vectors(F, n, list(W.basis)[:-1])
            D2 = largest_subcoalgebra(C, W2)
            assert D2.is_subspace_of(D)


def test_largest_subcoalgebra_commutes_with_extension():
    rng = random.Random(21)
    gf2, gf4 = GF(2), GF(2, 2)
    e = embed(gf2, gf4)
    C = direct_sum(grouplike_coalgebra(gf2, ["a", "b"]), matrix_coalgebra(gf2, 2))
    CE = scalar_extend_coalgebra(C, e)
    from cogebra.linalg import scalar_extend_subspace

    for _ in range(15):
        vecs = [[rng.randint(0, 1) for _ in range(C.dim)] for _ in range(rng.randint(1, C.dim))]
        W = Subspace.from_vectors(gf2, C.dim, vecs)
        lhs = scalar_extend_subspace(largest_subcoalgebra(C, W), e)
        rhs = largest_subcoalgebra(CE, scalar_extend_subspace(W, e))
        assert lhs == rhs


def test_scalar_extend_identity():
    C = matrix_coalgebra(GF(2), 2)
    assert scalar_extend_coalgebra(C, embed(GF(2), GF(2))) == C


def test_scalar_extend_dual_field_splits():
    # GF(4)* over GF(2) has no grouplikes; over GF(4) it splits into two
    e = embed(GF(2), GF(2, 2))
    C = dual_field_coalgebra(e)
    assert grouplike_elements(C) == []
    CE = scalar_extend_coalgebra(C, e)
    assert validate_coalgebra(CE)
    assert len(grouplike_elements(CE)) == 2


def test_scalar_extend_matrix_still_no_grouplike():
    e = embed(GF(2), GF(2, 2))
    CE = scalar_extend_coalgebra(matrix_coalgebra(GF(2), 2), e)
    assert grouplike_elements(CE) == []


def test_field_mismatch_errors():
    with pytest.raises(FieldError):
        direct_sum(matrix_coalgebra(GF(2), 1), matrix_coalgebra(GF(3), 1))
    with pytest.raises(FieldError):
        scalar_extend_coalgebra(matrix_coalgebra(GF(3), 2), embed(GF(2), GF(2, 2)))


def test_radical_zero_for_semisimple():
    for F in [GF(2), GF(3), RationalField()]:
        A = dual_algebra(matrix_coalgebra(F, 2))
        assert radical(A).dim == 0
        B = dual_algebra(grouplike_coalgebra(F, ["a", "b"]))
        assert radical(B).dim == 0


def test_radical_dual_numbers():
    for F in [GF(2), GF(3), RationalField()]:
        A = dual_algebra(dual_numbers_dual(F))
        J = radical(A)
        assert J.dim == 1
        Q, _, _ = quotient_algebra(A, J)
        assert Q.dim == 1


def test_radical_over_gf4():
    F = GF(2, 2)
    e = embed(GF(2), F)
    C = scalar_extend_coalgebra(dual_numbers_dual(GF(2)), e)
    assert radical(dual_algebra(C)).dim == 1
    assert radical(dual_algebra(matrix_coalgebra(F, 2))).dim == 0


def test_geometric_pointedness():
    for F in [GF(2), GF(3)]:
        assert is_geometrically_pointed(grouplike_coalgebra(F, ["a", "b"]))
        assert not is_geometrically_pointed(matrix_coalgebra(F, 2))
    assert is_geometrically_pointed(dual_field_coalgebra(embed(GF(2), GF(2, 2))))
    assert is_geometrically_pointed(dual_field_coalgebra(embed(GF(3), GF(3, 2))))
    assert is_geometrically_pointed(grouplike_coalgebra(RationalField(), ["a"]))
    assert not is_geometrically_pointed(matrix_coalgebra(RationalField(), 2))


def test_pointedness_rejects_rational_functions():
    from cogebra.fields import RationalFunctionField

    K = RationalFunctionField(GF(2))
    with pytest.raises(FieldError):
        is_geometrically_pointed(grouplike_coalgebra(K, ["a"]))


def test_coalgebra_json_roundtrip():
    for C in [
        matrix_coalgebra(GF(2), 2),
        grouplike_coalgebra(GF(3), ["a", "b"]),
        dual_field_coalgebra(embed(GF(2), GF(2, 3))),
        matrix_coalgebra(RationalField(), 2),
    ]:
        assert Coalgebra.from_json(C.to_json()) == C


def test_validator_constructor_outputs():
    gens = [
        matrix_coalgebra(GF(2), 2),
        matrix_coalgebra(GF(3), 2),
        grouplike_coalgebra(GF(2), list("abc")),
        dual_field_coalgebra(embed(GF(2), GF(2, 2))),
        direct_sum(matrix_coalgebra(GF(2), 2), grouplike_coalgebra(GF(2), ["x"])),
        scalar_extend_coalgebra(matrix_coalgebra(GF(2), 2), embed(GF(2), GF(2, 2))),
    ]
    for C in gens:
        assert validate_coalgebra(C)
