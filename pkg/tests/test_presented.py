import random

import pytest

from cogebra.budget import BudgetExceeded
from cogebra.fields import GF, FieldError
from cogebra.linalg import Matrix, Subspace
from cogebra.coalgebra import dual_algebra, grouplike_coalgebra, matrix_coalgebra, relative_field_algebra
from cogebra.fields import embed
from cogebra.presented import (
    Generator,
    PresentedAlgebra,
    Representation,
    are_isomorphic,
    coefficient_span,
    enumerate_representations,
    free_algebra,
    free_product,
    intertwiner_space,
    is_simple,
    partition_representations,
    presentation_of,
    spin,
)


def kxk(field):
    return dual_algebra(grouplike_coalgebra(field, ["a", "b"]))


def dihedral_presentation(field):
    return free_product([kxk(field), kxk(field)])


def test_free_product_single_factor_idempotent_relation():
    P = presentation_of(kxk(GF(2)))
    assert P.n_generators == 1
    reps = enumerate_representations(P, 1)
    # one idempotent generator: scalars 0 and 1
    assert len(reps) == 2


def test_free_product_dihedral_relations():
    P = dihedral_presentation(GF(2))
    assert P.n_generators == 2
    reps = enumerate_representations(P, 1)
    assert len(reps) == 4  # pairs of idempotent scalars


def test_free_product_field_factors():
    gf4 = relative_field_algebra(embed(GF(2), GF(2, 2)))
    gf8 = relative_field_algebra(embed(GF(2), GF(2, 3)))
    P = free_product([gf4, gf8])
    assert P.n_generators == 3  # 1 from GF(4), 2 from GF(8)


def test_free_algebra_counts():
    P0 = free_algebra(GF(2), 0)
    assert len(enumerate_representations(P0, 1)) == 1
    P2 = free_algebra(GF(2), 2)
    assert len(enumerate_representations(P2, 2)) == 2 ** 8


def test_enumerate_gf4_presentation():
    gf4 = relative_field_algebra(embed(GF(2), GF(2, 2)))
    P = presentation_of(gf4)
    assert enumerate_representations(P, 1) == []  # no root of y^2+y+1 in GF(2)
    reps = enumerate_representations(P, 2)
    assert len(reps) == 2
    # companion matrix of y^2+y+1 is among them
    comp = Matrix.from_ints(GF(2), [[0, 1], [1, 1]])
    assert any(r.mats[0] == comp for r in reps)
    for r in reps:
        assert r.satisfies_relations()


def test_enumerate_deterministic_order():
    P = dihedral_presentation(GF(2))
    a = [r.sort_key() for r in enumerate_representations(P, 1)]
    b = [r.sort_key() for r in enumerate_representations(P, 1)]
    assert a == b == sorted(a)


def test_every_enumerated_rep_revalidates():
    P = dihedral_presentation(GF(3))
    for r in enumerate_representations(P, 2):
        assert r.satisfies_relations()


def test_budget_exceeded():
    P = free_algebra(GF(3), 2)
    with pytest.raises(BudgetExceeded):
        enumerate_representations(P, 4, budget=1000)


def test_partition_union_equals_full():
    P = dihedral_presentation(GF(2))
    full = enumerate_representations(P, 2)
    parts = partition_representations(P, 2, 3)
    merged = sorted((r for part in parts for r in part), key=Representation.sort_key)
    assert merged == full


def test_is_simple_dim1():
    P = dihedral_presentation(GF(2))
    for r in enumerate_representations(P, 1):
        assert is_simple(r)


def test_is_simple_gf3_example():
    # p = diag(1,0), q = (1/2) * all-ones = 2 * all-ones over GF(3): simple
    F = GF(3)
    P = dihedral_presentation(F)
    p = Matrix.from_ints(F, [[1, 0], [0, 0]])
    q = Matrix.from_ints(F, [[2, 2], [2, 2]])
    r = Representation(P, 2, [p, q])
    assert is_simple(r)
    # p = q = diag(1,0): e1 spans an invariant line
    s = Representation(P, 2, [p, p])
    assert not is_simple(s)


def test_spin_full_space():
    F = GF(3)
    P = dihedral_presentation(F)
    p = Matrix.from_ints(F, [[1, 0], [0, 0]])
    q = Matrix.from_ints(F, [[2, 2], [2, 2]])
    r = Representation(P, 2, [p, q])
    assert spin(r, (1, 0)).dim == 2


def _all_proper_subspaces(F, d):
    # every echelon-form basis of every dimension 1..d-1
    from itertools import combinations, product as iproduct

    elems = list(F.elements())
    out = []
    for r in range(1, d):
        for pivots in combinations(range(d), r):
            free_cols = [j for j in range(d) if j not in pivots and j > pivots[0]]
            slots = [
                (i, j)
                for i in range(r)
                for j in range(d)
                if j not in pivots and j > pivots[i]
            ]
            for vals in iproduct(elems, repeat=len(slots)):
                rows = []
                for i in range(r):
                    row = [F.zero()] * d
                    row[pivots[i]] = F.one()
                    rows.append(row)
                for (i, j), v in zip(slots, vals):
                    rows[i][j] = v
                out.append(Subspace(F, d, rows))
    return out


def test_is_simple_agrees_with_exhaustive_search():
    rng = random.Random(13)
    for F in [GF(2), GF(3)]:
        P = dihedral_presentation(F)
        reps = enumerate_representations(P, 2)
        sample = reps if len(reps) <= 80 else rng.sample(reps, 80)
        subspaces = _all_proper_subspaces(F, 2)
        for r in sample:
            has_invariant = False
            for W in subspaces:
                stable = all(
                    W.contains(M.apply_vec(v)) for v in W.basis for M in r.mats
                )
                if stable:
                    has_invariant = True
                    break
            assert is_simple(r) == (not has_invariant)


def test_are_isomorphic_reflexive_and_conjugation():
    F = GF(3)
    P = dihedral_presentation(F)
    p = Matrix.from_ints(F, [[1, 0], [0, 0]])
    q = Matrix.from_ints(F, [[2, 2], [2, 2]])
    r = Representation(P, 2, [p, q])
    assert are_isomorphic(r, r)
    T = Matrix.from_ints(F, [[1, 1], [0, 1]])
    assert are_isomorphic(r, r.conjugate(T))


def test_are_isomorphic_distinct_characters():
    F = GF(2)
    P = presentation_of(kxk(F))
    r0, r1 = enumerate_representations(P, 1)
    assert not are_isomorphic(r0, r1)


def test_are_isomorphic_equivalence_relation():
    rng = random.Random(3)
    F = GF(2)
    P = dihedral_presentation(F)
    reps = enumerate_representations(P, 2)
    sample = rng.sample(reps, 12)
    for a in sample:
        assert are_isomorphic(a, a)
    for a in sample:
        for b in sample:
            assert are_isomorphic(a, b) == are_isomorphic(b, a)
    for a in sample:
        for b in sample:
            for c in sample:
                if are_isomorphic(a, b) and are_isomorphic(b, c):
                    assert are_isomorphic(a, c)


def test_intertwiner_space_of_identity():
    F = GF(2)
    P = presentation_of(kxk(F))
    r = enumerate_representations(P, 2)[0]
    H = intertwiner_space(r, r)
    assert len(H) >= 1


def test_coefficient_span_single_character():
    F = GF(3)
    P = free_algebra(F, 1)
    r = Representation(P, 1, [Matrix.from_ints(F, [[2]])])
    cb = coefficient_span(P, [r])
    assert cb.dim == 1


def test_coefficient_span_regular_rep_of_kxk():
    F = GF(2)
    A = kxk(F)
    P = presentation_of(A)
    # regular representation: p acts on basis (1, p) by left multiplication
    gen_idx = P.factor_gens[0][0][1]
    Mp = A.left_mult_matrix(A.basis_vec(gen_idx))
    r = Representation(P, 2, [Mp])
    cb = coefficient_span(P, [r])
    assert cb.dim == 2


def test_coefficient_span_orthogonality_of_distinct_simples():
    F = GF(2)
    P = presentation_of(kxk(F))
    r0, r1 = enumerate_representations(P, 1)
    d0 = coefficient_span(P, [r0]).dim
    d1 = coefficient_span(P, [r1]).dim
    dboth = coefficient_span(P, [r0, r1]).dim
    assert dboth == d0 + d1  # spans intersect trivially


def test_coefficient_span_monotone_in_dimension():
    F = GF(2)
    P = dihedral_presentation(F)
    reps1 = enumerate_representations(P, 1)
    reps2 = reps1 + enumerate_representations(P, 2)
    assert coefficient_span(P, [*reps1]).dim <= coefficient_span(P, [*reps2]).dim


def test_coefficient_span_conjugation_invariant():
    rng = random.Random(8)
    F = GF(3)
    P = dihedral_presentation(F)
    p = Matrix.from_ints(F, [[1, 0], [0, 0]])
    q = Matrix.from_ints(F, [[2, 2], [2, 2]])
    r = Representation(P, 2, [p, q])
    base = coefficient_span(P, [r]).dim
    elems = list(F.elements())
    for _ in range(5):
        while True:
            T = Matrix(F, [[rng.choice(elems) for _ in range(2)] for _ in range(2)])
            if T.inverse() is not None:
                break
        assert coefficient_span(P, [r.conjugate(T)]).dim == base


def test_coefficient_basis_coalgebra_is_valid():
    from cogebra.coalgebra import validate_coalgebra

    F = GF(2)
    P = dihedral_presentation(F)
    reps = enumerate_representations(P, 1)
    cb = coefficient_span(P, reps)
    C = cb.coalgebra()
    assert C.dim == cb.dim
    assert validate_coalgebra(C)


def test_presented_json_roundtrip():
    P = dihedral_presentation(GF(3))
    Q = PresentedAlgebra.from_json(P.to_json())
    assert Q.to_json() == P.to_json()
    r = enumerate_representations(P, 1)[3]
    r2 = Representation.from_json(r.to_json(), P)
    assert r2.mats == r.mats


def test_invertible_generator_enumeration():
    # Laurent generator: invertible, no other relations
    P = PresentedAlgebra(GF(3), [Generator("s", invertible=True)])
    reps = enumerate_representations(P, 1)
    assert len(reps) == 2  # units of GF(3)
    reps2 = enumerate_representations(P, 2)
    assert len(reps2) == 48  # |GL_2(F_3)|


def test_relation_with_undeclared_symbol_rejected():
    with pytest.raises(FieldError):
        PresentedAlgebra(GF(2), [Generator("x")], [((1, (2,)),)])
