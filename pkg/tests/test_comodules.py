import pytest

from cogebra.budget import BudgetExceeded
from cogebra.fields import GF, FieldError, embed
from cogebra.linalg import Matrix
from cogebra.coalgebra import (
    dual_field_coalgebra,
    grouplike_coalgebra,
    is_coalgebra_morphism,
    matrix_coalgebra,
    scalar_extend_coalgebra,
    trivial_coalgebra,
    validate_coalgebra,
)
from cogebra.comodules import (
    Comodule,
    JointComodule,
    comodule_to_rep,
    dimension_profile,
    enumerate_simple_joint,
    extension_commutation_report,
    family_presentation,
    joint_witness,
    rep_to_comodule,
    truncated_product,
    vanishing_check,
)
from cogebra.presented import enumerate_representations


def dihedral_family(F):
    return (grouplike_coalgebra(F, ["a", "b"]), grouplike_coalgebra(F, ["a", "b"]))


def dualfields_family(F2=None):
    F2 = F2 or GF(2)
    return (
        dual_field_coalgebra(embed(F2, GF(2, 2))),
        dual_field_coalgebra(embed(F2, GF(2, 3))),
    )


# --- translation -----------------------------------------------------------


def test_comodule_roundtrip_trivial():
    C = trivial_coalgebra(GF(3))
    # unique structure on a 2-dim space: rho(x) = x (x) g
    F = GF(3)
    rho = Matrix.from_ints(F, [[1, 0], [0, 1]])
    V = Comodule(C, 2, rho)
    assert V.validate()
    r = comodule_to_rep(V)
    V2 = rep_to_comodule(r)
    assert V2.rho == V.rho


def test_comodule_grouplike_character():
    # C = grouplike({a,b}), v=1, rho(x) = x (x) g_a -> the idempotent p maps to 1
    F = GF(2)
    C = grouplike_coalgebra(F, ["a", "b"])
    rho = Matrix.from_ints(F, [[1], [0]])
    V = Comodule(C, 1, rho)
    assert V.validate()
    r = comodule_to_rep(V)
    # generator p is the dual of g_a (unit completion drops g_b*)
    assert r.mats[0] == Matrix.from_ints(F, [[1]])
    assert rep_to_comodule(r).rho == rho


def test_comodule_matrix_regular():
    # regular comodule of the matrix coalgebra is the regular representation
    F = GF(3)
    C = matrix_coalgebra(F, 2)
    n = C.dim
    rows = []
    for a in range(n):
        col = [[F.zero()] * n for _ in range(n * n)]
    # rho(e_a) = sum_{(i,j) in Delta(a)} e_i (x) e_j
    rows = [[F.zero()] * n for _ in range(n * n)]
    for (k, i, j), c in C.delta.items():
        rows[i * n + j][k] = c
    V = Comodule(C, n, Matrix(F, rows))
    assert V.validate()
    r = comodule_to_rep(V)
    assert r.satisfies_relations()
    assert rep_to_comodule(r).rho == V.rho


def test_roundtrip_exhaustive_small():
    # coaction validity <=> translated representation satisfies all relations
    for F in [GF(2), GF(3)]:
        C = grouplike_coalgebra(F, ["a", "b"])
        P = family_presentation([C])
        for v in (1, 2):
            for r in enumerate_representations(P, v):
                V = rep_to_comodule(r)
                assert V.validate()
                back = comodule_to_rep(V, P)
                assert back.mats == r.mats


def test_invalid_coaction_rejected():
    F = GF(2)
    C = grouplike_coalgebra(F, ["a", "b"])
    rho = Matrix.from_ints(F, [[1], [1]])  # x (x) (g_a + g_b): counit law fails
    V = Comodule(C, 1, rho)
    assert not V.validate()
    with pytest.raises(FieldError):
        comodule_to_rep(V)


# --- census ----------------------------------------------------------------


def test_census_trivial_family():
    census = enumerate_simple_joint([trivial_coalgebra(GF(2))], 2)
    assert census.counts() == {1: 1, 2: 0}


def test_census_dihedral_dim1():
    for F in [GF(2), GF(3)]:
        census = enumerate_simple_joint(dihedral_family(F), 1)
        assert census.counts()[1] == 4
        for w in census.witnesses(1):
            assert w.validate()


def test_census_witnesses_are_simple_joint_structures():
    census = enumerate_simple_joint(dihedral_family(GF(3)), 2)
    for e, reps in census.classes.items():
        for r in reps:
            assert r.dim == e and r.satisfies_relations()


# --- vanishing -------------------------------------------------------------


def test_vanishing_trivial_factor_family():
    fam = (trivial_coalgebra(GF(2)), dual_field_coalgebra(embed(GF(2), GF(2, 2))))
    assert not vanishing_check(fam, 2)  # the GF(4) factor allows dim 2, trivial allows all
    assert vanishing_check(fam, 1)


def test_vanishing_dualfields():
    fam = dualfields_family()
    assert vanishing_check(fam, 5)
    assert not vanishing_check(fam, 6)
    w = joint_witness(fam, 6)
    assert w.dim == 6 and w.validate()


def test_vanishing_with_any_trivial_factor_false_at_1():
    fam = (trivial_coalgebra(GF(2)), trivial_coalgebra(GF(2)))
    assert not vanishing_check(fam, 1)


def test_monotone_vanishing_subfamilies():
    # restriction of a joint structure: vanishing of a subfamily forces
    # vanishing of the larger family
    C4 = dual_field_coalgebra(embed(GF(2), GF(2, 2)))
    C8 = dual_field_coalgebra(embed(GF(2), GF(2, 3)))
    for d in (1, 2, 3, 4, 5):
        for sub, full in [((C4,), (C4, C8)), ((C8,), (C4, C8))]:
            if vanishing_check(sub, d):
                assert vanishing_check(full, d)


def test_dualfields_extended_has_character():
    e = embed(GF(2), GF(2, 6))
    fam = tuple(scalar_extend_coalgebra(C, e) for C in dualfields_family())
    assert not vanishing_check(fam, 1)
    w = joint_witness(fam, 1)
    assert w.dim == 1 and w.validate()


# --- truncated products ----------------------------------------------------


def test_trivial_factor_absorption_matrix():
    F = GF(2)
    C = matrix_coalgebra(F, 2)
    fam = (C, trivial_coalgebra(F))
    T = truncated_product(fam, C.dim)
    assert T.carrier.dim == C.dim
    assert T.validate()
    # pi_C is a coalgebra isomorphism
    pi = T.projections[0]
    assert pi.rank() == C.dim
    assert is_coalgebra_morphism(T.carrier, C, pi)


def test_trivial_factor_absorption_grouplike_and_dualfield():
    F = GF(2)
    for C in [grouplike_coalgebra(F, ["a", "b"]), dual_field_coalgebra(embed(F, GF(2, 2)))]:
        fam = (C, trivial_coalgebra(F))
        T = truncated_product(fam, C.dim)
        assert T.carrier.dim == C.dim and T.validate()
        assert T.projections[0].rank() == C.dim


def test_truncated_product_dihedral_small():
    F = GF(2)
    fam = dihedral_family(F)
    T1 = truncated_product(fam, 1)
    assert T1.carrier.dim == 4
    assert T1.validate()
    T2 = truncated_product(fam, 2)
    assert T2.carrier.dim > 4
    assert T2.validate()


def test_truncated_product_matches_coefficient_span():
    # cross-validation: the image-algebra carrier dimension equals the
    # coefficient-span dimension over all enumerated representations
    from cogebra.presented import coefficient_span

    F = GF(2)
    fam = dihedral_family(F)
    P = family_presentation(fam)
    for d in (1, 2):
        reps = []
        for e in range(1, d + 1):
            reps.extend(enumerate_representations(P, e))
        cb = coefficient_span(P, reps)
        T = truncated_product(fam, d)
        assert T.carrier.dim == cb.dim


def test_truncated_product_dualfields_zero():
    T = truncated_product(dualfields_family(), 5)
    assert T.carrier.dim == 0


def test_zero_carrier_validates():
    T = truncated_product(dualfields_family(), 3)
    assert T.carrier.dim == 0
    assert T.validate()


def test_supplied_comodules_route():
    F = GF(2)
    fam = dihedral_family(F)
    P = family_presentation(fam)
    reps = enumerate_representations(P, 1)
    supplied = [JointComodule.from_rep(r) for r in reps]
    T = truncated_product(fam, 1, supplied=supplied)
    assert T.carrier.dim == 4
    assert "supplied" in T.notes or T.route == "supplied"
    assert T.validate()


def test_profile_trivial_family_constant():
    fam = (trivial_coalgebra(GF(2)), trivial_coalgebra(GF(2)))
    rep = dimension_profile(fam, 3)
    assert rep.dims == [1, 1, 1]
    assert rep.evidence == ""


def test_profile_matrix_with_trivial_stabilizes():
    fam = (matrix_coalgebra(GF(2), 2), trivial_coalgebra(GF(2)))
    rep = dimension_profile(fam, 3)
    assert rep.dims == [0, 4, 4]


def test_profile_dihedral_strictly_increasing_gf2():
    rep = dimension_profile(dihedral_family(GF(2)), 3)
    assert rep.dims[0] == 4
    assert rep.dims[0] < rep.dims[1] < rep.dims[2]
    assert "evidence" in rep.evidence


def test_profile_nondecreasing_under_extension():
    fam = dihedral_family(GF(2))
    e = embed(GF(2), GF(2, 2))
    ext = tuple(scalar_extend_coalgebra(C, e) for C in fam)
    src = dimension_profile(fam, 2).dims
    tgt = dimension_profile(ext, 2).dims
    assert all(a <= b for a, b in zip(src, tgt))


def test_extension_commutation_identity():
    F = GF(2)
    fam = dihedral_family(F)
    rep = extension_commutation_report(fam, embed(F, F), 1)
    assert rep.equal and rep.dim_source == rep.dim_extended


def test_extension_commutation_dihedral_d1():
    rep = extension_commutation_report(dihedral_family(GF(2)), embed(GF(2), GF(2, 2)), 1)
    assert rep.equal
    assert rep.comparison.rank() == rep.dim_source


def test_extension_commutation_dualfields():
    # source side vanishes at d=3; the extended family acquires a 3-dim
    # joint comodule (the GF(4) factor splits), so the dimensions differ
    rep = extension_commutation_report(dualfields_family(), embed(GF(2), GF(2, 2)), 3)
    assert rep.dim_source == 0
    assert rep.dim_extended == 3
    assert not rep.equal


def test_extension_commutation_rejects_transcendental():
    from cogebra.fields import RationalFunctionField

    fam = dihedral_family(GF(2))
    K = RationalFunctionField(GF(2))
    with pytest.raises(FieldError):
        e = embed(GF(2), K)
        extension_commutation_report(fam, e, 1)


def test_infinite_field_needs_supplied():
    from cogebra.fields import RationalField

    fam = (grouplike_coalgebra(RationalField(), ["a", "b"]),)
    with pytest.raises(FieldError):
        truncated_product(fam, 1)


def test_budget_guard():
    fam = dihedral_family(GF(3))
    with pytest.raises(BudgetExceeded):
        truncated_product(fam, 3, budget=100)
