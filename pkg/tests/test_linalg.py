import random

from cogebra.fields import GF, RationalField, embed
from cogebra.linalg import Matrix, Subspace, kronecker, scalar_extend_matrix, scalar_extend_subspace
from cogebra import poly


def rand_matrix(F, rng, n, m):
    elems = list(F.elements())
    return Matrix(F, [[rng.choice(elems) for _ in range(m)] for _ in range(n)])


def test_rank_nullity_property():
    rng = random.Random(11)
    for F in [GF(2), GF(3), GF(2, 2)]:
        for _ in range(40):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            M = rand_matrix(F, rng, n, m)
            assert M.rank() + M.kernel().dim == M.ncols


def test_rref_idempotent():
    rng = random.Random(5)
    F = GF(3)
    for _ in range(30):
        M = rand_matrix(F, rng, rng.randint(1, 4), rng.randint(1, 4))
        r1, _ = M.rref()
        r2, _ = r1.rref()
        assert r1.rows == r2.rows


def test_subspace_ops():
    F = GF(5)
    e1 = (1, 0, 0)
    e2 = (0, 1, 0)
    e3 = (0, 0, 1)
    A = Subspace.from_vectors(F, 3, [e1, e2])
    B = Subspace.from_vectors(F, 3, [e2, e3])
    assert A.intersect(B) == Subspace.from_vectors(F, 3, [e2])
    assert A.sum(B) == Subspace.full(F, 3)
    assert A.contains((2, 3, 0)) and not A.contains((0, 0, 1))


def test_kernel_of_zero_matrix():
    F = GF(2)
    M = Matrix.zero(F, 2, 2)
    assert M.kernel() == Subspace.full(F, 2)


def test_char_poly_2x2():
    Q = RationalField()
    M = Matrix.from_ints(Q, [[1, 2], [3, 4]])
    # x^2 - 5x - 2
    assert M.char_poly() == (Q.from_int(-2), Q.from_int(-5), Q.one())
    assert M.det() == Q.from_int(-2)


def test_kronecker_companion_fibonacci():
    Q = RationalField()
    p = poly.parse_poly(Q, "x^2-x-1")
    C = Matrix.companion(Q, p)
    K = kronecker(C, C)
    cp = K.char_poly()
    # oracle: expand (x+1)^2 (x^2-3x+1) independently
    expected = poly.pmul(
        Q,
        poly.pmul(Q, poly.parse_poly(Q, "x+1"), poly.parse_poly(Q, "x+1")),
        poly.parse_poly(Q, "x^2-3x+1"),
    )
    assert cp == expected
    # x^3 - 2x^2 - 2x + 1 divides it exactly
    q, r = poly.pdivmod(Q, cp, poly.parse_poly(Q, "x^3-2x^2-2x+1"))
    assert r == ()


def test_companion_satisfies_polynomial():
    F = GF(3)
    p = (F.from_int(1), F.from_int(2), F.one())  # x^2 + 2x + 1... over GF(3)
    C = Matrix.companion(F, p)
    val = C.pow(2).add(C.scale(F.from_int(2))).add(Matrix.identity(F, 2))
    assert val.is_zero()


def test_inverse():
    rng = random.Random(3)
    F = GF(7)
    found = 0
    while found < 10:
        M = rand_matrix(F, rng, 3, 3)
        inv = M.inverse()
        if inv is None:
            continue
        found += 1
        assert M.mul(inv) == Matrix.identity(F, 3)


def test_scalar_extend_preserves_rank():
    Q = RationalField()
    from cogebra.fields import RationalFunctionField

    Qt = RationalFunctionField(Q)
    e = embed(Q, Qt)
    M = Matrix.from_ints(Q, [[1, 2], [2, 4]])
    assert M.rank() == 1
    assert scalar_extend_matrix(M, e).rank() == 1


def test_scalar_extend_identity_gf2_to_gf4():
    e = embed(GF(2), GF(2, 2))
    M = Matrix.identity(GF(2), 3)
    EM = scalar_extend_matrix(M, e)
    assert EM == Matrix.identity(GF(2, 2), 3)


def test_scalar_extend_commutes_with_kernel():
    # kernel(M extended) == kernel(M) extended, random 3x3 over GF(3) -> GF(9)
    rng = random.Random(17)
    gf3, gf9 = GF(3), GF(3, 2)
    e = embed(gf3, gf9)
    for _ in range(20):
        M = rand_matrix(gf3, rng, 3, 3)
        lhs = scalar_extend_matrix(M, e).kernel()
        rhs = scalar_extend_subspace(M.kernel(), e)
        assert lhs == rhs


def test_scalar_extend_commutes_with_ops():
    rng = random.Random(23)
    gf2, gf4 = GF(2), GF(2, 2)
    e = embed(gf2, gf4)
    for _ in range(20):
        A = rand_matrix(gf2, rng, 2, 4).row_space()
        B = rand_matrix(gf2, rng, 2, 4).row_space()
        assert scalar_extend_subspace(A.sum(B), e) == scalar_extend_subspace(A, e).sum(
            scalar_extend_subspace(B, e)
        )
        assert scalar_extend_subspace(A.intersect(B), e) == scalar_extend_subspace(A, e).intersect(
            scalar_extend_subspace(B, e)
        )
        M = rand_matrix(gf2, rng, 3, 3)
        assert scalar_extend_subspace(M.image(), e) == scalar_extend_matrix(M, e).image()


def test_intersect_dimension_formula():
    rng = random.Random(31)
    F = GF(2)
    for _ in range(40):
        A = rand_matrix(F, rng, 2, 4).row_space()
        B = rand_matrix(F, rng, 2, 4).row_space()
        assert A.sum(B).dim + A.intersect(B).dim == A.dim + B.dim
