"""Finite-dimensional coalgebras and algebras by structure constants.

A coalgebra stores sparse comultiplication constants mu[(k,i,j)] meaning
Delta(e_k) = sum mu_k^{ij} e_i (x) e_j, plus the counit vector.  The dual
algebra / dual coalgebra transposes pass between the two presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .fields import Embedding, ExtensionField, Field, FieldError, PrimeField, RationalField
from .linalg import Matrix, Subspace


@dataclass
class ValidationReport:
    ok: bool
    kind: str = ""
    location: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def _sparse_clean(F, items):
    return {k: v for k, v in items.items() if not F.is_zero(v)}


class Coalgebra:
    """Structure-constant coalgebra over an exact field."""

    def __init__(self, field: Field, dim: int, delta: dict, counit, labels=None):
        self.field = field
        self.dim = dim
        self.delta = _sparse_clean(field, dict(delta))
        self.counit = tuple(counit)
        if len(self.counit) != dim:
            raise FieldError("counit length != dim")
        for (k, i, j) in self.delta:
            if not (0 <= k < dim and 0 <= i < dim and 0 <= j < dim):
                raise FieldError(f"delta index out of range: {(k, i, j)}")
        self.labels = tuple(labels) if labels else None

    def delta_of(self, k: int) -> dict:
        """Sweedler terms of the k-th basis vector: {(i, j): coeff}."""
        return {(i, j): c for (kk, i, j), c in self.delta.items() if kk == k}

    def delta_vector(self, vec):
        """Delta applied to a coordinate vector, flattened to length dim^2."""
        F = self.field
        n = self.dim
        out = [F.zero()] * (n * n)
        for (k, i, j), c in self.delta.items():
            if not F.is_zero(vec[k]):
                out[i * n + j] = F.add(out[i * n + j], F.mul(vec[k], c))
        return tuple(out)

    def counit_of(self, vec):
        F = self.field
        acc = F.zero()
        for e, x in zip(self.counit, vec):
            acc = F.add(acc, F.mul(e, x))
        return acc

    def label(self, k):
        return self.labels[k] if self.labels else f"e{k}"

    def __eq__(self, other):
        return (
            isinstance(other, Coalgebra)
            and other.field == self.field
            and other.dim == self.dim
            and other.delta == self.delta
            and other.counit == self.counit
        )

    def __hash__(self):
        return hash((self.field, self.dim, tuple(sorted(self.delta.items())), self.counit))

    def __repr__(self):
        return f"Coalgebra(dim {self.dim} over {self.field!r})"

    def to_json(self):
        F = self.field
        triples = sorted((k, i, j) for (k, i, j) in self.delta)
        return {
            "field": F.desc.to_json(),
            "dim": self.dim,
            "delta": [[k, i, j, F.to_str(self.delta[(k, i, j)])] for (k, i, j) in triples],
            "counit": [F.to_str(c) for c in self.counit],
            "labels": list(self.labels) if self.labels else None,
        }

    @staticmethod
    def from_json(obj, field: Optional[Field] = None) -> "Coalgebra":
        from .fields import FieldDescriptor, make_field

        F = field if field is not None else make_field(FieldDescriptor.from_json(obj["field"]))
        delta = {(int(k), int(i), int(j)): F.from_str(c) for k, i, j, c in obj["delta"]}
        counit = tuple(F.from_str(c) for c in obj["counit"])
        return Coalgebra(F, int(obj["dim"]), delta, counit, obj.get("labels"))


class FinAlgebra:
    """Finite-dimensional unital algebra: e_i * e_j = sum_k c[(i,j,k)] e_k."""

    def __init__(self, field: Field, dim: int, mult: dict, unit, labels=None):
        self.field = field
        self.dim = dim
        self.mult = _sparse_clean(field, dict(mult))
        self.unit = tuple(unit)
        if len(self.unit) != dim:
            raise FieldError("unit length != dim")
        self.labels = tuple(labels) if labels else None

    def product_vec(self, u, v):
        F = self.field
        out = [F.zero()] * self.dim
        for (i, j, k), c in self.mult.items():
            a = F.mul(u[i], v[j])
            if not F.is_zero(a):
                out[k] = F.add(out[k], F.mul(a, c))
        return tuple(out)

    def left_mult_matrix(self, vec) -> Matrix:
        """Matrix of x -> vec * x in the structure basis."""
        F = self.field
        n = self.dim
        cols = []
        for j in range(n):
            basis_j = tuple(F.one() if t == j else F.zero() for t in range(n))
            cols.append(self.product_vec(vec, basis_j))
        return Matrix(F, zip(*cols))

    def right_mult_matrix(self, vec) -> Matrix:
        F = self.field
        n = self.dim
        cols = []
        for j in range(n):
            basis_j = tuple(F.one() if t == j else F.zero() for t in range(n))
            cols.append(self.product_vec(basis_j, vec))
        return Matrix(F, zip(*cols))

    def basis_vec(self, i):
        F = self.field
        return tuple(F.one() if t == i else F.zero() for t in range(self.dim))

    def validate(self) -> ValidationReport:
        F = self.field
        n = self.dim
        # associativity on basis triples
        for i in range(n):
            for j in range(n):
                ij = self.product_vec(self.basis_vec(i), self.basis_vec(j))
                for k in range(n):
                    jk = self.product_vec(self.basis_vec(j), self.basis_vec(k))
                    lhs = self.product_vec(ij, self.basis_vec(k))
                    rhs = self.product_vec(self.basis_vec(i), jk)
                    if lhs != rhs:
                        return ValidationReport(
                            False, "associativity", (i, j, k),
                            f"associativity fails at basis triple {(i, j, k)}",
                        )
        for i in range(n):
            b = self.basis_vec(i)
            if self.product_vec(self.unit, b) != b or self.product_vec(b, self.unit) != b:
                return ValidationReport(False, "unit", (i,), f"unit law fails at index {i}")
        return ValidationReport(True)

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                a, b = self.basis_vec(i), self.basis_vec(j)
                if self.product_vec(a, b) != self.product_vec(b, a):
                    return False
        return True

    def __repr__(self):
        return f"FinAlgebra(dim {self.dim} over {self.field!r})"


# ---------------------------------------------------------------------------
# validation


def validate_coalgebra(C: Coalgebra) -> ValidationReport:
    """Check coassociativity and both counit laws; total, never raises.

    The report names the first failing index tuple (k, a, b, j) for
    coassociativity or the basis index for a counit failure.
    """
    if C.field.is_finite and C.dim >= 12:
        return _validate_coded(C)
    return _validate_generic(C)


def _validate_generic(C: Coalgebra) -> ValidationReport:
    F = C.field
    n = C.dim
    per_k = [C.delta_of(k) for k in range(n)]
    # counit laws first: cheap and they pin most entries
    for k in range(n):
        for j in range(n):
            acc = F.zero()
            for (i, jj), c in per_k[k].items():
                if jj == j:
                    acc = F.add(acc, F.mul(C.counit[i], c))
            want = F.one() if k == j else F.zero()
            if not F.eq(acc, want):
                return ValidationReport(
                    False, "counit", (k,), f"counit violation at index {k}"
                )
        for i in range(n):
            acc = F.zero()
            for (ii, j), c in per_k[k].items():
                if ii == i:
                    acc = F.add(acc, F.mul(c, C.counit[j]))
            want = F.one() if k == i else F.zero()
            if not F.eq(acc, want):
                return ValidationReport(
                    False, "counit", (k,), f"counit violation at index {k}"
                )
    for k in range(n):
        lhs = {}
        rhs = {}
        for (m, j), c1 in per_k[k].items():
            for (a, b), c2 in per_k[m].items():
                key = (a, b, j)
                lhs[key] = F.add(lhs.get(key, F.zero()), F.mul(c1, c2))
        for (a, m), c1 in per_k[k].items():
            for (b, j), c2 in per_k[m].items():
                key = (a, b, j)
                rhs[key] = F.add(rhs.get(key, F.zero()), F.mul(c1, c2))
        for key in sorted(set(lhs) | set(rhs)):
            if not F.eq(lhs.get(key, F.zero()), rhs.get(key, F.zero())):
                a, b, j = key
                return ValidationReport(
                    False, "coassociativity", (k, a, b, j),
                    f"coassociativity violation at (k,a,b,j)={(k, a, b, j)}",
                )
    return ValidationReport(True)


def _validate_coded(C: Coalgebra) -> ValidationReport:
    import numpy as np

    from .coded import Coded

    cd = Coded(C.field)
    n, s, p = C.dim, cd.s, cd.p
    D = np.zeros((n, n, n, s), dtype=np.int64)
    for (k, i, j), c in C.delta.items():
        D[k, i, j] = cd.encode(c)
    eps = np.stack([cd.encode(c) for c in C.counit])
    M = cd.mul_tensor
    left = np.einsum("iu,kijv,uvw->kjw", eps, D, M) % p
    want = np.zeros((n, n, s), dtype=np.int64)
    for k in range(n):
        want[k, k] = cd.one
    if not np.array_equal(left, want):
        bad = int(np.nonzero(((left - want) % p).any(axis=(1, 2)))[0][0])
        return ValidationReport(False, "counit", (bad,), f"counit violation at index {bad}")
    right = np.einsum("kijv,ju,vuw->kiw", D, eps, M) % p
    if not np.array_equal(right, want):
        bad = int(np.nonzero(((right - want) % p).any(axis=(1, 2)))[0][0])
        return ValidationReport(False, "counit", (bad,), f"counit violation at index {bad}")
    lhs = np.einsum("kmju,mabv,uvw->kabjw", D, D, M) % p
    rhs = np.einsum("kamu,mbjv,uvw->kabjw", D, D, M) % p
    if not np.array_equal(lhs, rhs):
        diff = ((lhs - rhs) % p).any(axis=-1)
        k, a, b, j = (int(x[0]) for x in np.nonzero(diff))
        return ValidationReport(
            False, "coassociativity", (k, a, b, j),
            f"coassociativity violation at (k,a,b,j)={(k, a, b, j)}",
        )
    return ValidationReport(True)


# ---------------------------------------------------------------------------
# constructors


def matrix_coalgebra(field: Field, n: int) -> Coalgebra:
    """Dual of the n x n matrix algebra: Delta(e_ij) = sum_k e_ik (x) e_kj."""
    if n < 1:
        raise FieldError("matrix coalgebra needs n >= 1")
    one = field.one()
    dim = n * n

    def idx(i, j):
        return i * n + j

    delta = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                delta[(idx(i, j), idx(i, k), idx(k, j))] = one
    counit = tuple(one if i == j else field.zero() for i in range(n) for j in range(n))
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return Coalgebra(field, dim, delta, counit, labels)


def grouplike_coalgebra(field: Field, labels) -> Coalgebra:
    """Span of grouplikes: Delta(g) = g (x) g, counit 1."""
    labels = list(labels)
    if not labels:
        raise FieldError("grouplike coalgebra needs a nonempty label list")
    one = field.one()
    dim = len(labels)
    delta = {(k, k, k): one for k in range(dim)}
    counit = tuple(one for _ in range(dim))
    return Coalgebra(field, dim, delta, counit, labels)


def trivial_coalgebra(field: Field) -> Coalgebra:
    return grouplike_coalgebra(field, ["1"])


def relative_field_algebra(e: Embedding) -> FinAlgebra:
    """The target of a finite-field embedding as an algebra over the source.

    Basis is the power basis 1, g, ..., g^(m-1) of the flat generator g of
    the target; coefficients are solved through prime-field linear algebra.
    """
    k, K = e.source, e.target
    if k == K:
        one = k.one()
        return FinAlgebra(k, 1, {(0, 0, 0): one}, (one,), ["1"])
    if not (K.is_finite and k.is_finite):
        raise FieldError("relative structure needs finite fields")
    deg_k = getattr(k, "degree", 1)
    deg_K = K.degree
    if deg_K % deg_k:
        raise FieldError("target is not an extension of the source")
    m = deg_K // deg_k
    p = K.p
    prime = PrimeField(p)
    g = K.generator()
    # prime-linear map (lambda_0..lambda_{m-1}) in k^m  ->  sum e(lambda_t) g^t in K
    cols = []
    powers = [K.one()]
    for _ in range(1, m):
        powers.append(K.mul(powers[-1], g))
    k_basis = [k.from_coeffs([1 if t == u else 0 for t in range(deg_k)]) for u in range(deg_k)] \
        if isinstance(k, ExtensionField) else [k.one()]
    for t in range(m):
        for b in k_basis:
            val = K.mul(e.apply(b), powers[t])
            cols.append(_prime_coords(K, val))
    Mbig = Matrix(prime, zip(*cols))
    Minv = Mbig.inverse()
    if Minv is None:
        raise FieldError("power basis is not a relative basis (unexpected)")

    def in_relative_coords(x):
        sol = Minv.apply_vec(_prime_coords(K, x))
        out = []
        for t in range(m):
            chunk = sol[t * deg_k : (t + 1) * deg_k]
            out.append(chunk[0] if deg_k == 1 else k.from_coeffs(chunk))
        return tuple(out)

    mult = {}
    for a in range(m):
        for b in range(m):
            prod = K.mul(powers[a], powers[b])
            for t, c in enumerate(in_relative_coords(prod)):
                if not k.is_zero(c):
                    mult[(a, b, t)] = c
    unit = in_relative_coords(K.one())
    labels = ["1"] + [f"g^{t}" if t > 1 else "g" for t in range(1, m)]
    return FinAlgebra(k, m, mult, unit, labels)


def _prime_coords(F, x):
    if isinstance(F, PrimeField):
        return (x,)
    return tuple(x)


def dual_field_coalgebra(e: Embedding) -> Coalgebra:
    """Dual coalgebra of a finite field extension, over the source field."""
    A = relative_field_algebra(e)
    rep = A.validate()
    if not rep:
        raise FieldError(f"relative field algebra failed validation: {rep.message}")
    return dual_coalgebra(A)


def dual_algebra(C: Coalgebra) -> FinAlgebra:
    """Convolution algebra on the dual basis; associativity is re-validated."""
    rep = validate_coalgebra(C)
    if not rep:
        raise FieldError(f"invalid coalgebra: {rep.message}")
    mult = {(i, j, k): c for (k, i, j), c in C.delta.items()}
    labels = [C.label(k) + "*" for k in range(C.dim)]
    A = FinAlgebra(C.field, C.dim, mult, C.counit, labels)
    rep = A.validate()
    if not rep:
        raise FieldError(f"dual algebra failed validation: {rep.message}")
    return A


def dual_coalgebra(A: FinAlgebra) -> Coalgebra:
    """Dual of a finite-dimensional algebra; validity is checked."""
    rep = A.validate()
    if not rep:
        raise FieldError(f"invalid algebra: {rep.message}")
    delta = {(k, i, j): c for (i, j, k), c in A.mult.items()}
    labels = [(A.labels[k] if A.labels else f"e{k}") + "*" for k in range(A.dim)]
    C = Coalgebra(A.field, A.dim, delta, A.unit, labels)
    rep = validate_coalgebra(C)
    if not rep:
        raise FieldError(f"dual coalgebra failed validation: {rep.message}")
    return C


def direct_sum(C: Coalgebra, D: Coalgebra) -> Coalgebra:
    if C.field != D.field:
        raise FieldError("field mismatch in direct sum")
    n = C.dim
    delta = dict(C.delta)
    for (k, i, j), c in D.delta.items():
        delta[(k + n, i + n, j + n)] = c
    counit = C.counit + D.counit
    labels = None
    if C.labels and D.labels:
        labels = list(C.labels) + list(D.labels)
    return Coalgebra(C.field, n + D.dim, delta, counit, labels)


def scalar_extend_coalgebra(C: Coalgebra, e: Embedding) -> Coalgebra:
    if C.field != e.source:
        raise FieldError("coalgebra is not over the embedding source")
    delta = {key: e.apply(c) for key, c in C.delta.items()}
    counit = tuple(e.apply(c) for c in C.counit)
    return Coalgebra(e.target, C.dim, delta, counit, C.labels)


# ---------------------------------------------------------------------------
# the largest-subcoalgebra fixpoint


def largest_subcoalgebra(C: Coalgebra, W: Subspace) -> Subspace:
    """Maximal D <= W with Delta(D) <= D (x) D, by the decreasing fixpoint.

    Membership is a linear condition: project Delta(x) onto a complement of
    D (x) D inside C (x) C, taken in reduced-echelon coordinates.
    """
    if W.field != C.field or W.ambient != C.dim:
        raise FieldError("W is not a subspace of the underlying space of C")
    F = C.field
    n = C.dim
    current = W
    for _ in range(C.dim + 1):
        if current.dim == 0:
            return current
        tensor = Subspace.from_vectors(
            F,
            n * n,
            [
                [F.mul(a, b) for a in u for b in v]
                for u in current.basis
                for v in current.basis
            ],
        )
        residuals = [tensor.reduce(C.delta_vector(v)) for v in current.basis]
        if all(all(F.is_zero(x) for x in r) for r in residuals):
            return current
        lam = Matrix(F, residuals).transpose().kernel()
        vecs = []
        for xi in lam.basis:
            v = [F.zero()] * n
            for c, row in zip(xi, current.basis):
                for t in range(n):
                    v[t] = F.add(v[t], F.mul(c, row[t]))
            vecs.append(v)
        new = Subspace.from_vectors(F, n, vecs)
        if new.dim == current.dim:
            return new
        current = new
    raise RuntimeError("fixpoint failed to terminate (broken invariants)")


def subcoalgebra_check(C: Coalgebra, D: Subspace) -> bool:
    """Direct Delta(D) <= D (x) D membership check."""
    F = C.field
    n = C.dim
    tensor = Subspace.from_vectors(
        F, n * n, [[F.mul(a, b) for a in u for b in v] for u in D.basis for v in D.basis]
    )
    return all(tensor.contains(C.delta_vector(v)) for v in D.basis)


def is_coalgebra_morphism(src: Coalgebra, dst: Coalgebra, M: Matrix) -> bool:
    """Check (M (x) M) . Delta_src = Delta_dst . M and counit compatibility.

    M maps src coordinates to dst coordinates (dst.dim x src.dim).
    """
    if M.nrows != dst.dim or M.ncols != src.dim:
        raise FieldError("morphism matrix shape mismatch")
    F = src.field
    nd = dst.dim
    for k in range(src.dim):
        basis = tuple(F.one() if t == k else F.zero() for t in range(src.dim))
        lhs = [F.zero()] * (nd * nd)
        for (i, j), c in src.delta_of(k).items():
            mi = M.apply_vec(tuple(F.one() if t == i else F.zero() for t in range(src.dim)))
            mj = M.apply_vec(tuple(F.one() if t == j else F.zero() for t in range(src.dim)))
            for a in range(nd):
                if F.is_zero(mi[a]):
                    continue
                for b in range(nd):
                    lhs[a * nd + b] = F.add(lhs[a * nd + b], F.mul(c, F.mul(mi[a], mj[b])))
        rhs = dst.delta_vector(M.apply_vec(basis))
        if tuple(lhs) != tuple(rhs):
            return False
        if not F.eq(dst.counit_of(M.apply_vec(basis)), src.counit[k]):
            return False
    return True


def grouplike_elements(C: Coalgebra):
    """All grouplikes (Delta(x) = x(x)x, eps(x) = 1) by exhaustive search."""
    if not C.field.is_finite:
        raise FieldError("grouplike enumeration needs a finite field")
    F = C.field
    n = C.dim
    out = []
    for tup in product(list(F.elements()), repeat=n):
        if not F.eq(C.counit_of(tup), F.one()):
            continue
        target = tuple(F.mul(a, b) for a in tup for b in tup)
        if C.delta_vector(tup) == target:
            out.append(tup)
    return out


# ---------------------------------------------------------------------------
# radical and the geometric pointedness test


def radical(A: FinAlgebra) -> Subspace:
    """Jacobson radical of a finite-dimensional algebra over Q or GF(q).

    Over Q this is the kernel of the trace form (Dickson); in positive
    characteristic the trace conditions are layered over p-th power maps on
    the prime-field restriction.  A brute-force verifier double-checks the
    result at desk scale.
    """
    F = A.field
    if isinstance(F, RationalField):
        J = _trace_form_kernel(A)
    elif F.is_finite:
        J = _radical_char_p(A)
    else:
        raise FieldError("radical computation needs a finite field or Q")
    _verify_radical(A, J)
    return J


def _left_mult_matrices(A: FinAlgebra):
    return [A.left_mult_matrix(A.basis_vec(i)) for i in range(A.dim)]


def _trace(M: Matrix):
    F = M.field
    acc = F.zero()
    for i in range(M.nrows):
        acc = F.add(acc, M.rows[i][i])
    return acc


def _trace_form_kernel(A: FinAlgebra) -> Subspace:
    F = A.field
    L = _left_mult_matrices(A)
    G = Matrix(F, [[_trace(L[i].mul(L[j])) for j in range(A.dim)] for i in range(A.dim)])
    return G.kernel()


def _radical_char_p(A: FinAlgebra) -> Subspace:
    """Radical over GF(p^m) via characteristic-polynomial coefficient chains.

    Plain traces of p-th powers can vanish identically (already on the
    regular representation of M_2 over GF(2)), so the layered conditions use
    the char-poly coefficients c_{p^i} of left-multiplication matrices; on
    each chain member these are additive and p^i-semilinear, so every step
    is a Frobenius-twisted linear solve.
    """
    F = A.field
    p = F.characteristic
    m = getattr(F, "degree", 1)
    n = A.dim

    def lam(i, vec):
        # +/- coefficient of x^(n - p^i) in char(L_vec); 0 when p^i > n
        if p ** i > n:
            return F.zero()
        cp = A.left_mult_matrix(vec).char_poly()
        return cp[n - p ** i]

    l = 0
    while p ** l < n:
        l += 1
    current = Subspace.full(F, n)
    for i in range(l + 1):
        if current.dim == 0:
            break
        vecs = list(current.basis)
        rows = []
        for y in vecs:
            rows.append([lam(i, A.product_vec(x, y)) for x in vecs])
        eta = Matrix(F, rows).kernel()
        # undo the Frobenius twist xi = eta^(p^(-i)) coordinatewise
        shift = (m - (i % m)) % m
        untwist = p ** shift
        new_vecs = []
        for row in eta.basis:
            xi = [_field_pow(F, c, untwist) if shift else c for c in row]
            v = [F.zero()] * n
            for c, b in zip(xi, vecs):
                for t in range(n):
                    v[t] = F.add(v[t], F.mul(c, b[t]))
            new_vecs.append(v)
        current = Subspace.from_vectors(F, n, new_vecs)
    return current


def _field_pow(F, a, e):
    acc = F.one()
    base = a
    while e > 0:
        if e & 1:
            acc = F.mul(acc, base)
        base = F.mul(base, base)
        e >>= 1
    return acc


def _verify_radical(A: FinAlgebra, J: Subspace, enum_cap: int = 1 << 16):
    F = A.field
    # ideal check
    for v in J.basis:
        for i in range(A.dim):
            b = A.basis_vec(i)
            if not J.contains(A.product_vec(v, b)) or not J.contains(A.product_vec(b, v)):
                raise RuntimeError("computed radical is not an ideal")
    # nilpotency: J^(dim+1) = 0 via iterated span products
    span = J
    for _ in range(A.dim):
        if span.dim == 0:
            break
        vecs = [A.product_vec(u, v) for u in span.basis for v in J.basis]
        span = Subspace.from_vectors(F, A.dim, vecs)
    if span.dim != 0:
        raise RuntimeError("computed radical is not nilpotent")
    # semisimplicity of the quotient
    Q, proj, lift = quotient_algebra(A, J)
    if isinstance(F, RationalField):
        if _trace_form_kernel(Q).dim != 0:
            raise RuntimeError("quotient by computed radical is not semisimple")
    elif F.is_finite and F.order ** Q.dim <= enum_cap:
        if _has_square_zero_ideal(Q):
            raise RuntimeError("quotient by computed radical is not semisimple")


def _has_square_zero_ideal(Q: FinAlgebra) -> bool:
    """True iff some nonzero principal two-sided ideal squares to zero."""
    F = Q.field
    n = Q.dim
    zero = tuple(F.zero() for _ in range(n))
    for tup in product(list(F.elements()), repeat=n):
        if tup == zero:
            continue
        gens = [tup]
        for i in range(n):
            b = Q.basis_vec(i)
            gens.append(Q.product_vec(b, tup))
            gens.append(Q.product_vec(tup, b))
            for j in range(n):
                gens.append(Q.product_vec(Q.product_vec(Q.basis_vec(i), tup), Q.basis_vec(j)))
        ideal = Subspace.from_vectors(F, n, gens)
        ok = True
        for u in ideal.basis:
            for v in ideal.basis:
                if Q.product_vec(u, v) != zero:
                    ok = False
                    break
            if not ok:
                break
        if ok and ideal.dim > 0:
            return True
    return False


def quotient_algebra(A: FinAlgebra, J: Subspace):
    """Quotient by a two-sided ideal; returns (algebra, project fn, lift rows).

    Quotient basis = non-pivot coordinates of J's echelon basis, projected.
    """
    F = A.field
    n = A.dim
    pivots = []
    for row in J.basis:
        pivots.append(next(j for j, x in enumerate(row) if not F.is_zero(x)))
    free = [j for j in range(n) if j not in pivots]

    def project(vec):
        residual = J.reduce(vec)
        return tuple(residual[j] for j in free)

    lift_rows = []
    for j in free:
        lift_rows.append(tuple(F.one() if t == j else F.zero() for t in range(n)))
    mult = {}
    m = len(free)
    for a in range(m):
        for b in range(m):
            prod = project(A.product_vec(lift_rows[a], lift_rows[b]))
            for k, c in enumerate(prod):
                if not F.is_zero(c):
                    mult[(a, b, k)] = c
    unit = project(A.unit)
    Q = FinAlgebra(F, m, mult, unit)
    rep = Q.validate()
    if not rep:
        raise RuntimeError(f"quotient algebra failed validation: {rep.message}")
    return Q, project, lift_rows


def is_geometrically_pointed(C: Coalgebra) -> bool:
    """Pointedness after extension to the algebraic closure.

    Over a perfect ground field this is equivalent to commutativity of the
    dual algebra modulo its radical, which is what gets decided here.
    """
    F = C.field
    if not (F.is_finite or isinstance(F, RationalField)):
        raise FieldError("pointedness test supports finite fields and Q only")
    B = dual_algebra(C)
    J = radical(B)
    Q, _, _ = quotient_algebra(B, J)
    return Q.is_commutative()
