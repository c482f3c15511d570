"""Exact linear algebra over a field handle: matrices, subspaces, kernels.

Matrices are immutable (tuple-of-tuples of raw field elements) and carry
their field.  Subspaces are stored as reduced row-echelon bases with no
zero rows, so subspace equality is plain basis equality.
"""

from __future__ import annotations

from .fields import Field, FieldError, Embedding


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise FieldError("ragged matrix")

    # constructors -----------------------------------------------------

    @staticmethod
    def zero(field, nrows, ncols):
        z = field.zero()
        return Matrix(field, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_ints(field, rows):
        return Matrix(field, [[field.from_int(x) for x in r] for r in rows])

    @staticmethod
    def companion(field, monic_poly):
        """Companion matrix of a monic polynomial (degree >= 1)."""
        n = len(monic_poly) - 1
        if n < 1 or not field.eq(monic_poly[-1], field.one()):
            raise FieldError("companion matrix needs a monic polynomial of degree >= 1")
        z, o = field.zero(), field.one()
        rows = [[z] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = o
        for i in range(n):
            rows[i][n - 1] = field.neg(monic_poly[i])
        return Matrix(field, rows)

    # basics -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.to_str(x) for x in r) for r in self.rows)
        return f"Matrix[{body}]"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self):
        return Matrix(self.field, zip(*self.rows)) if self.rows else self

    def add(self, other):
        self._compat(other)
        F = self.field
        return Matrix(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def sub(self, other):
        self._compat(other)
        F = self.field
        return Matrix(F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        F = self.field
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows])

    def mul(self, other):
        if self.field != other.field:
            raise FieldError("field mismatch")
        if self.ncols != other.nrows:
            raise FieldError("shape mismatch in matrix product")
        F = self.field
        bt = other.transpose().rows
        out = []
        for r in self.rows:
            row = []
            for c in bt:
                acc = F.zero()
                for a, b in zip(r, c):
                    acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(F, out)

    def __matmul__(self, other):
        return self.mul(other)

    def pow(self, n: int):
        if self.nrows != self.ncols:
            raise FieldError("power of a non-square matrix")
        acc = Matrix.identity(self.field, self.nrows)
        base = self
        while n > 0:
            if n & 1:
                acc = acc.mul(base)
            base = base.mul(base)
            n >>= 1
        return acc

    def apply_vec(self, vec):
        F = self.field
        out = []
        for r in self.rows:
            acc = F.zero()
            for a, x in zip(r, vec):
                acc = F.add(acc, F.mul(a, x))
            out.append(acc)
        return tuple(out)

    def is_zero(self):
        F = self.field
        return all(F.is_zero(x) for r in self.rows for x in r)

    def _compat(self, other):
        if self.field != other.field:
            raise FieldError("field mismatch")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise FieldError("shape mismatch")

    # elimination ------------------------------------------------------

    def rref(self):
        """Reduced row-echelon form; returns (matrix, pivot column list)."""
        F = self.field
        rows = [list(r) for r in self.rows]
        pivots = []
        lead = 0
        for col in range(self.ncols):
            pivot_row = None
            for r in range(lead, len(rows)):
                if not F.is_zero(rows[r][col]):
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
            inv = F.inv(rows[lead][col])
            rows[lead] = [F.mul(inv, x) for x in rows[lead]]
            for r in range(len(rows)):
                if r != lead and not F.is_zero(rows[r][col]):
                    c = rows[r][col]
                    rows[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[r], rows[lead])]
            pivots.append(col)
            lead += 1
            if lead == len(rows):
                break
        return Matrix(F, rows), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Right kernel {x : Mx = 0} as a subspace of k^ncols."""
        F = self.field
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for fc in free:
            v = [F.zero()] * self.ncols
            v[fc] = F.one()
            for i, pc in enumerate(pivots):
                v[pc] = F.neg(red.rows[i][fc])
            basis.append(v)
        return Subspace.from_vectors(F, self.ncols, basis)

    def image(self):
        """Column space (image of x -> Mx) as a subspace of k^nrows."""
        return Subspace.from_vectors(self.field, self.nrows, self.transpose().rows)

    def row_space(self):
        return Subspace.from_vectors(self.field, self.ncols, self.rows)

    def inverse(self):
        if self.nrows != self.ncols:
            raise FieldError("inverse of a non-square matrix")
        F = self.field
        n = self.nrows
        aug = Matrix(F, [list(r) + list(Matrix.identity(F, n).rows[i]) for i, r in enumerate(self.rows)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            return None
        return Matrix(F, [r[n:] for r in red.rows])

    def det(self):
        """Determinant via the characteristic polynomial's constant term."""
        cp = self.char_poly()
        c0 = cp[0] if cp else self.field.zero()
        if self.nrows % 2 == 1:
            c0 = self.field.neg(c0)
        return c0

    def char_poly(self):
        """Characteristic polynomial det(xI - M), division-free (Berkowitz).

        Returns coefficients low-to-high; always monic of degree n.
        """
        F = self.field
        n = self.nrows
        if n != self.ncols:
            raise FieldError("characteristic polynomial of a non-square matrix")
        if n == 0:
            return (F.one(),)
        # coefficients in descending powers during the iteration
        coeffs = [F.one(), F.neg(self.rows[0][0])]
        for k in range(1, n):
            m = self.rows
            R = [m[k][j] for j in range(k)]
            C = [m[i][k] for i in range(k)]
            A = [[m[i][j] for j in range(k)] for i in range(k)]
            # Toeplitz column: 1, -a_kk, -RC, -RAC, ..., -RA^(k-1)C
            toep = [F.one(), F.neg(m[k][k])]
            cur = C
            for _ in range(k):
                toep.append(F.neg(_dot(F, R, cur)))
                cur = [_dot(F, A[i], cur) for i in range(k)]
            new = [F.zero()] * (k + 2)
            for i, ti in enumerate(toep):
                for j, cj in enumerate(coeffs):
                    if i + j < k + 2:
                        new[i + j] = F.add(new[i + j], F.mul(ti, cj))
            coeffs = new
        return tuple(reversed(coeffs))

    def map_entries(self, fn):
        return Matrix(self.field, [[fn(x) for x in r] for r in self.rows])

    def kron(self, other):
        """Kronecker product, row-major block layout."""
        if self.field != other.field:
            raise FieldError("field mismatch")
        F = self.field
        out = []
        for r1 in self.rows:
            for r2 in other.rows:
                out.append([F.mul(a, b) for a in r1 for b in r2])
        return Matrix(F, out)

    def hstack(self, other):
        if self.nrows != other.nrows or self.field != other.field:
            raise FieldError("hstack mismatch")
        return Matrix(self.field, [list(a) + list(b) for a, b in zip(self.rows, other.rows)])


def _dot(F, xs, ys):
    acc = F.zero()
    for a, b in zip(xs, ys):
        acc = F.add(acc, F.mul(a, b))
    return acc


class Subspace:
    """A subspace of k^n stored as an RREF basis matrix (rows), no zero rows."""

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field, ambient, basis_rows):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in basis_rows)

    @staticmethod
    def from_vectors(field, ambient, vectors):
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise FieldError("vector length does not match ambient dimension")
        if not vectors:
            return Subspace(field, ambient, ())
        red, pivots = Matrix(field, vectors).rref()
        return Subspace(field, ambient, red.rows[: len(pivots)])

    @staticmethod
    def full(field, ambient):
        return Subspace(field, ambient, Matrix.identity(field, ambient).rows)

    @staticmethod
    def zero(field, ambient):
        return Subspace(field, ambient, ())

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient == self.ambient
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"

    def contains(self, vector):
        vector = tuple(vector)
        if len(vector) != self.ambient:
            raise FieldError("ambient dimension mismatch")
        return self.coords(vector) is not None

    def coords(self, vector):
        """Coordinates of `vector` in the RREF basis, or None if outside."""
        coords, residual = self._reduce(vector)
        F = self.field
        if any(not F.is_zero(x) for x in residual):
            return None
        return tuple(coords)

    def reduce(self, vector):
        """Residual of `vector` after reduction against the basis."""
        return self._reduce(vector)[1]

    def _reduce(self, vector):
        F = self.field
        v = list(vector)
        coords = []
        for row in self.basis:
            pivot = next(j for j, x in enumerate(row) if not F.is_zero(x))
            c = v[pivot]
            coords.append(c)
            if not F.is_zero(c):
                v = [F.sub(a, F.mul(c, b)) for a, b in zip(v, row)]
        return coords, tuple(v)

    def sum(self, other):
        self._compat(other)
        return Subspace.from_vectors(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersect(self, other):
        """Intersection via the kernel of the stacked-basis system."""
        self._compat(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        F = self.field
        stacked = Matrix(F, list(self.basis) + list(other.basis)).transpose()
        ker = stacked.kernel()
        vecs = []
        for lam in ker.basis:
            v = [F.zero()] * self.ambient
            for c, row in zip(lam[: self.dim], self.basis):
                for j in range(self.ambient):
                    v[j] = F.add(v[j], F.mul(c, row[j]))
            vecs.append(v)
        return Subspace.from_vectors(F, self.ambient, vecs)

    def is_subspace_of(self, other):
        self._compat(other)
        return all(other.contains(v) for v in self.basis)

    def _compat(self, other):
        if self.field != other.field or self.ambient != other.ambient:
            raise FieldError("ambient-dimension mismatch")


# ---------------------------------------------------------------------------
# scalar extension


def scalar_extend_matrix(M: Matrix, e: Embedding) -> Matrix:
    if M.field != e.source:
        raise FieldError("matrix is not over the embedding source")
    return Matrix(e.target, [[e.apply(x) for x in r] for r in M.rows])


def scalar_extend_subspace(S: Subspace, e: Embedding) -> Subspace:
    if S.field != e.source:
        raise FieldError("subspace is not over the embedding source")
    return Subspace.from_vectors(
        e.target, S.ambient, [[e.apply(x) for x in row] for row in S.basis]
    )


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    return A.kron(B)
