"""Integer-coded finite-field arithmetic on numpy arrays.

Elements of GF(p^s) are stored as length-s vectors of prime residues, so
bulk operations become integer einsums mod p.  This is an internal speed
layer: all values are exact, only the representation changes.
"""

from __future__ import annotations

import numpy as np

from .fields import ExtensionField, Field, FieldError, PrimeField


class Coded:
    """Prime-coordinate view of a finite field."""

    def __init__(self, field: Field):
        if isinstance(field, PrimeField):
            self.p, self.s = field.p, 1
        elif isinstance(field, ExtensionField):
            self.p, self.s = field.p, field.degree
        else:
            raise FieldError("coded arithmetic needs a finite field")
        self.field = field
        p, s = self.p, self.s
        # multiplication tensor: basis_u * basis_v = sum_w M[u,v,w] basis_w
        M = np.zeros((s, s, s), dtype=np.int64)
        if s == 1:
            M[0, 0, 0] = 1
        else:
            for u in range(s):
                for v in range(s):
                    prod = field.mul(self._basis_raw(u), self._basis_raw(v))
                    M[u, v, :] = prod
        self.mul_tensor = M
        self.one = np.zeros(s, dtype=np.int64)
        self.one[0] = 1

    def _basis_raw(self, u):
        coeffs = [0] * self.s
        coeffs[u] = 1
        return self.field.from_coeffs(coeffs)

    # encoding ----------------------------------------------------------

    def encode(self, raw) -> np.ndarray:
        """Raw field element -> length-s int vector."""
        if self.s == 1:
            return np.array([raw % self.p], dtype=np.int64)
        return np.array(raw, dtype=np.int64)

    def encode_many(self, raws) -> np.ndarray:
        return np.stack([self.encode(r) for r in raws]) if raws else np.zeros((0, self.s), np.int64)

    def decode(self, vec):
        if self.s == 1:
            return int(vec[0]) % self.p
        return tuple(int(x) % self.p for x in vec)

    # arithmetic ----------------------------------------------------------

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Elementwise field product of coordinate arrays (..., s)."""
        return np.einsum("...u,...v,uvw->...w", X, Y, self.mul_tensor) % self.p

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched matrix product: A (..., n, m, s) @ B (..., m, r, s)."""
        return np.einsum("...iku,...kjv,uvw->...ijw", A, B, self.mul_tensor) % self.p

    def identity_mat(self, n: int) -> np.ndarray:
        out = np.zeros((n, n, self.s), dtype=np.int64)
        for i in range(n):
            out[i, i, 0] = 1
        return out

    def encode_matrix(self, M) -> np.ndarray:
        """cogebra Matrix -> (n, m, s) array."""
        return np.array(
            [[self.encode(x) for x in row] for row in M.rows], dtype=np.int64
        ).reshape(M.nrows, M.ncols, self.s)

    def decode_matrix(self, arr):
        from .linalg import Matrix

        n, m = arr.shape[0], arr.shape[1]
        return Matrix(self.field, [[self.decode(arr[i, j]) for j in range(m)] for i in range(n)])

    # exact Gaussian elimination on flattened GF(p)-coordinates ----------

    def rref_rows(self, rows: np.ndarray):
        """RREF of GF(p^s)-row-vectors given as (k, L, s) arrays.

        Returns (basis (r, L, s), pivot column indices).  Field inversion of
        pivots goes through the exact field handle.
        """
        if rows.size == 0:
            return rows.reshape(0, rows.shape[1] if rows.ndim > 1 else 0, self.s), []
        basis = []
        pivots = []
        for row in rows:
            row = self._reduce_row(row, basis, pivots)
            piv = self._first_nonzero(row)
            if piv is None:
                continue
            inv = self.encode(self.field.inv(self.decode(row[piv])))
            row = np.einsum("lu,v,uvw->lw", row, inv, self.mul_tensor) % self.p
            # clear the new pivot from existing basis rows
            for t in range(len(basis)):
                c = basis[t][piv].copy()
                if c.any():
                    basis[t] = (basis[t] - np.einsum("u,lv,uvw->lw", c, row, self.mul_tensor)) % self.p
            basis.append(row)
            pivots.append(piv)
        order = np.argsort(pivots, kind="stable")
        basis = [basis[i] for i in order]
        pivots = [pivots[i] for i in order]
        arr = np.stack(basis) if basis else np.zeros((0, rows.shape[1], self.s), np.int64)
        return arr, pivots

    def _reduce_row(self, row, basis, pivots):
        row = row % self.p
        for b, piv in zip(basis, pivots):
            c = row[piv].copy()
            if c.any():
                row = (row - np.einsum("u,lv,uvw->lw", c, b, self.mul_tensor)) % self.p
        return row

    def reduce_against(self, row, basis, pivots):
        return self._reduce_row(row, basis, pivots)

    def _first_nonzero(self, row):
        nz = np.nonzero(row.any(axis=-1))[0]
        return int(nz[0]) if nz.size else None

    def coords_in_basis(self, row, basis, pivots):
        """Coordinates of `row` in an RREF basis, or None if outside."""
        row = row % self.p
        coords = []
        for b, piv in zip(basis, pivots):
            c = row[piv].copy()
            coords.append(c)
            if c.any():
                row = (row - np.einsum("u,lv,uvw->lw", c, b, self.mul_tensor)) % self.p
        if row.any():
            return None
        return np.stack(coords) if coords else np.zeros((0, self.s), np.int64)
